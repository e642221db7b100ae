#include "imgctx/dom.hpp"

#include <charconv>
#include <stdexcept>

#include "imgctx/errors.hpp"
#include "imgctx/text_util.hpp"

namespace imgctx {

NodeId DomTree::root() const {
    if (nodes_.empty()) throw std::out_of_range("empty tree has no root");
    return 0;
}

const DomNode& DomTree::node(NodeId id) const {
    if (id >= nodes_.size()) throw std::out_of_range("unknown node id");
    return nodes_[id];
}

const std::string* DomTree::attr(NodeId id, std::string_view name) const {
    const DomNode& n = node(id);
    std::string lower = to_lower_ascii(name);
    for (const auto& [attr_name, value] : n.attributes)
        if (attr_name == lower) return &value;
    return nullptr;
}

std::vector<NodeId> DomTree::ancestor_chain(NodeId from) const {
    std::vector<NodeId> chain;
    std::optional<NodeId> cur = from;
    while (cur) {
        chain.push_back(*cur);
        cur = node(*cur).parent;
    }
    return chain;
}

bool DomTree::is_ancestor_or_self(NodeId ancestor, NodeId id) const {
    std::optional<NodeId> cur = id;
    while (cur) {
        if (*cur == ancestor) return true;
        cur = node(*cur).parent;
    }
    return false;
}

std::size_t DomTree::child_index(NodeId id) const {
    const DomNode& n = node(id);
    if (!n.parent) throw std::out_of_range("root has no child index");
    const auto& siblings = node(*n.parent).children;
    for (std::size_t i = 0; i < siblings.size(); ++i)
        if (siblings[i] == id) return i;
    throw std::out_of_range("node missing from parent's child list");
}

bool DomTree::has_ancestor_tag(NodeId id, std::string_view tag_a,
                               std::string_view tag_b) const {
    std::optional<NodeId> cur = node(id).parent;
    while (cur) {
        const DomNode& n = node(*cur);
        if (n.is_element() && (n.tag == tag_a || (!tag_b.empty() && n.tag == tag_b)))
            return true;
        cur = n.parent;
    }
    return false;
}

void DomTree::for_each_in_subtree(
    NodeId root, const std::function<void(const DomNode&)>& fn) const {
    std::vector<NodeId> stack{root};
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        const DomNode& n = node(id);
        fn(n);
        for (auto it = n.children.rbegin(); it != n.children.rend(); ++it)
            stack.push_back(*it);
    }
}

std::vector<NodeId> DomTree::element_children(NodeId id) const {
    std::vector<NodeId> out;
    for (NodeId c : node(id).children)
        if (node(c).is_element()) out.push_back(c);
    return out;
}

NodeId DomTree::add_element(std::string tag, std::optional<NodeId> parent) {
    DomNode n;
    n.id = static_cast<NodeId>(nodes_.size());
    n.kind = NodeKind::Element;
    n.tag = to_upper_ascii(tag);
    n.parent = parent;
    nodes_.push_back(std::move(n));
    if (parent) nodes_[*parent].children.push_back(nodes_.back().id);
    return nodes_.back().id;
}

NodeId DomTree::add_text(std::string text, NodeId parent) {
    DomNode n;
    n.id = static_cast<NodeId>(nodes_.size());
    n.kind = NodeKind::Text;
    n.text = std::move(text);
    n.parent = parent;
    nodes_.push_back(std::move(n));
    nodes_[parent].children.push_back(nodes_.back().id);
    return nodes_.back().id;
}

NodeId DomTree::add_comment(std::string text, NodeId parent) {
    DomNode n;
    n.id = static_cast<NodeId>(nodes_.size());
    n.kind = NodeKind::Comment;
    n.text = std::move(text);
    n.parent = parent;
    nodes_.push_back(std::move(n));
    nodes_[parent].children.push_back(nodes_.back().id);
    return nodes_.back().id;
}

void DomTree::set_attr(NodeId id, std::string name, std::string value) {
    if (id >= nodes_.size()) throw std::out_of_range("unknown node id");
    nodes_[id].attributes.emplace_back(to_lower_ascii(name), std::move(value));
}

void DomTree::validate() const {
    std::size_t roots = 0;
    for (const DomNode& n : nodes_) {
        if (!n.parent) {
            ++roots;
        } else {
            const auto& siblings = node(*n.parent).children;
            bool linked = false;
            for (NodeId c : siblings) linked = linked || c == n.id;
            if (!linked) throw Error("node not linked from its parent");
        }
        for (NodeId c : n.children) {
            if (node(c).parent != n.id) throw Error("child/parent link mismatch");
            if (c <= n.id) throw Error("child created before parent (cycle?)");
        }
        if (!n.is_element() && (!n.children.empty() || !n.attributes.empty()))
            throw Error("text/comment node with children or attributes");
    }
    if (roots != 1) throw Error("tree must have exactly one root");
}

namespace {

// Positive-integer attribute or nothing; "0", "abc", "50px" all read as absent.
std::optional<int> parse_dimension(const DomTree& tree, NodeId id,
                                   const char* name) {
    const std::string* raw = tree.attr(id, name);
    if (!raw) return std::nullopt;
    std::string_view s = trim(*raw);
    if (s.empty()) return std::nullopt;
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || value <= 0)
        return std::nullopt;
    return value;
}

ImageRef image_ref_of(const DomTree& tree, const DomNode& n) {
    ImageRef ref;
    ref.node = n.id;
    ref.width_px = parse_dimension(tree, n.id, "width");
    ref.height_px = parse_dimension(tree, n.id, "height");
    if (const std::string* src = tree.attr(n.id, "src")) ref.src = *src;
    if (const std::string* alt = tree.attr(n.id, "alt")) ref.alt = *alt;
    return ref;
}

}  // namespace

std::vector<ImageRef> collect_images(const DomTree& tree) {
    std::vector<ImageRef> images;
    if (tree.empty()) return images;
    tree.for_each_in_subtree(tree.root(), [&](const DomNode& n) {
        if (n.is_element() && n.tag == "IMG")
            images.push_back(image_ref_of(tree, n));
    });
    return images;
}

bool is_valid_image(const ImageRef& img, bool strict_dims) {
    if (!img.width_px || !img.height_px) return !strict_dims;
    const double w = *img.width_px;
    const double h = *img.height_px;
    const double ratio = w / h;
    if (ratio < 0.2 || ratio > 5.0) return false;
    if (w >= 60 || h >= 60) return true;
    // Small square-ish images between 45 and 60 pixels are kept.
    return w >= 45 && h >= 45 && ratio >= 0.5 && ratio <= 2.0;
}

bool is_countable_text(const DomTree& tree, NodeId id,
                       const TextCountPolicy& policy) {
    const DomNode& n = tree.node(id);
    if (n.is_comment() && !policy.count_script_and_comment_text) return false;
    if (n.is_element()) return false;
    if (static_cast<int>(trim(n.text).size()) < policy.min_visible_chars)
        return false;
    if (!policy.count_script_and_comment_text &&
        tree.has_ancestor_tag(id, "SCRIPT", "STYLE"))
        return false;
    return true;
}

int count_text_nodes(const DomTree& tree, NodeId subtree_root,
                     const TextCountPolicy& policy) {
    int count = 0;
    tree.for_each_in_subtree(subtree_root, [&](const DomNode& n) {
        if (!n.is_element() && is_countable_text(tree, n.id, policy)) ++count;
    });
    return count;
}

int count_image_nodes(const DomTree& tree, NodeId subtree_root,
                      bool strict_dims) {
    int count = 0;
    tree.for_each_in_subtree(subtree_root, [&](const DomNode& n) {
        if (n.is_element() && n.tag == "IMG" &&
            is_valid_image(image_ref_of(tree, n), strict_dims))
            ++count;
    });
    return count;
}

}  // namespace imgctx
