#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace imgctx {

using NodeId = std::uint32_t;

enum class NodeKind { Element, Text, Comment };

// Simplified parsed HTML node. Element tags are uppercase-normalized and
// attribute names case-folded to lowercase; text/comment nodes carry their
// character content and never have children or attributes.
struct DomNode {
    NodeId id = 0;
    NodeKind kind = NodeKind::Element;
    std::string tag;  // element kind only
    std::vector<std::pair<std::string, std::string>> attributes;
    std::string text;  // text/comment kinds
    std::optional<NodeId> parent;
    std::vector<NodeId> children;

    bool is_element() const { return kind == NodeKind::Element; }
    bool is_text() const { return kind == NodeKind::Text; }
    bool is_comment() const { return kind == NodeKind::Comment; }
};

// Arena-backed document tree. Node ids are creation order, which the parser
// guarantees to be document (pre-)order. Immutable after parsing; all
// traversal operations are read-only and safe to share across threads.
class DomTree {
public:
    NodeId root() const;
    bool empty() const { return nodes_.empty(); }
    std::size_t size() const { return nodes_.size(); }

    const DomNode& node(NodeId id) const;  // throws std::out_of_range

    // Case-insensitive attribute lookup on an element; nullptr when absent.
    const std::string* attr(NodeId id, std::string_view name) const;

    std::vector<NodeId> ancestor_chain(NodeId from) const;  // from .. root
    bool is_ancestor_or_self(NodeId ancestor, NodeId node) const;
    std::size_t child_index(NodeId id) const;  // position within parent
    bool has_ancestor_tag(NodeId id, std::string_view tag_a,
                          std::string_view tag_b = {}) const;

    // Pre-order walk over the subtree rooted at `root` (inclusive).
    void for_each_in_subtree(NodeId root,
                             const std::function<void(const DomNode&)>& fn) const;

    std::vector<NodeId> element_children(NodeId id) const;

    // Builders (parser / fixture / test use; trees are conventionally
    // immutable once handed out).
    NodeId add_element(std::string tag, std::optional<NodeId> parent);
    NodeId add_text(std::string text, NodeId parent);
    NodeId add_comment(std::string text, NodeId parent);
    void set_attr(NodeId id, std::string name, std::string value);

    // Checks the structural invariants (single root, parent/child agreement,
    // leaf-only text/comments). Throws Error on violation.
    void validate() const;

private:
    std::vector<DomNode> nodes_;
};

// One image element plus the attributes the validity filter needs.
// Dimension fields are present only when the width/height attributes parse
// as positive integers.
struct ImageRef {
    NodeId node = 0;
    std::optional<int> width_px;
    std::optional<int> height_px;
    std::string src;
    std::optional<std::string> alt;
};

// What counts as a user-visible text node for segmentation purposes.
struct TextCountPolicy {
    int min_visible_chars = 1;
    bool count_script_and_comment_text = false;
};

// Parses an HTML byte sequence into a DomTree, recovering from malformed
// markup. Supported encodings: utf-8 (default), iso-8859-1/latin-1, ascii.
// Throws DecodeError / EmptyDocumentError.
DomTree parse_html(std::string_view bytes, std::string_view encoding = "utf-8");

// Structure-preserving serialization; parse_html(serialize_html(t)) is
// isomorphic to t.
std::string serialize_html(const DomTree& tree);

// All IMG elements in document order.
std::vector<ImageRef> collect_images(const DomTree& tree);

// Size filter for images worth segmenting: width-height ratio within
// [1/5, 5], and either one side >= 60px or the square-ish 45..59px case.
// Images with unknown dimensions pass unless strict_dims.
bool is_valid_image(const ImageRef& img, bool strict_dims = false);

bool is_countable_text(const DomTree& tree, NodeId id,
                       const TextCountPolicy& policy = {});

int count_text_nodes(const DomTree& tree, NodeId subtree_root,
                     const TextCountPolicy& policy = {});

int count_image_nodes(const DomTree& tree, NodeId subtree_root,
                      bool strict_dims = false);

}  // namespace imgctx
