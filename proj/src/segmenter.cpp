#include "imgctx/segmenter.hpp"

#include <algorithm>

#include "imgctx/errors.hpp"

namespace imgctx {
namespace {

int valid_images_in_children(const DomTree& tree, const std::vector<NodeId>& children,
                             std::size_t first, std::size_t last, bool strict_dims) {
    int n = 0;
    for (std::size_t i = first; i <= last && i < children.size(); ++i)
        n += count_image_nodes(tree, children[i], strict_dims);
    return n;
}

int countable_text_in_slice(const DomTree& tree, const std::vector<NodeId>& children,
                            const ChildSlice& slice, const TextCountPolicy& policy) {
    int n = 0;
    for (std::size_t i = slice.first; i <= slice.last && i < children.size(); ++i)
        n += count_text_nodes(tree, children[i], policy);
    return n;
}

void append_signature(const DomTree& tree, NodeId id, int depth, std::string& out) {
    const DomNode& n = tree.node(id);
    out += n.tag;
    if (depth == 0) return;
    out += "(";
    for (NodeId c : tree.element_children(id)) {
        append_signature(tree, c, depth - 1, out);
        out += ",";
    }
    out += ")";
}

std::string signature(const DomTree& tree, NodeId id) {
    std::string out;
    append_signature(tree, id, 2, out);
    return out;
}

std::vector<NodeId> collect_text_nodes(const DomTree& tree, NodeId root,
                                       const TextCountPolicy& policy) {
    std::vector<NodeId> out;
    tree.for_each_in_subtree(root, [&](const DomNode& n) {
        if (!n.is_element() && is_countable_text(tree, n.id, policy))
            out.push_back(n.id);
    });
    return out;
}

// Child of `container` lying on the ancestor path of `descendant`.
std::optional<NodeId> path_child(const DomTree& tree, NodeId container,
                                 NodeId descendant) {
    std::optional<NodeId> cur = descendant;
    while (cur) {
        const DomNode& n = tree.node(*cur);
        if (n.parent && *n.parent == container) return cur;
        cur = n.parent;
    }
    return std::nullopt;
}

}  // namespace

std::string to_string(ImageArrangement a) {
    switch (a) {
        case ImageArrangement::Unlisted: return "unlisted";
        case ImageArrangement::Listed: return "listed";
        case ImageArrangement::SemiListed: return "semi-listed";
    }
    return "unlisted";
}

std::optional<std::vector<ChildSlice>> detect_repeating_pattern(
    const DomTree& tree, NodeId container, bool strict_dims) {
    const std::vector<NodeId>& children = tree.node(container).children;
    std::vector<std::size_t> elem_idx;
    std::vector<std::string> tags;
    for (std::size_t i = 0; i < children.size(); ++i) {
        const DomNode& c = tree.node(children[i]);
        if (c.is_element()) {
            elem_idx.push_back(i);
            tags.push_back(c.tag);
        }
    }
    const std::size_t n_elems = tags.size();
    if (n_elems < 2) return std::nullopt;

    for (std::size_t period = 1; period < n_elems; ++period) {
        const std::size_t full = n_elems / period;
        const std::size_t rem = n_elems % period;

        bool tags_ok = true;
        for (std::size_t i = period; i < n_elems && tags_ok; ++i)
            tags_ok = tags[i] == tags[i % period];
        if (!tags_ok) continue;

        // Every full repetition must carry exactly one valid image; a trailing
        // partial repetition may carry at most one. A partial with an image is
        // a repetition of its own, an empty one joins the last full slice.
        bool images_ok = true;
        for (std::size_t r = 0; r < full && images_ok; ++r) {
            std::size_t first = elem_idx[r * period];
            std::size_t last = (r + 1) * period < n_elems
                                   ? elem_idx[(r + 1) * period] - 1
                                   : children.size() - 1;
            images_ok = valid_images_in_children(tree, children, first, last,
                                                 strict_dims) == 1;
        }
        if (!images_ok) continue;
        int trailing_images = 0;
        if (rem > 0) {
            std::size_t first = elem_idx[full * period];
            trailing_images = valid_images_in_children(tree, children, first,
                                                       children.size() - 1, strict_dims);
            if (trailing_images > 1) continue;
        }
        const std::size_t repetitions = full + (trailing_images == 1 ? 1 : 0);
        if (repetitions < 2) continue;

        std::vector<std::size_t> starts;
        for (std::size_t r = 0; r < full; ++r) starts.push_back(elem_idx[r * period]);
        if (rem > 0 && trailing_images == 1) starts.push_back(elem_idx[full * period]);
        starts.front() = 0;  // leading non-element children join the first slice

        std::vector<ChildSlice> slices;
        for (std::size_t s = 0; s < starts.size(); ++s) {
            ChildSlice slice;
            slice.first = starts[s];
            slice.last = s + 1 < starts.size() ? starts[s + 1] - 1 : children.size() - 1;
            slices.push_back(slice);
        }
        return slices;
    }
    return std::nullopt;
}

bool similar_structure(const DomTree& tree, NodeId a, NodeId b) {
    if (!tree.node(a).is_element() || !tree.node(b).is_element()) return false;
    return signature(tree, a) == signature(tree, b);
}

ImageSegment segment_image(const DomTree& tree, const ImageRef& img,
                           const TextCountPolicy& policy, bool strict_dims) {
    ImageSegment seg;
    seg.image = img;

    TraversalState st;
    std::optional<NodeId> inner;

    for (NodeId anc : tree.ancestor_chain(img.node)) {
        st.state_text = count_text_nodes(tree, anc, policy);
        st.state_img = count_image_nodes(tree, anc, strict_dims);
        if (st.state_text == st.state || st.state_img <= 0 || st.state_text <= 0)
            continue;

        if (!st.state_changed_twice) {
            // First change: candidate inner region. Check whether the image is
            // one of several semi-listed repetitions at this level first.
            inner = anc;
            if (auto slices = detect_repeating_pattern(tree, anc, strict_dims)) {
                const auto& children = tree.node(anc).children;
                if (auto child = path_child(tree, anc, img.node)) {
                    std::size_t idx = tree.child_index(*child);
                    for (const ChildSlice& slice : *slices) {
                        if (idx < slice.first || idx > slice.last) continue;
                        if (countable_text_in_slice(tree, children, slice, policy) < 1)
                            break;  // slice violates the one-text rule; keep walking
                        seg.segment_root = anc;
                        seg.arrangement = ImageArrangement::SemiListed;
                        seg.inner_root = anc;
                        seg.slice = slice;
                        for (std::size_t i = slice.first; i <= slice.last; ++i)
                            for (NodeId t : collect_text_nodes(tree, children[i], policy))
                                seg.text_node_ids.push_back(t);
                        return seg;
                    }
                }
            }
            st.state = st.state_text;
            st.state_changed_twice = true;
            continue;
        }

        // Second change: decide listed vs unlisted by inspecting the siblings
        // of the inner region.
        seg.inner_root = *inner;
        seg.outer_root = anc;
        int similar_with_image = 0;
        if (const auto& parent = tree.node(*inner).parent) {
            for (NodeId sib : tree.element_children(*parent)) {
                if (similar_structure(tree, *inner, sib) &&
                    count_image_nodes(tree, sib, strict_dims) >= 1)
                    ++similar_with_image;
            }
        }
        if (similar_with_image >= 2) {
            seg.arrangement = ImageArrangement::Listed;
            seg.segment_root = *inner;
        } else {
            seg.arrangement = ImageArrangement::Unlisted;
            seg.segment_root = anc;
        }
        seg.text_node_ids = collect_text_nodes(tree, seg.segment_root, policy);
        return seg;
    }

    if (!inner)
        throw NoSegmentError("image has no countable text on its root path");

    // Root reached with a single change: only the inner region is defined.
    seg.inner_root = *inner;
    seg.segment_root = *inner;
    seg.arrangement = ImageArrangement::Unlisted;
    seg.text_node_ids = collect_text_nodes(tree, seg.segment_root, policy);
    return seg;
}

PageSegmentation segment_page(const DomTree& tree, const TextCountPolicy& policy,
                              bool strict_dims) {
    PageSegmentation result;
    if (tree.empty()) return result;
    for (const ImageRef& img : collect_images(tree)) {
        if (!is_valid_image(img, strict_dims)) continue;
        try {
            result.segments.push_back(segment_image(tree, img, policy, strict_dims));
        } catch (const NoSegmentError& e) {
            result.skipped.push_back({img, e.what()});
        }
    }
    return result;
}

}  // namespace imgctx
