#pragma once

#include <optional>
#include <string>
#include <vector>

#include "imgctx/dom.hpp"

namespace imgctx {

enum class ImageArrangement { Unlisted, Listed, SemiListed };

std::string to_string(ImageArrangement a);

// Inclusive range of child indices of a container element. Semi-listed
// segments are slices of their container rather than whole subtrees.
struct ChildSlice {
    std::size_t first = 0;
    std::size_t last = 0;
    bool operator==(const ChildSlice&) const = default;
};

// One valid image together with the region of the tree bounding its
// contextual information. segment_root is an ancestor of the image node;
// for SemiListed segments the region is the `slice` of segment_root's
// children that holds the image.
struct ImageSegment {
    ImageRef image;
    NodeId segment_root = 0;
    ImageArrangement arrangement = ImageArrangement::Unlisted;
    std::vector<NodeId> text_node_ids;
    NodeId inner_root = 0;                 // first text-count change
    std::optional<NodeId> outer_root;      // second change, when reached
    std::optional<ChildSlice> slice;       // SemiListed only
};

// Bookkeeping for the upward walk: the last recorded text count and whether
// the first change has already been consumed.
struct TraversalState {
    int state = 0;
    int state_img = 0;
    int state_text = 0;
    bool state_changed_twice = false;
};

// Finds the shortest tag sequence whose repetition spans `container`'s
// element children with exactly one valid image per repetition (a trailing
// partial repetition is tolerated). Returns the child-index slices of the
// repetitions, or nullopt when the children do not repeat that way.
std::optional<std::vector<ChildSlice>> detect_repeating_pattern(
    const DomTree& tree, NodeId container, bool strict_dims = false);

// Depth-2 structural signature comparison over element tag names.
bool similar_structure(const DomTree& tree, NodeId a, NodeId b);

// Walks upward from the image detecting changes in subtree text-node counts
// and classifies the arrangement. Throws NoSegmentError when no ancestor of
// the image contains countable text.
ImageSegment segment_image(const DomTree& tree, const ImageRef& img,
                           const TextCountPolicy& policy = {},
                           bool strict_dims = false);

struct SkippedImage {
    ImageRef image;
    std::string reason;
};

struct PageSegmentation {
    std::vector<ImageSegment> segments;  // document order
    std::vector<SkippedImage> skipped;
};

// segment_image over every valid image of the page; images without any
// reachable text are reported in `skipped` rather than failing the page.
PageSegmentation segment_page(const DomTree& tree,
                              const TextCountPolicy& policy = {},
                              bool strict_dims = false);

}  // namespace imgctx
