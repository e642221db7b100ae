#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "imgctx/context.hpp"
#include "imgctx/dom.hpp"

namespace imgctx {

// One ground-truth image segment: the image's stable key (document-order
// index plus src) and the normalized multiset of its contextual strings.
struct LabeledSegment {
    std::string page_id;
    std::string image_key;
    std::vector<std::string> text;
    PageCategory category = PageCategory::Unknown;
};

// Pipeline or third-party output for one image.
struct Prediction {
    std::string page_id;
    std::string image_key;
    std::vector<std::string> text;
};

struct EvalReport {
    std::size_t actual = 0;
    std::size_t extracted = 0;
    std::size_t correct = 0;
    double precision = 0;  // correct / extracted, 0 when extracted == 0
    double recall = 0;     // correct / actual, 0 when actual == 0

    static EvalReport from_counts(std::size_t actual, std::size_t extracted,
                                  std::size_t correct);
    std::string table() const;  // Actual/Extracted/Correct/Recall/Precision
};

// Exact-match scoring: a prediction is correct only when its key matches a
// truth record on the same page and the normalized text multisets are equal,
// no more and no less.
EvalReport score(std::span<const LabeledSegment> truth,
                 std::span<const Prediction> predicted);

// Line-delimited JSON records {page_id, image_key, category, text: [...]};
// predictions identical minus category. Normalization (trim, collapse,
// case-fold) is applied on load.
std::vector<LabeledSegment> load_dataset(const std::filesystem::path& path);
void save_dataset(const std::filesystem::path& path,
                  std::span<const LabeledSegment> records);
std::vector<Prediction> load_external_segments(const std::filesystem::path& path);
void save_predictions(const std::filesystem::path& path,
                      std::span<const Prediction> records);

// Stable identifier for the image: document-order index among all IMG
// elements, colon, src value.
std::string image_key(const DomTree& tree, NodeId image_node);

// Full segment+extract pipeline over one parsed page.
std::vector<Prediction> pipeline_predictions(const DomTree& tree,
                                             const std::string& page_id,
                                             PageCategory category,
                                             const SignificantLocationTable& table,
                                             const TextCountPolicy& policy = {},
                                             bool strict_dims = false);

}  // namespace imgctx
