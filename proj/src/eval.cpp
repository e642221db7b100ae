#include "imgctx/eval.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "imgctx/errors.hpp"
#include "imgctx/segmenter.hpp"
#include "imgctx/text_util.hpp"

namespace imgctx {
namespace {

using nlohmann::json;

std::vector<std::string> normalized_sorted(std::span<const std::string> text) {
    std::vector<std::string> out;
    out.reserve(text.size());
    for (const std::string& s : text) out.push_back(normalize_for_match(s));
    std::sort(out.begin(), out.end());
    return out;
}

json require_field(const json& record, const char* field, std::size_t line_no,
                   const std::filesystem::path& path) {
    if (!record.contains(field))
        throw FileFormatError(path.string() + ": record " + std::to_string(line_no) +
                              " missing field '" + field + "'");
    return record.at(field);
}

std::vector<std::string> read_text_field(const json& record, std::size_t line_no,
                                         const std::filesystem::path& path) {
    json text = require_field(record, "text", line_no, path);
    if (!text.is_array())
        throw FileFormatError(path.string() + ": record " + std::to_string(line_no) +
                              " field 'text' must be an array of strings");
    std::vector<std::string> out;
    for (const json& entry : text) {
        if (!entry.is_string())
            throw FileFormatError(path.string() + ": record " +
                                  std::to_string(line_no) +
                                  " field 'text' must be an array of strings");
        out.push_back(normalize_for_match(entry.get<std::string>()));
    }
    return out;
}

template <typename Record, typename FromJson>
std::vector<Record> load_records(const std::filesystem::path& path, FromJson from) {
    std::ifstream in(path);
    if (!in) throw FileFormatError("cannot open dataset: " + path.string());
    std::vector<Record> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw FileFormatError(path.string() + ": record " +
                                  std::to_string(line_no) + ": " + e.what());
        }
        out.push_back(from(record, line_no));
    }
    return out;
}

}  // namespace

EvalReport EvalReport::from_counts(std::size_t actual, std::size_t extracted,
                                   std::size_t correct) {
    if (correct > actual || correct > extracted)
        throw std::invalid_argument("correct cannot exceed actual or extracted");
    EvalReport r;
    r.actual = actual;
    r.extracted = extracted;
    r.correct = correct;
    r.precision = extracted == 0 ? 0.0
                                 : static_cast<double>(correct) /
                                       static_cast<double>(extracted);
    r.recall = actual == 0
                   ? 0.0
                   : static_cast<double>(correct) / static_cast<double>(actual);
    return r;
}

std::string EvalReport::table() const {
    std::ostringstream out;
    out << "Actual     " << actual << "\n"
        << "Extracted  " << extracted << "\n"
        << "Correct    " << correct << "\n";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", recall);
    out << "Recall     " << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.2f", precision);
    out << "Precision  " << buf << "\n";
    return out.str();
}

EvalReport score(std::span<const LabeledSegment> truth,
                 std::span<const Prediction> predicted) {
    std::map<std::pair<std::string, std::string>, std::vector<std::string>> expected;
    for (const LabeledSegment& t : truth) {
        auto key = std::make_pair(t.page_id, t.image_key);
        if (!expected.emplace(key, normalized_sorted(t.text)).second)
            throw std::invalid_argument("duplicate image_key '" + t.image_key +
                                        "' in truth for page " + t.page_id);
    }
    std::map<std::pair<std::string, std::string>, std::vector<std::string>> seen;
    std::size_t correct = 0;
    for (const Prediction& p : predicted) {
        auto key = std::make_pair(p.page_id, p.image_key);
        if (!seen.emplace(key, std::vector<std::string>{}).second)
            throw std::invalid_argument("duplicate image_key '" + p.image_key +
                                        "' in predictions for page " + p.page_id);
        auto it = expected.find(key);
        if (it != expected.end() && it->second == normalized_sorted(p.text))
            ++correct;
    }
    return EvalReport::from_counts(truth.size(), predicted.size(), correct);
}

std::vector<LabeledSegment> load_dataset(const std::filesystem::path& path) {
    return load_records<LabeledSegment>(path, [&](const json& record,
                                                  std::size_t line_no) {
        LabeledSegment seg;
        seg.page_id = require_field(record, "page_id", line_no, path).get<std::string>();
        seg.image_key =
            require_field(record, "image_key", line_no, path).get<std::string>();
        seg.category = parse_category(
            require_field(record, "category", line_no, path).get<std::string>());
        seg.text = read_text_field(record, line_no, path);
        if (seg.text.empty())
            throw FileFormatError(path.string() + ": record " +
                                  std::to_string(line_no) +
                                  " has an empty text multiset");
        return seg;
    });
}

void save_dataset(const std::filesystem::path& path,
                  std::span<const LabeledSegment> records) {
    std::ofstream out(path);
    if (!out) throw FileFormatError("cannot write dataset: " + path.string());
    for (const LabeledSegment& seg : records) {
        json record = {{"page_id", seg.page_id},
                       {"image_key", seg.image_key},
                       {"category", to_string(seg.category)},
                       {"text", seg.text}};
        out << record.dump() << "\n";
    }
}

std::vector<Prediction> load_external_segments(const std::filesystem::path& path) {
    return load_records<Prediction>(path, [&](const json& record, std::size_t line_no) {
        Prediction p;
        p.page_id = require_field(record, "page_id", line_no, path).get<std::string>();
        p.image_key =
            require_field(record, "image_key", line_no, path).get<std::string>();
        p.text = read_text_field(record, line_no, path);
        return p;
    });
}

void save_predictions(const std::filesystem::path& path,
                      std::span<const Prediction> records) {
    std::ofstream out(path);
    if (!out) throw FileFormatError("cannot write predictions: " + path.string());
    for (const Prediction& p : records) {
        json record = {{"page_id", p.page_id},
                       {"image_key", p.image_key},
                       {"text", p.text}};
        out << record.dump() << "\n";
    }
}

std::string image_key(const DomTree& tree, NodeId image_node) {
    std::vector<ImageRef> images = collect_images(tree);
    for (std::size_t i = 0; i < images.size(); ++i)
        if (images[i].node == image_node)
            return std::to_string(i) + ":" + images[i].src;
    throw std::out_of_range("node is not an image element of this tree");
}

std::vector<Prediction> pipeline_predictions(const DomTree& tree,
                                             const std::string& page_id,
                                             PageCategory category,
                                             const SignificantLocationTable& table,
                                             const TextCountPolicy& policy,
                                             bool strict_dims) {
    std::vector<ImageRef> images = collect_images(tree);
    std::map<NodeId, std::size_t> index_of;
    for (std::size_t i = 0; i < images.size(); ++i) index_of[images[i].node] = i;

    std::vector<Prediction> out;
    PageSegmentation segmentation = segment_page(tree, policy, strict_dims);
    for (const ImageSegment& segment : segmentation.segments) {
        Prediction p;
        p.page_id = page_id;
        p.image_key = std::to_string(index_of.at(segment.image.node)) + ":" +
                      segment.image.src;
        std::vector<ContextItem> items =
            extract_context(tree, segment, category, table);
        p.text = context_strings(items);
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace imgctx
