#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "imgctx/context.hpp"
#include "imgctx/eval.hpp"

namespace imgctx {

// Deterministic synthetic page: same spec, byte-identical output.
// `listed` and `semi_listed` are image counts and are rounded up to 2 when 1
// is requested, since both arrangements only exist with at least two images.
struct FixtureSpec {
    std::uint64_t seed = 0;
    int unlisted = 0;
    int listed = 0;
    int semi_listed = 0;
    int min_text_words = 2;
    int max_text_words = 5;
    PageCategory category = PageCategory::Unknown;
    std::string page_id = "fixture";
};

struct Fixture {
    std::string html;
    std::vector<LabeledSegment> truth;
};

// Builds a page instantiating the three arrangement patterns (sibling rows
// with similar subtrees; repeating P/A/TABLE/BR runs; lone image with text in
// a sibling branch) together with the exact contextual strings the
// category's significant locations yield for each image.
Fixture generate_fixture(const FixtureSpec& spec);

}  // namespace imgctx
