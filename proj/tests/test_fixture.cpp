#include <map>

#include "doctest.h"

#include "imgctx/eval.hpp"
#include "imgctx/fixture.hpp"
#include "imgctx/segmenter.hpp"

using namespace imgctx;

namespace {

FixtureSpec spec_of(std::uint64_t seed, int unlisted, int listed, int semi,
                    PageCategory category = PageCategory::Unknown) {
    FixtureSpec spec;
    spec.seed = seed;
    spec.unlisted = unlisted;
    spec.listed = listed;
    spec.semi_listed = semi;
    spec.category = category;
    spec.page_id = "fx";
    return spec;
}

EvalReport round_trip(const FixtureSpec& spec) {
    Fixture fx = generate_fixture(spec);
    DomTree tree = parse_html(fx.html);
    std::vector<Prediction> predicted = pipeline_predictions(
        tree, spec.page_id, spec.category, default_significant_locations());
    return score(fx.truth, predicted);
}

}  // namespace

TEST_CASE("generate_fixture: identical specs give byte-identical output") {
    FixtureSpec spec = spec_of(42, 2, 3, 2);
    Fixture a = generate_fixture(spec);
    Fixture b = generate_fixture(spec);
    CHECK(a.html == b.html);
    REQUIRE(a.truth.size() == b.truth.size());
    for (std::size_t i = 0; i < a.truth.size(); ++i) {
        CHECK(a.truth[i].image_key == b.truth[i].image_key);
        CHECK(a.truth[i].text == b.truth[i].text);
    }
    // different seed, different page
    CHECK(generate_fixture(spec_of(43, 2, 3, 2)).html != a.html);
}

TEST_CASE("generate_fixture: empty spec yields an image-free page") {
    Fixture fx = generate_fixture(spec_of(1, 0, 0, 0));
    CHECK(fx.truth.empty());
    DomTree tree = parse_html(fx.html);
    tree.validate();
    PageSegmentation page = segment_page(tree);
    CHECK(page.segments.empty());
}

TEST_CASE("generate_fixture: arrangements come out as requested") {
    FixtureSpec spec = spec_of(7, 2, 4, 3);
    Fixture fx = generate_fixture(spec);
    CHECK(fx.truth.size() == 9);
    DomTree tree = parse_html(fx.html);
    tree.validate();
    PageSegmentation page = segment_page(tree);
    std::map<ImageArrangement, int> histogram;
    for (const ImageSegment& seg : page.segments) ++histogram[seg.arrangement];
    CHECK(histogram[ImageArrangement::Unlisted] == 2);
    CHECK(histogram[ImageArrangement::Listed] == 4);
    CHECK(histogram[ImageArrangement::SemiListed] == 3);
}

TEST_CASE("generate_fixture: single listed/semi-listed images round up to two") {
    Fixture fx = generate_fixture(spec_of(3, 0, 1, 1));
    CHECK(fx.truth.size() == 4);
}

TEST_CASE("round trip: full pipeline reproduces the ground truth exactly") {
    CHECK(round_trip(spec_of(11, 0, 2, 0)).precision == 1.0);
    CHECK(round_trip(spec_of(11, 0, 2, 0)).recall == 1.0);
    CHECK(round_trip(spec_of(12, 1, 0, 0)).recall == 1.0);
    CHECK(round_trip(spec_of(13, 0, 0, 2)).recall == 1.0);

    for (PageCategory category :
         {PageCategory::Business, PageCategory::Informational, PageCategory::News,
          PageCategory::Advocacy, PageCategory::Personal, PageCategory::Unknown}) {
        EvalReport r = round_trip(spec_of(100 + int(category), 2, 3, 2, category));
        CHECK(r.precision == 1.0);
        CHECK(r.recall == 1.0);
        CHECK(r.actual == 7);
    }
}

TEST_CASE("semi-listed slices partition their container") {
    Fixture fx = generate_fixture(spec_of(21, 0, 0, 5));
    DomTree tree = parse_html(fx.html);
    PageSegmentation page = segment_page(tree);
    std::map<NodeId, std::vector<ChildSlice>> by_container;
    for (const ImageSegment& seg : page.segments) {
        REQUIRE(seg.arrangement == ImageArrangement::SemiListed);
        REQUIRE(seg.slice.has_value());
        by_container[seg.segment_root].push_back(*seg.slice);
        // exactly one valid image per emitted slice
        int images = 0;
        const auto& children = tree.node(seg.segment_root).children;
        for (std::size_t i = seg.slice->first; i <= seg.slice->last; ++i)
            images += count_image_nodes(tree, children[i]);
        CHECK(images == 1);
    }
    for (const auto& [container, slices] : by_container) {
        // contiguous, non-overlapping cover of the child list
        std::size_t expected_first = 0;
        for (const ChildSlice& slice : slices) {
            CHECK(slice.first == expected_first);
            CHECK(slice.last >= slice.first);
            expected_first = slice.last + 1;
        }
        CHECK(expected_first == tree.node(container).children.size());
    }
}

TEST_CASE("generated truth is nonempty for every category") {
    for (PageCategory category :
         {PageCategory::Business, PageCategory::Informational, PageCategory::News,
          PageCategory::Advocacy, PageCategory::Personal, PageCategory::Unknown}) {
        Fixture fx = generate_fixture(spec_of(5, 2, 2, 2, category));
        REQUIRE(fx.truth.size() == 6);
        for (const LabeledSegment& seg : fx.truth) CHECK_FALSE(seg.text.empty());
    }
}
