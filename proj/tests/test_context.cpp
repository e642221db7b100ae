#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "imgctx/context.hpp"
#include "imgctx/errors.hpp"
#include "imgctx/segmenter.hpp"

using namespace imgctx;

namespace {

const std::filesystem::path kDataDir = IMGCTX_DATA_DIR;

ImageSegment segment_of(const DomTree& tree, std::size_t nth = 0) {
    PageSegmentation page = segment_page(tree);
    REQUIRE(page.segments.size() > nth);
    return page.segments[nth];
}

std::size_t count_location(const std::vector<ContextItem>& items,
                           const LocationDescriptor& loc) {
    std::size_t n = 0;
    for (const ContextItem& item : items) n += item.location == loc ? 1 : 0;
    return n;
}

}  // namespace

TEST_CASE("descriptor string forms round trip") {
    for (const char* text : {"ATTR:IMG:ALT", "ATTR:A:HREF", "ENCL:TD", "ENCL:P",
                             "SCRIPT", "COMMENT", "META", "TITLE"}) {
        LocationDescriptor loc = LocationDescriptor::parse(text);
        CHECK(loc.to_string() == text);
    }
    CHECK(LocationDescriptor::parse("attr:img:alt").to_string() == "ATTR:IMG:ALT");
    CHECK(LocationDescriptor::parse("encl:td").to_string() == "ENCL:TD");
    CHECK_THROWS_AS(LocationDescriptor::parse("ATTR:IMG"), FileFormatError);
    CHECK_THROWS_AS(LocationDescriptor::parse("bogus"), FileFormatError);
}

TEST_CASE("visibility is fixed by location kind") {
    CHECK(visibility_of(LocationDescriptor::enclosed("A")) == Visibility::Visible);
    CHECK(visibility_of(LocationDescriptor::title()) == Visibility::Visible);
    CHECK(visibility_of(LocationDescriptor::attr("IMG", "ALT")) == Visibility::Hidden);
    CHECK(visibility_of(LocationDescriptor::script()) == Visibility::Hidden);
    CHECK(visibility_of(LocationDescriptor::comment()) == Visibility::Hidden);
    CHECK(visibility_of(LocationDescriptor::meta()) == Visibility::Hidden);
}

TEST_CASE("default significant locations match the survey outcome") {
    SignificantLocationTable table = default_significant_locations();
    using LD = LocationDescriptor;
    CHECK(table.sets.at(PageCategory::Business) ==
          std::set<LD>{LD::attr("IMG", "ALT"), LD::attr("IMG", "SRC"),
                       LD::attr("A", "HREF"), LD::enclosed("A"), LD::enclosed("TD")});
    CHECK(table.sets.at(PageCategory::Advocacy).size() == 3);
    CHECK(table.sets.at(PageCategory::Unknown).size() == 8);
    CHECK(table.sets.at(PageCategory::News).count(LD::attr("A", "NAME")) == 1);
    // unknown categories fall back to the default set
    SignificantLocationTable partial;
    partial.sets[PageCategory::Unknown] = {LD::attr("IMG", "ALT")};
    CHECK(partial.for_category(PageCategory::News).size() == 1);
}

TEST_CASE("extract_context: business product segment") {
    DomTree tree = parse_html(
        "<body><div id=w><div id=r>"
        "<img alt=\"thermal cat mat\" width=\"100\" height=\"100\">"
        "<a href=\"/thermal-cat-mat-p-150.html\">Thermal Cat Mat</a>"
        "</div><p>shipping note</p></div>"
        "<p>other page text</p></body>");
    ImageSegment seg = segment_of(tree);
    auto items = extract_context(tree, seg, PageCategory::Business,
                                 default_significant_locations());
    REQUIRE(items.size() == 3);
    std::size_t alt = 0, href = 0, encl_a = 0;
    for (const ContextItem& item : items) {
        if (item.location == LocationDescriptor::attr("IMG", "ALT")) {
            ++alt;
            CHECK(item.text == "thermal cat mat");
            CHECK(item.visibility == Visibility::Hidden);
        } else if (item.location == LocationDescriptor::attr("A", "HREF")) {
            ++href;
            CHECK(item.tokens == std::vector<std::string>{"thermal", "cat", "mat"});
        } else if (item.location == LocationDescriptor::enclosed("A")) {
            ++encl_a;
            CHECK(item.text == "Thermal Cat Mat");
            CHECK(item.visibility == Visibility::Visible);
        }
    }
    CHECK(alt == 1);
    CHECK(href == 1);
    CHECK(encl_a == 1);
}

TEST_CASE("extract_context: locations outside the set yield nothing") {
    // Unknown category: text bubbles to BODY which is not one of the eight.
    DomTree tree = parse_html(
        "<body><div><img src=\"x.jpg\" width=90 height=90></div>"
        "<h2>just a heading</h2></body>");
    ImageSegment seg = segment_of(tree);
    // h2 text attributes to BODY, and src tokens belong to ATTR:IMG:SRC
    auto items = extract_context(tree, seg, PageCategory::Unknown,
                                 default_significant_locations());
    REQUIRE(items.size() == 1);  // only the src attribute remains
    CHECK(items[0].location == LocationDescriptor::attr("IMG", "SRC"));

    // Advocacy has no ATTR:IMG:SRC, so the same page yields nothing at all.
    DomTree adv = parse_html(
        "<body><div><img src=\"x.jpg\" width=90 height=90></div>"
        "<h2>heading words</h2></body>");
    ImageSegment adv_seg = segment_of(adv);
    CHECK(extract_context(adv, adv_seg, PageCategory::Advocacy,
                          default_significant_locations())
              .empty());
}

TEST_CASE("nearest enclosing element wins: A inside TD counts once") {
    DomTree tree = parse_html(
        "<body><div id=w><div id=r><img src=i.png width=80 height=80>"
        "<table><tr><td><a href=\"/k.html\">anchor words</a> cell tail</td></tr></table>"
        "</div><p>outer</p></div><p>page</p></body>");
    ImageSegment seg = segment_of(tree);
    auto items = enumerate_all_locations(tree, seg);
    std::size_t encl_a = 0, encl_td = 0;
    for (const ContextItem& item : items) {
        if (item.location == LocationDescriptor::enclosed("A")) {
            ++encl_a;
            CHECK(item.text == "anchor words");
        }
        if (item.location == LocationDescriptor::enclosed("TD")) {
            ++encl_td;
            CHECK(item.text == "cell tail");
        }
    }
    CHECK(encl_a == 1);
    CHECK(encl_td == 1);
}

TEST_CASE("enumerate_all_locations covers hidden locations") {
    DomTree tree = parse_html(
        "<html><head><title>Page Title</title>"
        "<meta name=\"description\" content=\"meta words\"></head>"
        "<body><div id=w><div id=r><img src=\"pic.png\" width=80 height=80>"
        "<p>visible words</p><script>var hidden = 1;</script><!-- note --></div>"
        "<p>more</p></div><p>rest of page</p></body></html>");
    ImageSegment seg = segment_of(tree);
    auto items = enumerate_all_locations(tree, seg);
    CHECK(count_location(items, LocationDescriptor::script()) == 1);
    CHECK(count_location(items, LocationDescriptor::comment()) == 1);
    CHECK(count_location(items, LocationDescriptor::title()) == 1);
    CHECK(count_location(items, LocationDescriptor::meta()) == 1);
    CHECK(count_location(items, LocationDescriptor::enclosed("P")) == 2);
    CHECK(count_location(items, LocationDescriptor::attr("IMG", "SRC")) == 1);

    // every item's visibility agrees with the fixed map
    for (const ContextItem& item : items)
        CHECK(item.visibility == visibility_of(item.location));
}

TEST_CASE("extract_context is a subset of enumerate_all_locations") {
    DomTree tree = parse_html(
        "<body><table>"
        "<tr><td><img src=\"a_b_0.jpg\" alt=\"a b\" width=100 height=100></td>"
        "<td><a href=\"/a-b-item-0.html\" title=\"t words\">a b</a> cap one</td></tr>"
        "<tr><td><img src=\"c_d_1.jpg\" alt=\"c d\" width=100 height=100></td>"
        "<td><a href=\"/c-d-item-1.html\" title=\"u words\">c d</a> cap two</td></tr>"
        "</table></body>");
    PageSegmentation page = segment_page(tree);
    REQUIRE(page.segments.size() == 2);
    for (const ImageSegment& seg : page.segments) {
        auto all = enumerate_all_locations(tree, seg);
        for (PageCategory c :
             {PageCategory::Business, PageCategory::News, PageCategory::Personal,
              PageCategory::Unknown, PageCategory::Advocacy}) {
            for (const ContextItem& item :
                 extract_context(tree, seg, c, default_significant_locations())) {
                bool found = false;
                for (const ContextItem& probe : all)
                    found = found || (probe.location == item.location &&
                                      probe.source_node == item.source_node);
                CHECK(found);
            }
        }
    }
}

TEST_CASE("tokenize_url_words: splitting and filtering") {
    CHECK(tokenize_url_words("/thermal-cat-mat-p-150.html") ==
          std::vector<std::string>{"thermal", "cat", "mat"});
    CHECK(tokenize_url_words("img/red_widget_3.jpg") ==
          std::vector<std::string>{"img", "red", "widget"});
    CHECK(tokenize_url_words("http://www.example.com/a/b1234/") ==
          std::vector<std::string>{"example", "b1234"});
    CHECK(tokenize_url_words("12345-67.png").empty());
    CHECK(tokenize_url_words("").empty());
}

TEST_CASE("location_distribution: proportions") {
    auto item_at = [](const LocationDescriptor& loc) {
        ContextItem item;
        item.text = "x";
        item.location = loc;
        return item;
    };
    std::vector<std::pair<ContextItem, bool>> items;
    for (int i = 0; i < 162; ++i)
        items.emplace_back(item_at(LocationDescriptor::attr("IMG", "ALT")), true);
    for (int i = 0; i < 905 - 162; ++i)
        items.emplace_back(item_at(LocationDescriptor::enclosed("A")), true);
    LocationDistribution dist = location_distribution(items, PageCategory::Business);
    CHECK(dist.total_relevant == 905);
    CHECK(std::abs(dist.percent(LocationDescriptor::attr("IMG", "ALT")) - 17.9) < 0.05);

    // percentages sum to 100
    double total = 0;
    for (const auto& [loc, pct] : dist.percentages()) {
        CHECK(pct >= 0.0);
        total += pct;
    }
    CHECK(std::abs(total - 100.0) <= 0.5 + 1e-9);

    // degenerate shapes
    std::vector<std::pair<ContextItem, bool>> single{
        {item_at(LocationDescriptor::script()), true}};
    LocationDistribution one = location_distribution(single, PageCategory::Unknown);
    CHECK(one.percent(LocationDescriptor::script()) == 100.0);

    std::vector<std::pair<ContextItem, bool>> half{
        {item_at(LocationDescriptor::enclosed("P")), true},
        {item_at(LocationDescriptor::enclosed("TD")), true}};
    LocationDistribution fifty = location_distribution(half, PageCategory::Unknown);
    CHECK(fifty.percent(LocationDescriptor::enclosed("P")) == 50.0);

    std::vector<std::pair<ContextItem, bool>> irrelevant{
        {item_at(LocationDescriptor::enclosed("P")), false}};
    CHECK_THROWS_AS(location_distribution(irrelevant, PageCategory::Unknown),
                    std::invalid_argument);
    CHECK_THROWS_AS(location_distribution({}, PageCategory::Unknown),
                    std::invalid_argument);
}

TEST_CASE("reference distributions sum to 100 per category") {
    for (const auto* table : {&observation_distribution(), &survey_distribution()}) {
        for (PageCategory c :
             {PageCategory::Business, PageCategory::Informational, PageCategory::News,
              PageCategory::Advocacy, PageCategory::Personal}) {
            double total = 0;
            for (const LocationTableRow& row : *table)
                total += distribution_percent(*table, c, row.location);
            CHECK(std::abs(total - 100.0) <= 0.5 + 1e-9);
        }
    }
}

TEST_CASE("candidate pools: counts per category") {
    CHECK(candidate_locations(PageCategory::Business).size() == 19);
    CHECK(candidate_locations(PageCategory::Informational).size() == 19);
    CHECK(candidate_locations(PageCategory::News).size() == 30);
    CHECK(candidate_locations(PageCategory::Advocacy).size() == 11);
    CHECK(candidate_locations(PageCategory::Personal).size() == 23);
    CHECK(candidate_locations(PageCategory::Unknown).empty());
}

TEST_CASE("shipped data files agree with the built-in tables") {
    SignificantLocationTable sets =
        load_location_table(kDataDir / "significant_locations.tsv");
    CHECK(sets.sets == default_significant_locations().sets);

    SignificantLocationTable survey =
        load_location_table(kDataDir / "locations_survey.tsv");
    for (PageCategory c :
         {PageCategory::Business, PageCategory::Informational, PageCategory::News,
          PageCategory::Advocacy, PageCategory::Personal}) {
        const auto& weights = survey.weights.at(c);
        double total = 0;
        for (const auto& [loc, pct] : weights) {
            CHECK(pct == distribution_percent(survey_distribution(), c, loc));
            total += pct;
        }
        CHECK(std::abs(total - 100.0) <= 0.5 + 1e-9);
    }

    SignificantLocationTable observation =
        load_location_table(kDataDir / "locations_observation.tsv");
    for (PageCategory c :
         {PageCategory::Business, PageCategory::Informational, PageCategory::News,
          PageCategory::Advocacy, PageCategory::Personal}) {
        // file rows are exactly the nonzero observation cells
        CHECK(observation.sets.at(c).size() == candidate_locations(c).size());
        for (const LocationDescriptor& loc : candidate_locations(c)) {
            CHECK(observation.sets.at(c).count(loc) == 1);
            CHECK(observation.weights.at(c).at(loc) ==
                  distribution_percent(observation_distribution(), c, loc));
        }
    }
}

TEST_CASE("load_location_table: malformed rows are rejected") {
    namespace fs = std::filesystem;
    fs::path tmp = fs::temp_directory_path() / "imgctx_bad_table.tsv";
    {
        std::ofstream out(tmp);
        out << "business\n";
    }
    CHECK_THROWS_AS(load_location_table(tmp), FileFormatError);
    {
        std::ofstream out(tmp);
        out << "business\tATTR:IMG:ALT\tnot-a-number\n";
    }
    CHECK_THROWS_AS(load_location_table(tmp), FileFormatError);
    fs::remove(tmp);
}

TEST_CASE("context_strings: url attributes contribute tokens") {
    DomTree tree = parse_html(
        "<body><div id=w><div id=r>"
        "<img src=\"img/amber_pine_0.jpg\" alt=\"amber pine\" width=90 height=90>"
        "<p>caption here</p></div><p>extra</p></div><p>page text</p></body>");
    ImageSegment seg = segment_of(tree);
    auto items = extract_context(tree, seg, PageCategory::Unknown,
                                 default_significant_locations());
    auto strings = context_strings(items);
    std::sort(strings.begin(), strings.end());
    std::vector<std::string> expected = {"amber",        "amber pine", "caption here",
                                         "extra",        "img",        "pine"};
    CHECK(strings == expected);
}
