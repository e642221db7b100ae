#pragma once

#include <compare>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "imgctx/dom.hpp"
#include "imgctx/segmenter.hpp"

namespace imgctx {

// Where inside the HTML source a piece of contextual text lives. Attribute
// and enclosed-by locations carry uppercase tag (and attribute) names; the
// remaining kinds are fixed singletons. String form: "ATTR:IMG:ALT",
// "ENCL:TD", "SCRIPT", "COMMENT", "META", "TITLE".
enum class LocationKind { Attribute, EnclosedBy, Script, Comment, Meta, Title };

struct LocationDescriptor {
    LocationKind kind = LocationKind::EnclosedBy;
    std::string tag;
    std::string attribute;

    static LocationDescriptor attr(std::string_view tag, std::string_view attribute);
    static LocationDescriptor enclosed(std::string_view tag);
    static LocationDescriptor script();
    static LocationDescriptor comment();
    static LocationDescriptor meta();
    static LocationDescriptor title();

    std::string to_string() const;
    static LocationDescriptor parse(std::string_view text);  // throws FileFormatError

    auto operator<=>(const LocationDescriptor&) const = default;
};

enum class Visibility { Visible, Hidden };

// Enclosed strings and the page title are the only locations a browser shows.
Visibility visibility_of(const LocationDescriptor& loc);

enum class PageCategory { Business, Informational, News, Advocacy, Personal, Unknown };

std::string to_string(PageCategory c);
PageCategory parse_category(std::string_view text);  // throws FileFormatError

// One extracted word/phrase occurrence. URL-valued attributes (SRC, HREF)
// additionally carry their word tokens.
struct ContextItem {
    std::string text;
    LocationDescriptor location;
    Visibility visibility = Visibility::Visible;
    NodeId source_node = 0;
    std::vector<std::string> tokens;
};

// Per-category sets of extraction-worthy locations, with optional relevance
// percentages attached.
struct SignificantLocationTable {
    std::map<PageCategory, std::set<LocationDescriptor>> sets;
    std::map<PageCategory, std::map<LocationDescriptor, double>> weights;

    const std::set<LocationDescriptor>& for_category(PageCategory c) const;
};

// The sets the user survey found significant per category, plus the
// eight-location default for unclassifiable pages. Weights are the shipped
// survey distribution.
SignificantLocationTable default_significant_locations();

// File format: `category<TAB>location[<TAB>percent]`, one row per line,
// '#' comments allowed.
SignificantLocationTable load_location_table(const std::filesystem::path& path);

// Reference distributions of relevant text per location (percent), as
// shipped in data/.
struct LocationTableRow {
    LocationDescriptor location;
    double percent[6];  // indexed by PageCategory, Unknown column unused
};
const std::vector<LocationTableRow>& observation_distribution();
const std::vector<LocationTableRow>& survey_distribution();
double distribution_percent(const std::vector<LocationTableRow>& table,
                            PageCategory c, const LocationDescriptor& loc);

// Locations with nonzero observation-phase frequency for the category; the
// candidate pool the binomial significance test draws from.
std::vector<LocationDescriptor> candidate_locations(PageCategory c);

// Contextual items from the statistically significant locations of the
// category (document-global for META/TITLE when those are in the set).
std::vector<ContextItem> extract_context(const DomTree& tree,
                                         const ImageSegment& segment,
                                         PageCategory category,
                                         const SignificantLocationTable& table);

// Same scan over the full location vocabulary, for distribution studies.
std::vector<ContextItem> enumerate_all_locations(const DomTree& tree,
                                                 const ImageSegment& segment);

// Frequency table of relevant items per location.
struct LocationDistribution {
    PageCategory category = PageCategory::Unknown;
    std::map<LocationDescriptor, std::size_t> counts;
    std::size_t total_relevant = 0;

    double percent(const LocationDescriptor& loc) const;
    std::map<LocationDescriptor, double> percentages() const;
};

LocationDistribution location_distribution(
    const std::vector<std::pair<ContextItem, bool>>& items, PageCategory category);

// Lowercased word tokens of a URL/path: alphanumeric runs, minus pure
// numbers, short fragments, and scheme/extension noise.
std::vector<std::string> tokenize_url_words(std::string_view value);

// The word/phrase strings a list of items contributes to an image's
// contextual information: URL attributes contribute their tokens, everything
// else its text.
std::vector<std::string> context_strings(const std::vector<ContextItem>& items);

}  // namespace imgctx
