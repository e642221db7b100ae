#include "imgctx/context.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "imgctx/errors.hpp"
#include "imgctx/text_util.hpp"

namespace imgctx {
namespace {

constexpr std::size_t kCategories = 5;  // Unknown has no distribution column

const std::array<PageCategory, kCategories> kDistributionOrder = {
    PageCategory::Business, PageCategory::Informational, PageCategory::News,
    PageCategory::Advocacy, PageCategory::Personal};

struct RawRow {
    const char* location;
    double business, info, news, advocacy, personal;
};

// Relevant-text distribution from the initial webpage observation exercise.
// Nonzero cells define the per-category candidate location pools.
const RawRow kObservationRows[] = {
    {"ATTR:IMG:ALT", 26.7, 12.1, 11.7, 26.4, 7.3},
    {"ATTR:IMG:SRC", 21.5, 11.4, 11.7, 27.6, 6.9},
    {"ATTR:IMG:TITLE", 0.2, 0, 0.2, 0, 0.9},
    {"ATTR:IMG:CLASS", 0, 0.1, 0.1, 0, 0},
    {"ATTR:IMG:LONGDESC", 0, 0.7, 0, 0, 0},
    {"ATTR:IMG:ID", 0, 0, 0.2, 0, 0},
    {"ATTR:IMG:NAME", 0, 0, 0, 1.1, 0.2},
    {"ATTR:AREA:ALT", 1.1, 0, 0, 0, 0},
    {"ATTR:AREA:HREF", 1.0, 0, 1.4, 0, 0},
    {"ATTR:A:HREF", 16.8, 38.8, 17.6, 5.7, 22.5},
    {"ATTR:A:ONCLICK", 0.5, 0, 7.5, 0, 4.2},
    {"ATTR:A:TITLE", 0.9, 0.6, 0.1, 2.3, 9.7},
    {"ATTR:A:OBJECTID", 0.1, 0, 0, 0, 0},
    {"ATTR:A:ALT", 0, 0, 0.9, 0, 0},
    {"ATTR:A:NAME", 0, 0, 12.1, 0, 0},
    {"ATTR:A:ONMOUSEOVER", 0, 0, 0, 0, 0.5},
    {"ATTR:A:ONMOUSEOUT", 0, 0, 0, 0, 0.2},
    {"ATTR:DIV:CLASS", 0.4, 0.3, 0.2, 0, 0},
    {"ATTR:DIV:TITLE", 0.2, 0, 0, 0, 0},
    {"ATTR:DIV:ID", 0, 0.3, 0.4, 0, 0.2},
    {"ATTR:INPUT:ID", 0, 0, 0.2, 0, 0},
    {"ATTR:INPUT:VALUE", 0, 0, 0.2, 0, 0},
    {"ATTR:INPUT:SRC", 0, 0, 0.1, 0, 0},
    {"ATTR:INPUT:NAME", 0, 0.1, 0.1, 0, 0},
    {"ATTR:OPTION:VALUE", 0, 0.7, 0, 0, 0},
    {"ATTR:TABLE:CLASS", 0, 0, 0.5, 0, 0},
    {"ATTR:H2:ID", 0, 0, 0.1, 0, 0},
    {"ATTR:LABEL:FOR", 0, 0, 0.1, 0, 0},
    {"ATTR:FORM:ACTION", 0, 0, 0.2, 1.1, 0},
    {"ENCL:A", 15.1, 18.3, 22.8, 10.3, 12.2},
    {"ENCL:TD", 9.5, 1.3, 0.2, 18.4, 0.4},
    {"ENCL:DIV", 3.4, 4.9, 3.1, 2.3, 6.6},
    {"ENCL:BODY", 0, 0, 0, 0, 0.9},
    {"ENCL:P", 0.2, 8.8, 4.0, 2.3, 15.2},
    {"ENCL:LI", 0.1, 0, 2.8, 0, 0.2},
    {"ENCL:OPTION", 0, 0.4, 0, 0, 0.2},
    {"ENCL:BLOCKQUOTE", 0, 0, 0, 0, 1.5},
    {"ENCL:DT", 0, 0, 0.2, 0, 0},
    {"ENCL:DD", 0, 0, 0.2, 0, 0},
    {"ENCL:LABEL", 0, 0.1, 0.3, 0, 0},
    {"SCRIPT", 1.8, 0.1, 0.8, 0, 1.5},
    {"COMMENT", 0, 0, 0, 0, 6.3},
    {"META", 0.4, 0.4, 0, 0, 0.4},
    {"TITLE", 0.1, 0.1, 0, 2.3, 1.8},
    {"ATTR:LINK:TITLE", 0, 0, 0, 0, 0.2},
};

// Relevant-text distribution from the user survey.
const RawRow kSurveyRows[] = {
    {"ATTR:IMG:ALT", 17.9, 10.2, 12.6, 11.3, 3.0},
    {"ATTR:IMG:SRC", 19.4, 10.7, 7.9, 9.4, 6.8},
    {"ATTR:IMG:TITLE", 0.3, 0.3, 0.6, 0.6, 0.3},
    {"ATTR:IMG:ID", 0, 0.2, 0, 0, 0},
    {"ATTR:IMG:NAME", 0, 0, 0, 0.6, 0},
    {"ATTR:IMG:ONMOUSEOVER", 0, 0, 0, 0.4, 0},
    {"ATTR:AREA:ALT", 0.1, 0.6, 0, 0, 0},
    {"ATTR:A:HREF", 15.4, 27.9, 11.5, 16.5, 31.1},
    {"ATTR:A:TITLE", 0.2, 5.9, 0.7, 1.5, 7.0},
    {"ATTR:A:ONCLICK", 0, 0, 3.4, 1.3, 3.5},
    {"ATTR:A:ALT", 0, 0, 1.2, 0, 0},
    {"ATTR:A:NAME", 0.1, 0, 11.8, 0, 0},
    {"ATTR:DIV:CLASS", 0.1, 0, 0, 0, 0},
    {"ATTR:DIV:TITLE", 0.2, 0, 0, 0, 0},
    {"ATTR:DIV:ID", 0, 0.2, 0, 0, 0},
    {"ATTR:DIV:CN", 0, 0, 0.6, 0, 0},
    {"ATTR:INPUT:VALUE", 0, 0, 0.1, 0, 0},
    {"ATTR:INPUT:ID", 0.1, 0, 0, 0, 0},
    {"ATTR:TABLE:CLASS", 0.6, 0, 0.2, 0, 0},
    {"ATTR:H2:ID", 0.1, 0, 0, 0, 0},
    {"ATTR:FORM:ACTION", 0.1, 0, 0, 0, 0},
    {"ENCL:A", 19.8, 20.2, 32.2, 9.2, 14.3},
    {"ENCL:TD", 12.2, 5.2, 0.9, 8.1, 1.3},
    {"ENCL:TH", 0, 0.1, 0, 0, 0},
    {"ENCL:DIV", 6.2, 5.3, 9.1, 9.6, 8.3},
    {"ENCL:CITE", 0, 0.3, 0, 0, 0},
    {"ENCL:BODY", 0, 0, 0, 0, 1.6},
    {"ENCL:P", 1.1, 8.5, 3.0, 14.6, 17.8},
    {"ENCL:LI", 1.5, 0, 1.3, 3.8, 0.3},
    {"ENCL:OPTION", 0, 0, 0, 0.4, 0.1},
    {"ENCL:DT", 0, 0, 0.5, 0, 0},
    {"ENCL:DD", 0, 0, 0.4, 0, 0.3},
    {"SCRIPT", 0, 0.1, 0.1, 1.2, 1.0},
    {"COMMENT", 0.3, 0, 0.1, 1.9, 0.2},
    {"META", 3.3, 3.6, 1.2, 6.3, 0.9},
    {"TITLE", 1.0, 0.7, 0.6, 3.3, 2.2},
};

std::vector<LocationTableRow> build_table(const RawRow* rows, std::size_t n) {
    std::vector<LocationTableRow> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        LocationTableRow row;
        row.location = LocationDescriptor::parse(rows[i].location);
        row.percent[0] = rows[i].business;
        row.percent[1] = rows[i].info;
        row.percent[2] = rows[i].news;
        row.percent[3] = rows[i].advocacy;
        row.percent[4] = rows[i].personal;
        row.percent[5] = 0;
        out.push_back(std::move(row));
    }
    return out;
}

std::size_t category_column(PageCategory c) {
    switch (c) {
        case PageCategory::Business: return 0;
        case PageCategory::Informational: return 1;
        case PageCategory::News: return 2;
        case PageCategory::Advocacy: return 3;
        case PageCategory::Personal: return 4;
        case PageCategory::Unknown: return 5;
    }
    return 5;
}

// Tags whose enclosed strings are locations of their own.
const std::set<std::string>& enclosing_vocabulary() {
    static const std::set<std::string> tags = {
        "A",  "TD", "TH", "DIV", "BODY", "P",     "LI",
        "DT", "DD", "LABEL", "OPTION", "BLOCKQUOTE", "CITE", "TITLE",
    };
    return tags;
}

const std::set<std::pair<std::string, std::string>>& attribute_vocabulary() {
    static const std::set<std::pair<std::string, std::string>> pairs = [] {
        std::set<std::pair<std::string, std::string>> out;
        for (const auto& table : {observation_distribution(), survey_distribution()})
            for (const LocationTableRow& row : table)
                if (row.location.kind == LocationKind::Attribute)
                    out.insert({row.location.tag, row.location.attribute});
        return out;
    }();
    return pairs;
}

std::vector<std::string> whitespace_tokens(std::string_view normalized) {
    std::vector<std::string> out;
    for (const std::string& word : split_words(normalized))
        out.push_back(to_lower_ascii(word));
    return out;
}

bool is_url_attribute(const LocationDescriptor& loc) {
    return loc.kind == LocationKind::Attribute &&
           (loc.attribute == "SRC" || loc.attribute == "HREF");
}

// Core scan shared by extract_context and enumerate_all_locations. A null
// filter means the full vocabulary.
std::vector<ContextItem> scan_segment(const DomTree& tree, const ImageSegment& segment,
                                      const std::set<LocationDescriptor>* filter) {
    const DomNode& root = tree.node(segment.segment_root);

    std::vector<NodeId> scan_roots;
    if (segment.slice) {
        for (std::size_t i = segment.slice->first;
             i <= segment.slice->last && i < root.children.size(); ++i)
            scan_roots.push_back(root.children[i]);
    } else {
        scan_roots.push_back(segment.segment_root);
    }

    auto wanted = [&](const LocationDescriptor& loc) {
        return filter == nullptr || filter->count(loc) > 0;
    };

    std::vector<ContextItem> items;
    // Enclosed/script text accumulates per enclosing element, in the order the
    // element's first text was met.
    std::vector<std::pair<NodeId, std::size_t>> group_index;  // element -> item slot
    auto group_slot = [&](NodeId element, const LocationDescriptor& loc) -> ContextItem& {
        for (const auto& [el, slot] : group_index)
            if (el == element) return items[slot];
        ContextItem item;
        item.location = loc;
        item.visibility = visibility_of(loc);
        item.source_node = element;
        items.push_back(std::move(item));
        group_index.emplace_back(element, items.size() - 1);
        return items.back();
    };

    auto in_scan_scope = [&](NodeId id) {
        if (!segment.slice) return tree.is_ancestor_or_self(segment.segment_root, id);
        if (id == segment.segment_root) return true;  // bare text in a slice
        for (NodeId r : scan_roots)
            if (tree.is_ancestor_or_self(r, id)) return true;
        return false;
    };

    for (NodeId scan_root : scan_roots) {
        tree.for_each_in_subtree(scan_root, [&](const DomNode& n) {
            if (n.is_element()) {
                for (const auto& [name, value] : n.attributes) {
                    std::string attr_upper = to_upper_ascii(name);
                    if (n.tag == "META" && attr_upper == "CONTENT")
                        continue;  // handled document-globally
                    if (!attribute_vocabulary().count({n.tag, attr_upper})) continue;
                    LocationDescriptor loc = LocationDescriptor::attr(n.tag, attr_upper);
                    if (!wanted(loc)) continue;
                    std::string text = collapse_ws(value);
                    if (text.empty()) continue;
                    ContextItem item;
                    item.text = std::move(text);
                    item.location = loc;
                    item.visibility = visibility_of(loc);
                    item.source_node = n.id;
                    item.tokens = is_url_attribute(loc) ? tokenize_url_words(value)
                                                        : whitespace_tokens(item.text);
                    items.push_back(std::move(item));
                }
                return;
            }
            if (n.is_comment()) {
                if (!wanted(LocationDescriptor::comment())) return;
                std::string text = collapse_ws(n.text);
                if (text.empty()) return;
                ContextItem item;
                item.text = std::move(text);
                item.location = LocationDescriptor::comment();
                item.visibility = Visibility::Hidden;
                item.source_node = n.id;
                items.push_back(std::move(item));
                return;
            }
            // Text node.
            if (trim(n.text).empty()) return;
            if (tree.has_ancestor_tag(n.id, "STYLE")) return;
            // Script content is its own hidden location.
            std::optional<NodeId> cur = n.parent;
            NodeId script_element = 0;
            bool in_script = false;
            while (cur) {
                const DomNode& a = tree.node(*cur);
                if (a.is_element() && a.tag == "SCRIPT") {
                    in_script = true;
                    script_element = *cur;
                    break;
                }
                cur = a.parent;
            }
            if (in_script) {
                if (wanted(LocationDescriptor::script()) && in_scan_scope(script_element))
                    group_slot(script_element, LocationDescriptor::script()).text +=
                        n.text;
                return;
            }
            // Attribute the text to its nearest enclosing vocabulary tag so each
            // word is counted in exactly one location.
            cur = n.parent;
            while (cur) {
                const DomNode& a = tree.node(*cur);
                if (a.is_element() && enclosing_vocabulary().count(a.tag)) break;
                cur = a.parent;
            }
            if (!cur) return;
            const DomNode& encl = tree.node(*cur);
            if (encl.tag == "TITLE") return;  // page title handled globally
            if (!in_scan_scope(*cur)) return;
            LocationDescriptor loc = LocationDescriptor::enclosed(encl.tag);
            if (!wanted(loc)) return;
            group_slot(*cur, loc).text += n.text;
        });
    }

    for (auto& [element, slot] : group_index) items[slot].text = collapse_ws(items[slot].text);

    // Document-global locations: page title and meta content.
    if (!tree.empty()) {
        if (wanted(LocationDescriptor::title())) {
            tree.for_each_in_subtree(tree.root(), [&](const DomNode& n) {
                if (!n.is_element() || n.tag != "TITLE") return;
                std::string text;
                tree.for_each_in_subtree(n.id, [&](const DomNode& t) {
                    if (t.is_text()) text += t.text;
                });
                text = collapse_ws(text);
                if (text.empty()) return;
                ContextItem item;
                item.text = std::move(text);
                item.location = LocationDescriptor::title();
                item.visibility = Visibility::Visible;
                item.source_node = n.id;
                items.push_back(std::move(item));
            });
        }
        if (wanted(LocationDescriptor::meta())) {
            tree.for_each_in_subtree(tree.root(), [&](const DomNode& n) {
                if (!n.is_element() || n.tag != "META") return;
                const std::string* content = tree.attr(n.id, "content");
                if (!content) return;
                std::string text = collapse_ws(*content);
                if (text.empty()) return;
                ContextItem item;
                item.text = std::move(text);
                item.location = LocationDescriptor::meta();
                item.visibility = Visibility::Hidden;
                item.source_node = n.id;
                items.push_back(std::move(item));
            });
        }
    }

    // Grouped items may have ended up whitespace-only.
    std::erase_if(items, [](const ContextItem& i) { return i.text.empty(); });
    return items;
}

}  // namespace

LocationDescriptor LocationDescriptor::attr(std::string_view tag,
                                            std::string_view attribute) {
    LocationDescriptor d;
    d.kind = LocationKind::Attribute;
    d.tag = to_upper_ascii(tag);
    d.attribute = to_upper_ascii(attribute);
    return d;
}

LocationDescriptor LocationDescriptor::enclosed(std::string_view tag) {
    LocationDescriptor d;
    d.kind = LocationKind::EnclosedBy;
    d.tag = to_upper_ascii(tag);
    return d;
}

LocationDescriptor LocationDescriptor::script() {
    LocationDescriptor d;
    d.kind = LocationKind::Script;
    return d;
}

LocationDescriptor LocationDescriptor::comment() {
    LocationDescriptor d;
    d.kind = LocationKind::Comment;
    return d;
}

LocationDescriptor LocationDescriptor::meta() {
    LocationDescriptor d;
    d.kind = LocationKind::Meta;
    return d;
}

LocationDescriptor LocationDescriptor::title() {
    LocationDescriptor d;
    d.kind = LocationKind::Title;
    return d;
}

std::string LocationDescriptor::to_string() const {
    switch (kind) {
        case LocationKind::Attribute: return "ATTR:" + tag + ":" + attribute;
        case LocationKind::EnclosedBy: return "ENCL:" + tag;
        case LocationKind::Script: return "SCRIPT";
        case LocationKind::Comment: return "COMMENT";
        case LocationKind::Meta: return "META";
        case LocationKind::Title: return "TITLE";
    }
    return "";
}

LocationDescriptor LocationDescriptor::parse(std::string_view text) {
    std::string upper = to_upper_ascii(trim(text));
    if (upper == "SCRIPT") return script();
    if (upper == "COMMENT") return comment();
    if (upper == "META") return meta();
    if (upper == "TITLE") return title();
    if (upper.rfind("ENCL:", 0) == 0) {
        std::string tag = upper.substr(5);
        if (tag.empty()) throw FileFormatError("bad location descriptor: " + upper);
        return enclosed(tag);
    }
    if (upper.rfind("ATTR:", 0) == 0) {
        std::size_t colon = upper.find(':', 5);
        if (colon == std::string::npos || colon + 1 >= upper.size() || colon == 5)
            throw FileFormatError("bad location descriptor: " + upper);
        return attr(upper.substr(5, colon - 5), upper.substr(colon + 1));
    }
    throw FileFormatError("bad location descriptor: " + std::string(text));
}

Visibility visibility_of(const LocationDescriptor& loc) {
    switch (loc.kind) {
        case LocationKind::EnclosedBy:
        case LocationKind::Title:
            return Visibility::Visible;
        default:
            return Visibility::Hidden;
    }
}

std::string to_string(PageCategory c) {
    switch (c) {
        case PageCategory::Business: return "business";
        case PageCategory::Informational: return "informational";
        case PageCategory::News: return "news";
        case PageCategory::Advocacy: return "advocacy";
        case PageCategory::Personal: return "personal";
        case PageCategory::Unknown: return "unknown";
    }
    return "unknown";
}

PageCategory parse_category(std::string_view text) {
    std::string s = to_lower_ascii(trim(text));
    if (s == "business") return PageCategory::Business;
    if (s == "informational" || s == "info" || s == "information")
        return PageCategory::Informational;
    if (s == "news") return PageCategory::News;
    if (s == "advocacy") return PageCategory::Advocacy;
    if (s == "personal") return PageCategory::Personal;
    if (s == "unknown") return PageCategory::Unknown;
    throw FileFormatError("unknown page category: " + std::string(text));
}

const std::set<LocationDescriptor>& SignificantLocationTable::for_category(
    PageCategory c) const {
    auto it = sets.find(c);
    if (it != sets.end()) return it->second;
    it = sets.find(PageCategory::Unknown);
    if (it != sets.end()) return it->second;
    static const std::set<LocationDescriptor> empty;
    return empty;
}

SignificantLocationTable default_significant_locations() {
    using LD = LocationDescriptor;
    SignificantLocationTable table;
    table.sets[PageCategory::Business] = {
        LD::attr("IMG", "ALT"), LD::attr("IMG", "SRC"), LD::attr("A", "HREF"),
        LD::enclosed("A"), LD::enclosed("TD")};
    table.sets[PageCategory::Informational] = {
        LD::attr("IMG", "ALT"), LD::attr("IMG", "SRC"), LD::attr("A", "HREF"),
        LD::enclosed("A"), LD::enclosed("P")};
    table.sets[PageCategory::News] = {
        LD::attr("IMG", "ALT"), LD::attr("IMG", "SRC"), LD::attr("A", "HREF"),
        LD::attr("A", "NAME"), LD::enclosed("A"), LD::enclosed("DIV")};
    table.sets[PageCategory::Advocacy] = {
        LD::attr("IMG", "ALT"), LD::attr("A", "HREF"), LD::enclosed("P")};
    table.sets[PageCategory::Personal] = {
        LD::attr("A", "HREF"), LD::attr("A", "TITLE"), LD::attr("IMG", "SRC"),
        LD::enclosed("A"), LD::enclosed("P"), LD::enclosed("DIV")};
    table.sets[PageCategory::Unknown] = {
        LD::attr("IMG", "ALT"), LD::attr("IMG", "SRC"), LD::attr("A", "HREF"),
        LD::attr("A", "TITLE"), LD::enclosed("A"), LD::enclosed("TD"),
        LD::enclosed("DIV"), LD::enclosed("P")};
    for (PageCategory c : kDistributionOrder)
        for (const LocationTableRow& row : survey_distribution())
            table.weights[c][row.location] = row.percent[category_column(c)];
    return table;
}

SignificantLocationTable load_location_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileFormatError("cannot open location table: " + path.string());
    SignificantLocationTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty() || sv[0] == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss{std::string(sv)};
        std::string field;
        while (std::getline(ss, field, '\t')) fields.push_back(std::string(trim(field)));
        if (fields.size() < 2)
            throw FileFormatError(path.string() + ":" + std::to_string(line_no) +
                                  ": expected category<TAB>location[<TAB>percent]");
        PageCategory category = parse_category(fields[0]);
        LocationDescriptor loc = LocationDescriptor::parse(fields[1]);
        table.sets[category].insert(loc);
        if (fields.size() >= 3 && !fields[2].empty()) {
            try {
                table.weights[category][loc] = std::stod(fields[2]);
            } catch (const std::exception&) {
                throw FileFormatError(path.string() + ":" + std::to_string(line_no) +
                                      ": bad percent value '" + fields[2] + "'");
            }
        }
    }
    return table;
}

const std::vector<LocationTableRow>& observation_distribution() {
    static const std::vector<LocationTableRow> table =
        build_table(kObservationRows, std::size(kObservationRows));
    return table;
}

const std::vector<LocationTableRow>& survey_distribution() {
    static const std::vector<LocationTableRow> table =
        build_table(kSurveyRows, std::size(kSurveyRows));
    return table;
}

double distribution_percent(const std::vector<LocationTableRow>& table,
                            PageCategory c, const LocationDescriptor& loc) {
    for (const LocationTableRow& row : table)
        if (row.location == loc) return row.percent[category_column(c)];
    return 0.0;
}

std::vector<LocationDescriptor> candidate_locations(PageCategory c) {
    std::vector<LocationDescriptor> out;
    if (c == PageCategory::Unknown) return out;
    for (const LocationTableRow& row : observation_distribution())
        if (row.percent[category_column(c)] > 0) out.push_back(row.location);
    return out;
}

std::vector<ContextItem> extract_context(const DomTree& tree,
                                         const ImageSegment& segment,
                                         PageCategory category,
                                         const SignificantLocationTable& table) {
    return scan_segment(tree, segment, &table.for_category(category));
}

std::vector<ContextItem> enumerate_all_locations(const DomTree& tree,
                                                 const ImageSegment& segment) {
    return scan_segment(tree, segment, nullptr);
}

double LocationDistribution::percent(const LocationDescriptor& loc) const {
    auto it = counts.find(loc);
    if (it == counts.end() || total_relevant == 0) return 0.0;
    return 100.0 * static_cast<double>(it->second) /
           static_cast<double>(total_relevant);
}

std::map<LocationDescriptor, double> LocationDistribution::percentages() const {
    std::map<LocationDescriptor, double> out;
    for (const auto& [loc, count] : counts) out[loc] = percent(loc);
    return out;
}

LocationDistribution location_distribution(
    const std::vector<std::pair<ContextItem, bool>>& items, PageCategory category) {
    if (items.empty()) throw std::invalid_argument("no items to distribute");
    LocationDistribution dist;
    dist.category = category;
    for (const auto& [item, relevant] : items) {
        if (!relevant) continue;
        ++dist.counts[item.location];
        ++dist.total_relevant;
    }
    if (dist.total_relevant == 0)
        throw std::invalid_argument("distribution over zero relevant items");
    return dist;
}

std::vector<std::string> tokenize_url_words(std::string_view value) {
    // Scheme/extension fragments carry no image semantics.
    static const std::set<std::string> stoplist = {
        "http", "https", "www",  "com",  "net", "org",  "html", "htm",
        "php",  "asp",   "aspx", "jsp",  "jpg", "jpeg", "png",  "gif",
        "svg",  "webp",  "bmp",
    };
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        if (cur.size() >= 3 && !stoplist.count(cur)) {
            bool all_digits = true;
            for (char c : cur) all_digits = all_digits && c >= '0' && c <= '9';
            if (!all_digits) tokens.push_back(cur);
        }
        cur.clear();
    };
    for (char c : value) {
        if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) cur.push_back(c);
        else if (c >= 'A' && c <= 'Z') cur.push_back(char(c + 32));
        else flush();
    }
    flush();
    return tokens;
}

std::vector<std::string> context_strings(const std::vector<ContextItem>& items) {
    std::vector<std::string> out;
    for (const ContextItem& item : items) {
        if (is_url_attribute(item.location)) {
            for (const std::string& token : item.tokens) out.push_back(token);
        } else {
            out.push_back(item.text);
        }
    }
    return out;
}

}  // namespace imgctx
