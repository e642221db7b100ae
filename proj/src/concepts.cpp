#include "imgctx/concepts.hpp"

#include <fstream>
#include <stdexcept>

#include "imgctx/errors.hpp"
#include "imgctx/text_util.hpp"

namespace imgctx {

std::string to_string(ConceptClass c) {
    switch (c) {
        case ConceptClass::Signal: return "Signal";
        case ConceptClass::Object: return "Object";
        case ConceptClass::Scene: return "Scene";
        case ConceptClass::Abstract: return "Abstract";
        case ConceptClass::Relational: return "Relational";
    }
    return "Object";
}

ConceptClass parse_concept_class(std::string_view text) {
    std::string s = to_lower_ascii(trim(text));
    if (s == "signal") return ConceptClass::Signal;
    if (s == "object") return ConceptClass::Object;
    if (s == "scene") return ConceptClass::Scene;
    if (s == "abstract") return ConceptClass::Abstract;
    if (s == "relational") return ConceptClass::Relational;
    throw FileFormatError("unknown concept class: " + std::string(text));
}

ConceptLexicon starter_lexicon() {
    ConceptLexicon lex;
    auto add = [&](const char* phrase, ConceptClass c) {
        lex.entries.emplace(phrase, c);
    };
    // Low-level visual vocabulary.
    add("pink striped", ConceptClass::Signal);
    add("whirly blue", ConceptClass::Signal);
    for (const char* color : {"red", "orange", "yellow", "green", "blue", "purple",
                              "pink", "brown", "black", "white", "gray", "grey"})
        add(color, ConceptClass::Signal);
    // Entities.
    for (const char* word :
         {"human", "animal", "animals", "plant", "plants", "table", "fan", "book",
          "bag", "hat", "clinton"})
        add(word, ConceptClass::Object);
    // Whole-image settings.
    for (const char* word : {"city", "landscape", "indoor", "outdoor", "still life",
                             "portrait", "mountain scene", "beach", "field"})
        add(word, ConceptClass::Scene);
    add("travel", ConceptClass::Abstract);
    // Metadata-style relations.
    for (const char* word : {"author", "brand", "photographer", "date"})
        add(word, ConceptClass::Relational);
    return lex;
}

ConceptLexicon load_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileFormatError("cannot open lexicon: " + path.string());
    ConceptLexicon lex;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty() || sv[0] == '#') continue;
        std::size_t tab = sv.find('\t');
        if (tab == std::string_view::npos)
            throw FileFormatError(path.string() + ":" + std::to_string(line_no) +
                                  ": expected phrase<TAB>class");
        std::string phrase = normalize_for_match(sv.substr(0, tab));
        if (phrase.empty())
            throw FileFormatError(path.string() + ":" + std::to_string(line_no) +
                                  ": empty phrase");
        lex.entries[phrase] = parse_concept_class(sv.substr(tab + 1));
    }
    return lex;
}

ConceptClass tag_concept(std::string_view item_text, const ConceptLexicon& lexicon) {
    std::string normalized = normalize_for_match(item_text);
    if (normalized.empty())
        throw std::invalid_argument("cannot tag an empty phrase");
    std::vector<std::string> words = split_words(normalized);
    for (std::size_t len = words.size(); len >= 1; --len) {
        for (std::size_t start = 0; start + len <= words.size(); ++start) {
            std::string phrase = words[start];
            for (std::size_t k = 1; k < len; ++k) phrase += " " + words[start + k];
            auto it = lexicon.entries.find(phrase);
            if (it != lexicon.entries.end()) return it->second;
        }
    }
    return lexicon.default_class;
}

ConceptDistribution concept_distribution(const std::vector<ConceptClass>& tagged) {
    if (tagged.empty())
        throw std::invalid_argument("distribution over an empty tag list");
    std::map<ConceptClass, std::size_t> counts = {
        {ConceptClass::Signal, 0}, {ConceptClass::Object, 0},
        {ConceptClass::Scene, 0},  {ConceptClass::Abstract, 0},
        {ConceptClass::Relational, 0}};
    for (ConceptClass c : tagged) ++counts[c];
    ConceptDistribution dist;
    for (const auto& [c, n] : counts)
        dist.percent[c] =
            100.0 * static_cast<double>(n) / static_cast<double>(tagged.size());
    return dist;
}

}  // namespace imgctx
