#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace imgctx {

// The five semantic concept classes for image descriptors.
enum class ConceptClass { Signal, Object, Scene, Abstract, Relational };

std::string to_string(ConceptClass c);
ConceptClass parse_concept_class(std::string_view text);  // throws FileFormatError

// Phrase -> class lookup with a fixed fallback class.
struct ConceptLexicon {
    std::unordered_map<std::string, ConceptClass> entries;  // normalized keys
    ConceptClass default_class = ConceptClass::Object;
};

// Example terms for each class plus common color names under Signal.
ConceptLexicon starter_lexicon();

// Line-oriented `phrase<TAB>class` records.
ConceptLexicon load_lexicon(const std::filesystem::path& path);

// Longest contiguous word-sequence match over the phrase, falling back to
// individual tokens, then to the lexicon's default class.
ConceptClass tag_concept(std::string_view item_text, const ConceptLexicon& lexicon);

struct ConceptDistribution {
    std::map<ConceptClass, double> percent;  // all five classes present

    double at(ConceptClass c) const { return percent.at(c); }
};

ConceptDistribution concept_distribution(const std::vector<ConceptClass>& tagged);

}  // namespace imgctx
