#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"

#include "imgctx/concepts.hpp"
#include "imgctx/errors.hpp"

using namespace imgctx;

namespace {
const std::filesystem::path kDataDir = IMGCTX_DATA_DIR;
}

TEST_CASE("tag_concept: starter lexicon examples") {
    ConceptLexicon lex = starter_lexicon();
    CHECK(tag_concept("pink striped", lex) == ConceptClass::Signal);
    CHECK(tag_concept("beach", lex) == ConceptClass::Scene);
    CHECK(tag_concept("travel", lex) == ConceptClass::Abstract);
    CHECK(tag_concept("photographer", lex) == ConceptClass::Relational);
    CHECK(tag_concept("book", lex) == ConceptClass::Object);
    // nothing matches: default class
    CHECK(tag_concept("zygomatic flibbertigibbet", lex) == ConceptClass::Object);
    CHECK_THROWS_AS(tag_concept("   ", lex), std::invalid_argument);
}

TEST_CASE("tag_concept: longest contiguous match wins") {
    ConceptLexicon lex;
    lex.entries["mountain"] = ConceptClass::Object;
    lex.entries["mountain scene"] = ConceptClass::Scene;
    CHECK(tag_concept("mountain scene", lex) == ConceptClass::Scene);
    CHECK(tag_concept("a wide mountain scene today", lex) == ConceptClass::Scene);
    CHECK(tag_concept("the mountain", lex) == ConceptClass::Object);
    // token fallback inside a longer phrase
    ConceptLexicon starter = starter_lexicon();
    CHECK(tag_concept("sunny beach day", starter) == ConceptClass::Scene);
    CHECK(tag_concept("Travel Guide", starter) == ConceptClass::Abstract);
}

TEST_CASE("tag_concept: extending the lexicon with unmatched terms is monotone") {
    ConceptLexicon lex = starter_lexicon();
    std::vector<std::string> inputs = {"pink striped", "beach",  "travel",
                                       "brand",        "plants", "whirly blue",
                                       "unmatched gizmo"};
    std::vector<ConceptClass> before;
    for (const std::string& text : inputs) before.push_back(tag_concept(text, lex));

    ConceptLexicon extended = lex;
    extended.entries["gizmo"] = ConceptClass::Relational;   // unmatched before
    extended.entries["formation"] = ConceptClass::Scene;    // absent from inputs
    for (std::size_t i = 0; i + 1 < inputs.size(); ++i)
        CHECK(tag_concept(inputs[i], extended) == before[i]);
    // the previously defaulted phrase may legitimately change
    CHECK(tag_concept("unmatched gizmo", extended) == ConceptClass::Relational);
}

TEST_CASE("concept_distribution: shapes and degenerate cases") {
    std::vector<ConceptClass> all_object(7, ConceptClass::Object);
    ConceptDistribution d1 = concept_distribution(all_object);
    CHECK(d1.at(ConceptClass::Object) == 100.0);
    CHECK(d1.at(ConceptClass::Signal) == 0.0);
    CHECK(d1.percent.size() == 5);

    std::vector<ConceptClass> split = {ConceptClass::Object, ConceptClass::Object,
                                       ConceptClass::Abstract, ConceptClass::Abstract};
    ConceptDistribution d2 = concept_distribution(split);
    CHECK(d2.at(ConceptClass::Object) == 50.0);
    CHECK(d2.at(ConceptClass::Abstract) == 50.0);

    CHECK_THROWS_AS(concept_distribution({}), std::invalid_argument);
}

TEST_CASE("concept_distribution: business survey column from proportional counts") {
    // 2.5 / 69.6 / 0 / 23.4 / 4.5 percent, scaled to integer counts by 10
    std::vector<ConceptClass> tagged;
    tagged.insert(tagged.end(), 25, ConceptClass::Signal);
    tagged.insert(tagged.end(), 696, ConceptClass::Object);
    tagged.insert(tagged.end(), 234, ConceptClass::Abstract);
    tagged.insert(tagged.end(), 45, ConceptClass::Relational);
    ConceptDistribution dist = concept_distribution(tagged);
    CHECK(dist.at(ConceptClass::Signal) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(dist.at(ConceptClass::Object) == doctest::Approx(69.6).epsilon(1e-12));
    CHECK(dist.at(ConceptClass::Scene) == 0.0);
    CHECK(dist.at(ConceptClass::Abstract) == doctest::Approx(23.4).epsilon(1e-12));
    CHECK(dist.at(ConceptClass::Relational) == doctest::Approx(4.5).epsilon(1e-12));
}

TEST_CASE("concept_distribution: random inputs sum to 100") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<ConceptClass> tagged;
        int n = 1 + int(rng() % 40);
        for (int i = 0; i < n; ++i)
            tagged.push_back(static_cast<ConceptClass>(rng() % 5));
        ConceptDistribution dist = concept_distribution(tagged);
        double total = 0;
        for (const auto& [c, pct] : dist.percent) {
            CHECK(pct >= 0.0);
            CHECK(pct <= 100.0);
            total += pct;
        }
        CHECK(std::abs(total - 100.0) <= 0.5);
    }
}

TEST_CASE("load_lexicon: shipped starter file matches the built-in lexicon") {
    ConceptLexicon from_file = load_lexicon(kDataDir / "lexicon.tsv");
    ConceptLexicon builtin = starter_lexicon();
    CHECK(from_file.entries.size() == builtin.entries.size());
    for (const auto& [phrase, cls] : builtin.entries) {
        REQUIRE(from_file.entries.count(phrase) == 1);
        CHECK(from_file.entries.at(phrase) == cls);
    }
}

TEST_CASE("load_lexicon: malformed records are rejected") {
    namespace fs = std::filesystem;
    fs::path tmp = fs::temp_directory_path() / "imgctx_bad_lexicon.tsv";
    {
        std::ofstream out(tmp);
        out << "beach\tScenery\n";  // not one of the five classes
    }
    CHECK_THROWS_AS(load_lexicon(tmp), FileFormatError);
    {
        std::ofstream out(tmp);
        out << "no-tab-here\n";
    }
    CHECK_THROWS_AS(load_lexicon(tmp), FileFormatError);
    fs::remove(tmp);
}
