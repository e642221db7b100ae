#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"

#include "imgctx/errors.hpp"
#include "imgctx/eval.hpp"

using namespace imgctx;

namespace {

LabeledSegment truth_of(const std::string& page, const std::string& key,
                        std::vector<std::string> text) {
    LabeledSegment seg;
    seg.page_id = page;
    seg.image_key = key;
    seg.text = std::move(text);
    seg.category = PageCategory::Unknown;
    return seg;
}

Prediction pred_of(const std::string& page, const std::string& key,
                   std::vector<std::string> text) {
    Prediction p;
    p.page_id = page;
    p.image_key = key;
    p.text = std::move(text);
    return p;
}

}  // namespace

TEST_CASE("EvalReport::from_counts matches the reference comparison row") {
    EvalReport r = EvalReport::from_counts(869, 864, 628);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.2f", r.precision);
    CHECK(std::string(buf) == "0.73");
    std::snprintf(buf, sizeof buf, "%.2f", r.recall);
    CHECK(std::string(buf) == "0.72");
    CHECK(r.table().find("Recall     0.72") != std::string::npos);
    CHECK(r.table().find("Precision  0.73") != std::string::npos);
}

TEST_CASE("EvalReport arithmetic") {
    EvalReport perfect = EvalReport::from_counts(5, 5, 5);
    CHECK(perfect.precision == 1.0);
    CHECK(perfect.recall == 1.0);

    EvalReport partial = EvalReport::from_counts(4, 5, 2);
    CHECK(partial.precision == doctest::Approx(0.4));
    CHECK(partial.recall == doctest::Approx(0.5));

    EvalReport none = EvalReport::from_counts(3, 0, 0);
    CHECK(none.precision == 0.0);
    CHECK(none.recall == 0.0);

    CHECK_THROWS_AS(EvalReport::from_counts(2, 2, 3), std::invalid_argument);
}

TEST_CASE("score: exact multiset match, no more and no less") {
    std::vector<LabeledSegment> truth = {
        truth_of("p1", "0:a.jpg", {"red mat", "img", "mat"}),
        truth_of("p1", "1:b.jpg", {"blue rug"}),
        truth_of("p2", "0:c.jpg", {"word"}),
    };
    std::vector<Prediction> predicted = {
        pred_of("p1", "0:a.jpg", {"img", "mat", "red mat"}),   // order irrelevant
        pred_of("p1", "1:b.jpg", {"blue rug", "extra"}),       // superset: wrong
        pred_of("p2", "1:x.jpg", {"word"}),                    // unknown key
    };
    EvalReport r = score(truth, predicted);
    CHECK(r.actual == 3);
    CHECK(r.extracted == 3);
    CHECK(r.correct == 1);

    // normalization: whitespace and case differences do not matter
    std::vector<Prediction> fuzzy = {
        pred_of("p1", "0:a.jpg", {"  Red   MAT ", "IMG", "mat"})};
    CHECK(score(truth, fuzzy).correct == 1);

    // page id participates in the key
    std::vector<Prediction> wrong_page = {pred_of("p9", "0:a.jpg", {"red mat"})};
    CHECK(score(truth, wrong_page).correct == 0);
}

TEST_CASE("score: permutation invariance") {
    std::vector<LabeledSegment> truth = {
        truth_of("p", "0:a", {"x"}), truth_of("p", "1:b", {"y"}),
        truth_of("p", "2:c", {"z"})};
    std::vector<Prediction> predicted = {
        pred_of("p", "2:c", {"z"}), pred_of("p", "0:a", {"x"}),
        pred_of("p", "1:b", {"wrong"})};
    EvalReport forward = score(truth, predicted);
    std::reverse(predicted.begin(), predicted.end());
    std::reverse(truth.begin(), truth.end());
    EvalReport backward = score(truth, predicted);
    CHECK(forward.correct == backward.correct);
    CHECK(forward.correct == 2);
}

TEST_CASE("score: duplicate keys are input errors") {
    std::vector<LabeledSegment> truth = {truth_of("p", "0:a", {"x"})};
    std::vector<Prediction> dup = {pred_of("p", "0:a", {"x"}),
                                   pred_of("p", "0:a", {"y"})};
    CHECK_THROWS_AS(score(truth, dup), std::invalid_argument);

    std::vector<LabeledSegment> dup_truth = {truth_of("p", "0:a", {"x"}),
                                             truth_of("p", "0:a", {"y"})};
    std::vector<Prediction> ok = {pred_of("p", "0:a", {"x"})};
    CHECK_THROWS_AS(score(dup_truth, ok), std::invalid_argument);
}

TEST_CASE("dataset save/load round trip") {
    namespace fs = std::filesystem;
    fs::path tmp = fs::temp_directory_path() / "imgctx_dataset.truth";
    std::vector<LabeledSegment> records = {
        truth_of("page_a", "0:img/x_y_0.jpg", {"alpha beta", "img"}),
        truth_of("page_a", "3:img/z_w_3.jpg", {"gamma"}),
    };
    records[1].category = PageCategory::Business;
    save_dataset(tmp, records);
    std::vector<LabeledSegment> loaded = load_dataset(tmp);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].page_id == records[0].page_id);
    CHECK(loaded[0].image_key == records[0].image_key);
    CHECK(loaded[0].text == records[0].text);
    CHECK(loaded[1].category == PageCategory::Business);
    fs::remove(tmp);
}

TEST_CASE("prediction save/load round trip and empty file") {
    namespace fs = std::filesystem;
    fs::path tmp = fs::temp_directory_path() / "imgctx_preds.jsonl";
    std::vector<Prediction> records = {pred_of("p", "0:a.jpg", {"one", "two"})};
    save_predictions(tmp, records);
    std::vector<Prediction> loaded = load_external_segments(tmp);
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].text == records[0].text);

    std::ofstream(tmp).close();  // truncate
    CHECK(load_external_segments(tmp).empty());
    fs::remove(tmp);
}

TEST_CASE("load_dataset: schema errors name the record and field") {
    namespace fs = std::filesystem;
    fs::path tmp = fs::temp_directory_path() / "imgctx_bad.truth";
    {
        std::ofstream out(tmp);
        out << R"({"page_id":"p","image_key":"0:a","category":"unknown"})" << "\n";
    }
    try {
        load_dataset(tmp);
        FAIL("expected FileFormatError");
    } catch (const FileFormatError& e) {
        std::string msg = e.what();
        CHECK(msg.find("record 1") != std::string::npos);
        CHECK(msg.find("text") != std::string::npos);
    }
    {
        std::ofstream out(tmp);
        out << R"({"page_id":"p","image_key":"0:a","category":"unknown","text":[]})"
            << "\n";
    }
    CHECK_THROWS_AS(load_dataset(tmp), FileFormatError);
    {
        std::ofstream out(tmp);
        out << "not json\n";
    }
    CHECK_THROWS_AS(load_dataset(tmp), FileFormatError);
    fs::remove(tmp);
}

TEST_CASE("image_key: document-order index plus src") {
    DomTree tree = parse_html(
        "<body><img src=first.png><p><img src=second.png></p></body>");
    auto images = collect_images(tree);
    REQUIRE(images.size() == 2);
    CHECK(image_key(tree, images[0].node) == "0:first.png");
    CHECK(image_key(tree, images[1].node) == "1:second.png");
    CHECK_THROWS_AS(image_key(tree, tree.root()), std::out_of_range);
}
