// imgctx command line: segment, extract, eval, stats, gen-fixtures.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "imgctx/concepts.hpp"
#include "imgctx/context.hpp"
#include "imgctx/dom.hpp"
#include "imgctx/errors.hpp"
#include "imgctx/eval.hpp"
#include "imgctx/fixture.hpp"
#include "imgctx/segmenter.hpp"
#include "imgctx/stats.hpp"
#include "imgctx/text_util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace imgctx;

namespace {

struct CommonOpts {
    std::string category = "unknown";
    bool strict_dims = false;
    std::string format;  // per-command default
    std::string encoding = "utf-8";
    std::string locations_file;
    std::string lexicon_file;
};

void add_common(CLI::App* cmd, CommonOpts& opts, const char* default_format) {
    opts.format = default_format;
    cmd->add_option("--category", opts.category,
                    "page category (business, informational, news, advocacy, "
                    "personal, unknown)");
    cmd->add_flag("--strict-dims", opts.strict_dims,
                  "reject images without explicit width/height");
    cmd->add_option("--format", opts.format,
                    "output format: structured-records or human-readable");
    cmd->add_option("--encoding", opts.encoding, "input encoding (default utf-8)");
    cmd->add_option("--locations", opts.locations_file,
                    "significant-location table override file");
    cmd->add_option("--lexicon", opts.lexicon_file, "concept lexicon file");
}

bool records_format(const CommonOpts& opts) {
    if (opts.format == "structured-records" || opts.format == "records") return true;
    if (opts.format == "human-readable" || opts.format == "human") return false;
    throw CLI::ValidationError("--format", "unknown format: " + opts.format);
}

// Expands directories to the .html/.htm files inside, sorted for determinism.
std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
    std::vector<fs::path> files;
    for (const std::string& input : inputs) {
        fs::path p(input);
        if (fs::is_directory(p)) {
            for (const auto& entry : fs::directory_iterator(p)) {
                if (!entry.is_regular_file()) continue;
                std::string ext = entry.path().extension().string();
                if (ext == ".html" || ext == ".htm") files.push_back(entry.path());
            }
        } else {
            files.push_back(p);
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SignificantLocationTable load_table_or_default(const CommonOpts& opts) {
    if (!opts.locations_file.empty())
        return load_location_table(opts.locations_file);
    return default_significant_locations();
}

std::string node_path(const DomTree& tree, NodeId id) {
    std::vector<NodeId> chain = tree.ancestor_chain(id);
    std::string out;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        const DomNode& n = tree.node(*it);
        if (!out.empty()) out += "/";
        out += n.is_element() ? n.tag : (n.is_text() ? "#text" : "#comment");
        if (n.parent) out += "[" + std::to_string(tree.child_index(*it)) + "]";
    }
    return out;
}

struct PageWork {
    fs::path file;
    std::string page_id;
    std::string error;
    double time_ms = 0;
    std::vector<json> records;
    std::vector<Prediction> predictions;
};

// Fixed-size worker pool; results keep input order.
template <typename Fn>
void process_pages(std::vector<PageWork>& pages, Fn per_page) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < pages.size();) {
            auto start = std::chrono::steady_clock::now();
            try {
                per_page(pages[i]);
            } catch (const std::exception& e) {
                pages[i].error = e.what();
            }
            pages[i].time_ms = std::chrono::duration<double, std::milli>(
                                   std::chrono::steady_clock::now() - start)
                                   .count();
        }
    };
    unsigned n_threads = std::max(1u, std::min<unsigned>(
                                          std::thread::hardware_concurrency(),
                                          static_cast<unsigned>(pages.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
}

std::vector<PageWork> make_work(const std::vector<std::string>& inputs) {
    std::vector<PageWork> pages;
    for (const fs::path& file : expand_inputs(inputs)) {
        PageWork w;
        w.file = file;
        w.page_id = file.stem().string();
        pages.push_back(std::move(w));
    }
    return pages;
}

int finish(const std::vector<PageWork>& pages) {
    std::size_t failed = 0;
    for (const PageWork& w : pages) failed += w.error.empty() ? 0 : 1;
    return (!pages.empty() && failed == pages.size()) ? 1 : 0;
}

int run_segment(const CommonOpts& opts, const std::vector<std::string>& inputs) {
    const bool records = records_format(opts);
    std::vector<PageWork> pages = make_work(inputs);

    process_pages(pages, [&](PageWork& w) {
        DomTree tree = parse_html(read_file(w.file), opts.encoding);
        PageSegmentation segmentation = segment_page(tree, {}, opts.strict_dims);
        for (const ImageSegment& seg : segmentation.segments) {
            json rec = {
                {"page", w.page_id},
                {"image_key", image_key(tree, seg.image.node)},
                {"arrangement", to_string(seg.arrangement)},
                {"segment_root", node_path(tree, seg.segment_root)},
                {"inner_root", node_path(tree, seg.inner_root)},
                {"text_nodes", seg.text_node_ids.size()},
            };
            if (seg.outer_root) rec["outer_root"] = node_path(tree, *seg.outer_root);
            if (seg.slice) rec["slice"] = {seg.slice->first, seg.slice->last};
            w.records.push_back(std::move(rec));
        }
        for (const SkippedImage& skip : segmentation.skipped)
            w.records.push_back({{"page", w.page_id},
                                 {"image_key", image_key(tree, skip.image.node)},
                                 {"skipped", skip.reason}});
    });

    double total_ms = 0;
    std::size_t processed = 0;
    for (const PageWork& w : pages) {
        if (!w.error.empty()) {
            if (records)
                std::cout << json{{"page", w.page_id}, {"error", w.error}} << "\n";
            else
                std::cout << w.page_id << ": error: " << w.error << "\n";
            continue;
        }
        total_ms += w.time_ms;
        ++processed;
        for (const json& rec : w.records) {
            if (records) {
                std::cout << rec << "\n";
            } else if (rec.contains("skipped")) {
                std::cout << w.page_id << "  " << rec["image_key"].get<std::string>()
                          << "  skipped: " << rec["skipped"].get<std::string>() << "\n";
            } else {
                std::cout << w.page_id << "  " << rec["image_key"].get<std::string>()
                          << "  " << rec["arrangement"].get<std::string>()
                          << "  root=" << rec["segment_root"].get<std::string>()
                          << "  texts=" << rec["text_nodes"].get<std::size_t>() << "\n";
            }
        }
        if (records)
            std::cout << json{{"page", w.page_id},
                              {"time_ms", w.time_ms},
                              {"segments", w.records.size()}}
                      << "\n";
        else
            std::fprintf(stdout, "%s: %zu record(s) in %.1f ms\n", w.page_id.c_str(),
                         w.records.size(), w.time_ms);
    }
    if (processed > 0)
        std::fprintf(stderr, "mean per-page time: %.1f ms over %zu page(s)\n",
                     total_ms / double(processed), processed);
    return finish(pages);
}

int run_extract(const CommonOpts& opts, const std::vector<std::string>& inputs) {
    const bool records = records_format(opts);
    const PageCategory category = parse_category(opts.category);
    const SignificantLocationTable table = load_table_or_default(opts);
    ConceptLexicon lexicon;
    const bool tag_items = !opts.lexicon_file.empty();
    if (tag_items) lexicon = load_lexicon(opts.lexicon_file);

    std::vector<PageWork> pages = make_work(inputs);
    process_pages(pages, [&](PageWork& w) {
        DomTree tree = parse_html(read_file(w.file), opts.encoding);
        PageSegmentation segmentation = segment_page(tree, {}, opts.strict_dims);
        for (const ImageSegment& seg : segmentation.segments) {
            json items = json::array();
            for (const ContextItem& item : extract_context(tree, seg, category, table)) {
                json j = {{"text", item.text},
                          {"location", item.location.to_string()},
                          {"visibility", item.visibility == Visibility::Visible
                                             ? "visible"
                                             : "hidden"}};
                if (!item.tokens.empty()) j["tokens"] = item.tokens;
                if (tag_items) j["concept"] = to_string(tag_concept(item.text, lexicon));
                items.push_back(std::move(j));
            }
            w.records.push_back({{"page", w.page_id},
                                 {"image_key", image_key(tree, seg.image.node)},
                                 {"category", to_string(category)},
                                 {"items", std::move(items)}});
        }
    });

    for (const PageWork& w : pages) {
        if (!w.error.empty()) {
            std::cout << json{{"page", w.page_id}, {"error", w.error}} << "\n";
            continue;
        }
        for (const json& rec : w.records) {
            if (records) {
                std::cout << rec << "\n";
            } else {
                std::cout << w.page_id << "  " << rec["image_key"].get<std::string>()
                          << "\n";
                for (const json& item : rec["items"])
                    std::cout << "    [" << item["location"].get<std::string>() << "] "
                              << item["text"].get<std::string>() << "\n";
            }
        }
    }
    return finish(pages);
}

int run_eval(const CommonOpts& opts, const std::string& truth_path,
             const std::string& predictions_path,
             const std::vector<std::string>& inputs) {
    std::vector<LabeledSegment> truth;
    fs::path tp(truth_path);
    if (fs::is_directory(tp)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(tp))
            if (entry.path().extension() == ".truth") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const fs::path& f : files)
            for (LabeledSegment& seg : load_dataset(f)) truth.push_back(std::move(seg));
    } else {
        truth = load_dataset(tp);
    }

    std::vector<Prediction> predictions;
    if (!predictions_path.empty()) {
        predictions = load_external_segments(predictions_path);
    } else {
        const PageCategory category = parse_category(opts.category);
        const SignificantLocationTable table = load_table_or_default(opts);
        std::vector<PageWork> pages = make_work(inputs);
        process_pages(pages, [&](PageWork& w) {
            DomTree tree = parse_html(read_file(w.file), opts.encoding);
            w.predictions = pipeline_predictions(tree, w.page_id, category, table, {},
                                                 opts.strict_dims);
        });
        for (PageWork& w : pages) {
            if (!w.error.empty()) throw Error(w.page_id + ": " + w.error);
            for (Prediction& p : w.predictions) predictions.push_back(std::move(p));
        }
    }

    EvalReport report = score(truth, predictions);
    if (records_format(opts))
        std::cout << json{{"actual", report.actual},
                          {"extracted", report.extracted},
                          {"correct", report.correct},
                          {"recall", report.recall},
                          {"precision", report.precision}}
                  << "\n";
    else
        std::cout << report.table();
    return 0;
}

int run_stats_binomial(const CommonOpts& opts, const std::string& counts_file,
                       std::size_t n_override, double p_override, double alpha,
                       std::size_t k_override) {
    std::ifstream in(counts_file);
    if (!in) throw Error("cannot open counts table: " + counts_file);
    std::vector<std::pair<LocationDescriptor, std::size_t>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty() || sv[0] == '#') continue;
        std::size_t tab = sv.find('\t');
        if (tab == std::string_view::npos)
            throw FileFormatError(counts_file + ":" + std::to_string(line_no) +
                                  ": expected location<TAB>count");
        LocationDescriptor loc = LocationDescriptor::parse(sv.substr(0, tab));
        std::size_t count = 0;
        try {
            count = std::stoull(std::string(trim(sv.substr(tab + 1))));
        } catch (const std::exception&) {
            throw FileFormatError(counts_file + ":" + std::to_string(line_no) +
                                  ": bad count");
        }
        rows.emplace_back(loc, count);
    }
    if (rows.empty()) throw FileFormatError(counts_file + ": no rows");

    std::size_t n = n_override;
    if (n == 0)
        for (const auto& [loc, count] : rows) n += count;
    const std::size_t k = k_override != 0 ? k_override : rows.size();

    std::vector<BinomialTestResult> results;
    for (const auto& [loc, count] : rows) {
        BinomialTestInput input;
        input.successes = count;
        input.total = n;
        input.candidate_locations = k;
        input.alpha = alpha;
        if (p_override > 0) input.proportion_override = p_override;
        results.push_back(binomial_location_test(input));
    }

    const bool records = records_format(opts);
    if (!records)
        std::printf("%-24s %10s   %s\n", "Location", "z-score", "Conclusion");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& [loc, count] = rows[i];
        const BinomialTestResult& result = results[i];
        const char* conclusion =
            result.decision == TestDecision::RejectH0 ? "Reject H0" : "Accept H0";
        if (records)
            std::cout << json{{"location", loc.to_string()},
                              {"count", count},
                              {"z", result.z},
                              {"critical", result.critical},
                              {"decision", conclusion},
                              {"approximation_valid", result.approximation_valid}}
                      << "\n";
        else
            std::printf("%-24s %10.2f   %s%s\n", loc.to_string().c_str(), result.z,
                        conclusion,
                        result.approximation_valid ? "" : " (approximation invalid)");
    }
    return 0;
}

std::vector<double> read_numbers(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<double> out;
    double v;
    while (in >> v) out.push_back(v);
    return out;
}

int run_gen_fixtures(std::uint64_t seed, int pages, int unlisted, int listed,
                     int semi_listed, const std::string& category,
                     const std::string& out_dir, const std::string& prefix) {
    fs::create_directories(out_dir);
    for (int i = 0; i < pages; ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "%s_%03d", prefix.c_str(), i);
        FixtureSpec spec;
        spec.seed = seed + static_cast<std::uint64_t>(i);
        spec.unlisted = unlisted;
        spec.listed = listed;
        spec.semi_listed = semi_listed;
        spec.category = parse_category(category);
        spec.page_id = name;
        Fixture fx = generate_fixture(spec);

        fs::path html_path = fs::path(out_dir) / (std::string(name) + ".html");
        fs::path truth_path = fs::path(out_dir) / (std::string(name) + ".truth");
        std::ofstream html(html_path, std::ios::binary);
        if (!html) throw Error("cannot write " + html_path.string());
        html << fx.html;
        save_dataset(truth_path, fx.truth);
        std::cout << json{{"page", name},
                          {"html", html_path.string()},
                          {"truth", truth_path.string()},
                          {"images", fx.truth.size()}}
                  << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Web image segment and context extraction toolkit"};
    app.require_subcommand(1);

    CommonOpts seg_opts;
    std::vector<std::string> seg_inputs;
    CLI::App* seg = app.add_subcommand("segment", "detect image segments in pages");
    add_common(seg, seg_opts, "structured-records");
    seg->add_option("inputs", seg_inputs, "HTML files or directories")->required();

    CommonOpts ext_opts;
    std::vector<std::string> ext_inputs;
    CLI::App* ext = app.add_subcommand("extract", "extract contextual information");
    add_common(ext, ext_opts, "structured-records");
    ext->add_option("inputs", ext_inputs, "HTML files or directories")->required();

    CommonOpts eval_opts;
    std::vector<std::string> eval_inputs;
    std::string truth_path, predictions_path;
    CLI::App* eval_cmd = app.add_subcommand("eval", "score against a labeled dataset");
    add_common(eval_cmd, eval_opts, "human-readable");
    eval_cmd->add_option("--truth", truth_path, "truth dataset file or directory")
        ->required();
    eval_cmd->add_option("--predictions", predictions_path,
                         "external predictions file (default: run the pipeline)");
    eval_cmd->add_option("inputs", eval_inputs, "HTML files or directories");

    CommonOpts stats_opts;
    std::string counts_file, pearson_x, pearson_y, split_file;
    std::size_t stats_n = 0, stats_k = 0;
    double stats_p = 0, stats_alpha = 0.05;
    std::uint64_t stats_seed = 0;
    CLI::App* stats_cmd = app.add_subcommand("stats", "binomial location tests");
    add_common(stats_cmd, stats_opts, "human-readable");
    stats_cmd->add_option("--counts", counts_file,
                          "per-location relevant-count table (location<TAB>count)");
    stats_cmd->add_option("--n", stats_n, "total relevant items (default: sum)");
    stats_cmd->add_option("--k", stats_k, "candidate location count (default: rows)");
    stats_cmd->add_option("--p", stats_p, "hypothesized proportion override");
    stats_cmd->add_option("--alpha", stats_alpha, "significance level");
    stats_cmd->add_option("--pearson-x", pearson_x, "first observation vector file");
    stats_cmd->add_option("--pearson-y", pearson_y, "second observation vector file");
    stats_cmd->add_option("--split-half", split_file,
                          "label-per-line observations for split-half reliability");
    stats_cmd->add_option("--seed", stats_seed, "split-half rng seed");

    std::uint64_t gen_seed = 0;
    int gen_pages = 1, gen_unlisted = 0, gen_listed = 0, gen_semi = 0;
    std::string gen_category = "unknown", gen_out = ".", gen_prefix = "fix";
    CLI::App* gen = app.add_subcommand("gen-fixtures",
                                       "emit synthetic pages with ground truth");
    gen->add_option("--seed", gen_seed, "deterministic seed");
    gen->add_option("--pages", gen_pages, "number of pages");
    gen->add_option("--unlisted", gen_unlisted, "unlisted images per page");
    gen->add_option("--listed", gen_listed, "listed images per page");
    gen->add_option("--semi-listed", gen_semi, "semi-listed images per page");
    gen->add_option("--category", gen_category, "page category for ground truth");
    gen->add_option("--out", gen_out, "output directory");
    gen->add_option("--prefix", gen_prefix, "fixture file prefix");

    CLI11_PARSE(app, argc, argv);

    try {
        if (seg->parsed()) return run_segment(seg_opts, seg_inputs);
        if (ext->parsed()) return run_extract(ext_opts, ext_inputs);
        if (eval_cmd->parsed())
            return run_eval(eval_opts, truth_path, predictions_path, eval_inputs);
        if (stats_cmd->parsed()) {
            if (!pearson_x.empty() || !pearson_y.empty()) {
                std::vector<double> x = read_numbers(pearson_x);
                std::vector<double> y = read_numbers(pearson_y);
                std::printf("pearson r = %.4f\n", pearson(x, y));
                return 0;
            }
            if (!split_file.empty()) {
                std::ifstream in(split_file);
                if (!in) throw Error("cannot open " + split_file);
                std::vector<std::string> labels;
                std::string line;
                while (std::getline(in, line))
                    if (!trim(line).empty()) labels.emplace_back(trim(line));
                SplitHalfResult r = split_half_reliability(labels, stats_seed);
                std::printf("split-half r = %.4f (%s)\n", r.r,
                            r.acceptable ? "acceptable" : "below 0.70");
                return 0;
            }
            if (counts_file.empty())
                throw Error("stats needs --counts, --pearson-x/--pearson-y, or "
                            "--split-half");
            return run_stats_binomial(stats_opts, counts_file, stats_n, stats_p,
                                      stats_alpha, stats_k);
        }
        if (gen->parsed())
            return run_gen_fixtures(gen_seed, gen_pages, gen_unlisted, gen_listed,
                                    gen_semi, gen_category, gen_out, gen_prefix);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
