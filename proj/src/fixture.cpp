#include "imgctx/fixture.hpp"

#include <algorithm>
#include <random>

#include "imgctx/text_util.hpp"

namespace imgctx {
namespace {

const char* kWords[] = {
    "amber",   "anchor", "basil",   "birch",  "bridge", "candle", "canyon",
    "cedar",   "cobalt", "copper",  "coral",  "crimson", "falcon", "fern",
    "garnet",  "glacier", "harbor", "hazel",  "heron",  "indigo", "iris",
    "jade",    "juniper", "lantern", "linden", "maple",  "marble", "meadow",
    "moss",    "nutmeg", "olive",   "onyx",   "orchid", "pebble", "pine",
    "quartz",  "raven",  "saffron", "sage",   "slate",  "thistle", "timber",
    "topaz",   "walnut", "willow",
};

class Generator {
public:
    explicit Generator(const FixtureSpec& spec)
        : spec_(spec), rng_(spec.seed),
          table_(default_significant_locations()),
          set_(table_.for_category(spec.category)) {}

    Fixture run() {
        int listed = spec_.listed == 1 ? 2 : spec_.listed;
        int semi = spec_.semi_listed == 1 ? 2 : spec_.semi_listed;

        // Plan the block sequence first; images are numbered while the HTML
        // is emitted so keys follow document order.
        enum class Kind { Listed, Semi, Unlisted };
        std::vector<std::pair<Kind, int>> plan;
        while (listed > 0) {
            int rows = listed <= 4 ? listed : 2 + int(rng_() % 3);
            if (listed - rows == 1) ++rows;
            plan.emplace_back(Kind::Listed, rows);
            listed -= rows;
        }
        while (semi > 0) {
            int reps = semi <= 3 ? semi : 2 + int(rng_() % 2);
            if (semi - reps == 1) ++reps;
            plan.emplace_back(Kind::Semi, reps);
            semi -= reps;
        }
        for (int i = 0; i < spec_.unlisted; ++i) plan.emplace_back(Kind::Unlisted, 1);
        for (std::size_t i = plan.size(); i > 1; --i)
            std::swap(plan[i - 1], plan[rng_() % i]);

        std::string body;
        for (const auto& [kind, count] : plan) {
            switch (kind) {
                case Kind::Listed: body += listed_table(count); break;
                case Kind::Semi: body += semi_listed_container(count); break;
                case Kind::Unlisted: body += unlisted_block(); break;
            }
            body += "\n";
            append_noise(body);
        }

        Fixture fx;
        fx.html = "<html><head><title>Fixture " + spec_.page_id +
                  "</title></head><body>\n" + body + "</body></html>\n";
        fx.truth = std::move(truth_);
        return fx;
    }

private:
    const FixtureSpec& spec_;
    std::mt19937_64 rng_;
    SignificantLocationTable table_;
    const std::set<LocationDescriptor>& set_;
    std::vector<LabeledSegment> truth_;
    int image_index_ = 0;

    std::string word() { return kWords[rng_() % std::size(kWords)]; }

    std::string caption() {
        int span = std::max(1, spec_.max_text_words - spec_.min_text_words + 1);
        int n = spec_.min_text_words + int(rng_() % span);
        std::string out = word();
        for (int i = 1; i < n; ++i) out += " " + word();
        return out;
    }

    std::string dim() { return std::to_string(80 + int(rng_() % 120)); }

    bool in_set(const LocationDescriptor& loc) const { return set_.count(loc) > 0; }

    void append_noise(std::string& body) {
        switch (rng_() % 4) {
            case 0:
                body += "<img src=\"spacer.gif\" width=\"1\" height=\"1\">\n";
                ++image_index_;  // too small to segment, but still holds a key slot
                break;
            case 1:
                body += "<script>var page=" + std::to_string(rng_() % 100) +
                        ";</script>\n";
                break;
            case 2:
                body += "<!-- block boundary -->\n";
                break;
            default:
                break;
        }
    }

    // One image's vocabulary: alt/src word pair, anchor/href word pair, and
    // the document-order key matching eval's image_key convention.
    struct Img {
        std::string a1, a2, b1, b2;
        std::string src, key, alt, anchor;
        std::string img_tag;
    };

    Img next_image() {
        Img im;
        im.a1 = word();
        im.a2 = word();
        im.b1 = word();
        im.b2 = word();
        im.src = "img/" + im.a1 + "_" + im.a2 + "_" + std::to_string(image_index_) +
                 ".jpg";
        im.key = std::to_string(image_index_) + ":" + im.src;
        im.alt = im.a1 + " " + im.a2;
        im.anchor = im.b1 + " " + im.b2;
        im.img_tag = "<img src=\"" + im.src + "\" alt=\"" + im.alt + "\" width=\"" +
                     dim() + "\" height=\"" + dim() + "\">";
        ++image_index_;
        return im;
    }

    void add_truth(const Img& im, std::vector<std::string> text) {
        LabeledSegment seg;
        seg.page_id = spec_.page_id;
        seg.image_key = im.key;
        seg.category = spec_.category;
        seg.text = std::move(text);
        truth_.push_back(std::move(seg));
    }

    // Expected strings the image's attributes contribute under the category's
    // location set; href_word is the fixed path word of the link template.
    std::vector<std::string> attr_truth(const Img& im, const std::string& href_word,
                                        bool with_link) {
        std::vector<std::string> text;
        if (in_set(LocationDescriptor::attr("IMG", "ALT"))) text.push_back(im.alt);
        if (in_set(LocationDescriptor::attr("IMG", "SRC"))) {
            text.push_back("img");
            text.push_back(im.a1);
            text.push_back(im.a2);
        }
        if (with_link && in_set(LocationDescriptor::attr("A", "HREF"))) {
            text.push_back(im.b1);
            text.push_back(im.b2);
            text.push_back(href_word);
        }
        return text;
    }

    // <table> of structurally identical rows; the algorithm takes each row as
    // a listed segment.
    std::string listed_table(int rows) {
        bool with_title =
            in_set(LocationDescriptor::attr("A", "TITLE")) || rng_() % 3 == 0;
        std::string html = "<table class=\"grid\">\n";
        for (int r = 0; r < rows; ++r) {
            Img im = next_image();
            std::string idx = std::to_string(image_index_ - 1);
            std::string href = "/" + im.b1 + "-" + im.b2 + "-item-" + idx + ".html";
            std::string cap = caption();
            std::string title_attr, title_text;
            if (with_title) {
                title_text = word() + " " + word();
                title_attr = " title=\"" + title_text + "\"";
            }
            html += "<tr><td>" + im.img_tag + "</td><td><a href=\"" + href + "\"" +
                    title_attr + ">" + im.anchor + "</a> " + cap + "</td></tr>\n";

            std::vector<std::string> text = attr_truth(im, "item", true);
            if (with_title && in_set(LocationDescriptor::attr("A", "TITLE")))
                text.push_back(title_text);
            if (in_set(LocationDescriptor::enclosed("A"))) text.push_back(im.anchor);
            if (in_set(LocationDescriptor::enclosed("TD"))) text.push_back(cap);
            add_truth(im, std::move(text));
        }
        html += "</table>";
        return html;
    }

    // Flat repetition of <p><a><table><br> runs inside one cell; the
    // algorithm slices the cell per repetition.
    std::string semi_listed_container(int reps) {
        std::string html = "<table class=\"wrap\"><tr><td class=\"list\">";
        for (int r = 0; r < reps; ++r) {
            Img im = next_image();
            std::string idx = std::to_string(image_index_ - 1);
            std::string href = "/" + im.b1 + "-" + im.b2 + "-view-" + idx + ".html";
            std::string cap = caption();
            html += "<p>" + cap + "</p><a href=\"" + href + "\">" + im.anchor +
                    "</a><table><tr><td>" + im.img_tag + "</td></tr></table><br>";

            std::vector<std::string> text = attr_truth(im, "view", true);
            if (in_set(LocationDescriptor::enclosed("A"))) text.push_back(im.anchor);
            if (in_set(LocationDescriptor::enclosed("P"))) text.push_back(cap);
            add_truth(im, std::move(text));
        }
        html += "</td></tr></table>";
        return html;
    }

    // Lone image whose second text-count change happens inside the wrapper,
    // so the bigger region stays generator-controlled.
    std::string unlisted_block() {
        Img im = next_image();
        std::string cap = caption();
        std::string extra = caption();
        std::string html = "<div class=\"entry\"><div class=\"art\"><div>" +
                           im.img_tag + "</div><p>" + cap + "</p></div><p>" + extra +
                           "</p></div>";

        std::vector<std::string> text = attr_truth(im, "", false);
        if (in_set(LocationDescriptor::enclosed("P"))) {
            text.push_back(cap);
            text.push_back(extra);
        }
        add_truth(im, std::move(text));
        return html;
    }
};

}  // namespace

Fixture generate_fixture(const FixtureSpec& spec) {
    return Generator(spec).run();
}

}  // namespace imgctx
