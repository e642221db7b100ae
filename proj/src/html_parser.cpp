#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>

#include "imgctx/dom.hpp"
#include "imgctx/errors.hpp"
#include "imgctx/text_util.hpp"

namespace imgctx {
namespace {

// ---------------------------------------------------------------------------
// Decoding
// ---------------------------------------------------------------------------

std::string canonical_encoding(std::string_view name) {
    std::string out;
    for (char c : name) {
        if (c == '-' || c == '_' || c == ' ') continue;
        out.push_back(c >= 'A' && c <= 'Z' ? char(c + 32) : c);
    }
    return out;
}

bool valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char c = s[i];
        std::size_t extra;
        if (c < 0x80) {
            i += 1;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            if (c < 0xC2) return false;  // overlong
            extra = 1;
        } else if ((c & 0xF0) == 0xE0) {
            extra = 2;
        } else if ((c & 0xF8) == 0xF0) {
            if (c > 0xF4) return false;
            extra = 3;
        } else {
            return false;
        }
        if (i + extra >= s.size()) return false;
        for (std::size_t k = 1; k <= extra; ++k)
            if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
        i += extra + 1;
    }
    return true;
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
    if (cp < 0x80) {
        out.push_back(char(cp));
    } else if (cp < 0x800) {
        out.push_back(char(0xC0 | (cp >> 6)));
        out.push_back(char(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(char(0xE0 | (cp >> 12)));
        out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(char(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(char(0xF0 | (cp >> 18)));
        out.push_back(char(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(char(0x80 | (cp & 0x3F)));
    }
}

std::string decode_bytes(std::string_view bytes, std::string_view encoding) {
    const std::string enc = canonical_encoding(encoding.empty() ? "utf8" : encoding);
    if (enc == "utf8") {
        if (bytes.size() >= 3 && static_cast<unsigned char>(bytes[0]) == 0xEF &&
            static_cast<unsigned char>(bytes[1]) == 0xBB &&
            static_cast<unsigned char>(bytes[2]) == 0xBF)
            bytes.remove_prefix(3);
        if (!valid_utf8(bytes))
            throw DecodeError("input is not valid UTF-8 (pass an encoding hint)");
        return std::string(bytes);
    }
    if (enc == "latin1" || enc == "iso88591") {
        std::string out;
        out.reserve(bytes.size());
        for (unsigned char c : bytes) append_utf8(out, c);
        return out;
    }
    if (enc == "ascii" || enc == "usascii") {
        for (unsigned char c : bytes)
            if (c >= 0x80) throw DecodeError("byte outside US-ASCII range");
        return std::string(bytes);
    }
    throw DecodeError("unsupported encoding: " + std::string(encoding));
}

// ---------------------------------------------------------------------------
// Entities
// ---------------------------------------------------------------------------

const std::unordered_map<std::string, std::uint32_t>& named_entities() {
    static const std::unordered_map<std::string, std::uint32_t> table = {
        {"amp", '&'},    {"lt", '<'},      {"gt", '>'},     {"quot", '"'},
        {"apos", '\''},  {"nbsp", ' '},    {"copy", 0xA9},  {"reg", 0xAE},
        {"trade", 0x2122}, {"mdash", 0x2014}, {"ndash", 0x2013},
        {"hellip", 0x2026}, {"laquo", 0xAB}, {"raquo", 0xBB},
        {"lsquo", 0x2018}, {"rsquo", 0x2019}, {"ldquo", 0x201C},
        {"rdquo", 0x201D}, {"middot", 0xB7}, {"bull", 0x2022},
    };
    return table;
}

std::string decode_entities(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out.push_back(s[i++]);
            continue;
        }
        std::size_t semi = s.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 12) {
            out.push_back(s[i++]);
            continue;
        }
        std::string_view name = s.substr(i + 1, semi - i - 1);
        if (!name.empty() && name[0] == '#') {
            std::uint32_t cp = 0;
            bool ok = name.size() > 1;
            if (name.size() > 2 && (name[1] == 'x' || name[1] == 'X')) {
                for (std::size_t k = 2; k < name.size() && ok; ++k) {
                    char c = name[k];
                    int d = (c >= '0' && c <= '9')   ? c - '0'
                            : (c >= 'a' && c <= 'f') ? c - 'a' + 10
                            : (c >= 'A' && c <= 'F') ? c - 'A' + 10
                                                     : -1;
                    if (d < 0 || cp > 0x10FFFF) ok = false;
                    else cp = cp * 16 + d;
                }
                ok = ok && name.size() > 2;
            } else {
                for (std::size_t k = 1; k < name.size() && ok; ++k) {
                    if (name[k] < '0' || name[k] > '9' || cp > 0x10FFFF) ok = false;
                    else cp = cp * 10 + (name[k] - '0');
                }
            }
            if (ok) {
                append_utf8(out, cp);
                i = semi + 1;
                continue;
            }
        } else {
            auto it = named_entities().find(std::string(name));
            if (it != named_entities().end()) {
                append_utf8(out, it->second);
                i = semi + 1;
                continue;
            }
        }
        out.push_back(s[i++]);  // unknown entity kept literally
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tag tables
// ---------------------------------------------------------------------------

const std::unordered_set<std::string>& void_elements() {
    static const std::unordered_set<std::string> set = {
        "AREA", "BASE", "BR",    "COL",   "EMBED",  "HR",    "IMG",
        "INPUT", "LINK", "META", "PARAM", "SOURCE", "TRACK", "WBR",
    };
    return set;
}

bool is_rawtext(const std::string& tag) { return tag == "SCRIPT" || tag == "STYLE"; }

// True when opening `incoming` implicitly closes an open `top`.
bool autocloses(const std::string& incoming, const std::string& top) {
    static const std::unordered_set<std::string> p_closers = {
        "P",  "DIV", "TABLE", "UL", "OL", "LI",    "H1", "H2",  "H3",
        "H4", "H5",  "H6",    "BLOCKQUOTE", "PRE", "FORM", "HR", "DT",
        "DD", "SECTION", "ARTICLE", "HEADER", "FOOTER", "NAV", "ASIDE",
    };
    if (top == "P") return p_closers.count(incoming) > 0;
    if (top == "LI") return incoming == "LI";
    if (top == "DT" || top == "DD") return incoming == "DT" || incoming == "DD";
    if (top == "TD" || top == "TH")
        return incoming == "TD" || incoming == "TH" || incoming == "TR" ||
               incoming == "TBODY" || incoming == "THEAD" || incoming == "TFOOT";
    if (top == "TR")
        return incoming == "TR" || incoming == "TBODY" || incoming == "THEAD" ||
               incoming == "TFOOT";
    if (top == "TBODY" || top == "THEAD" || top == "TFOOT")
        return incoming == "TBODY" || incoming == "THEAD" || incoming == "TFOOT";
    if (top == "OPTION") return incoming == "OPTION" || incoming == "OPTGROUP";
    return false;
}

bool is_name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '-' || c == '_' || c == ':';
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
public:
    explicit Parser(std::string text) : src_(std::move(text)) {}

    DomTree run() {
        while (pos_ < src_.size()) step();
        flush_text();
        if (!root_) throw EmptyDocumentError("document contains no content");
        tree_.validate();
        return std::move(tree_);
    }

private:
    DomTree tree_;
    std::string src_;
    std::size_t pos_ = 0;
    std::string pending_text_;
    std::optional<NodeId> root_;
    std::vector<NodeId> stack_;  // open elements, root included

    NodeId ensure_root() {
        if (!root_) {
            root_ = tree_.add_element("HTML", std::nullopt);
            stack_.push_back(*root_);
        }
        return *root_;
    }

    NodeId insertion_parent() {
        ensure_root();
        return stack_.empty() ? *root_ : stack_.back();
    }

    void flush_text() {
        if (pending_text_.empty()) return;
        std::string text = decode_entities(pending_text_);
        pending_text_.clear();
        if (text.empty()) return;
        // Whitespace before any markup would otherwise fabricate a root.
        if (!root_ && trim(text).empty()) return;
        tree_.add_text(std::move(text), insertion_parent());
    }

    void step() {
        std::size_t lt = src_.find('<', pos_);
        if (lt == std::string::npos) {
            pending_text_.append(src_, pos_, src_.size() - pos_);
            pos_ = src_.size();
            return;
        }
        pending_text_.append(src_, pos_, lt - pos_);
        pos_ = lt;

        if (src_.compare(pos_, 4, "<!--") == 0) {
            handle_comment();
        } else if (pos_ + 1 < src_.size() && (src_[pos_ + 1] == '!' || src_[pos_ + 1] == '?')) {
            skip_markup_decl();
        } else if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
            handle_close_tag();
        } else if (pos_ + 1 < src_.size() && is_name_char(src_[pos_ + 1]) &&
                   !(src_[pos_ + 1] >= '0' && src_[pos_ + 1] <= '9')) {
            handle_open_tag();
        } else {
            pending_text_.push_back('<');  // stray '<' is content
            ++pos_;
        }
    }

    void handle_comment() {
        flush_text();
        std::size_t end = src_.find("-->", pos_ + 4);
        std::string content = end == std::string::npos
                                  ? src_.substr(pos_ + 4)
                                  : src_.substr(pos_ + 4, end - pos_ - 4);
        pos_ = end == std::string::npos ? src_.size() : end + 3;
        tree_.add_comment(std::move(content), insertion_parent());
    }

    void skip_markup_decl() {
        std::size_t end = src_.find('>', pos_);
        pos_ = end == std::string::npos ? src_.size() : end + 1;
    }

    void handle_close_tag() {
        flush_text();
        std::size_t i = pos_ + 2;
        std::string name;
        while (i < src_.size() && is_name_char(src_[i])) name.push_back(src_[i++]);
        std::size_t end = src_.find('>', i);
        pos_ = end == std::string::npos ? src_.size() : end + 1;
        if (name.empty()) return;
        name = to_upper_ascii(name);
        // Pop through the matching open element; unmatched close tags are ignored.
        for (std::size_t k = stack_.size(); k-- > 0;) {
            if (tree_.node(stack_[k]).tag == name) {
                stack_.resize(k);
                break;
            }
        }
    }

    void handle_open_tag() {
        flush_text();
        std::size_t i = pos_ + 1;
        std::string name;
        while (i < src_.size() && is_name_char(src_[i])) name.push_back(src_[i++]);
        name = to_upper_ascii(name);

        std::vector<std::pair<std::string, std::string>> attrs;
        bool self_closing = false;
        while (i < src_.size()) {
            while (i < src_.size() && is_space(src_[i])) ++i;
            if (i >= src_.size()) break;
            if (src_[i] == '>') {
                ++i;
                break;
            }
            if (src_[i] == '/') {
                ++i;
                if (i < src_.size() && src_[i] == '>') {
                    self_closing = true;
                    ++i;
                    break;
                }
                continue;
            }
            std::string attr_name;
            while (i < src_.size() && src_[i] != '=' && src_[i] != '>' &&
                   src_[i] != '/' && !is_space(src_[i]))
                attr_name.push_back(src_[i++]);
            while (i < src_.size() && is_space(src_[i])) ++i;
            std::string value;
            if (i < src_.size() && src_[i] == '=') {
                ++i;
                while (i < src_.size() && is_space(src_[i])) ++i;
                if (i < src_.size() && (src_[i] == '"' || src_[i] == '\'')) {
                    char q = src_[i++];
                    std::size_t close = src_.find(q, i);
                    if (close == std::string::npos) {
                        value = src_.substr(i);
                        i = src_.size();
                    } else {
                        value = src_.substr(i, close - i);
                        i = close + 1;
                    }
                } else {
                    while (i < src_.size() && src_[i] != '>' && !is_space(src_[i]))
                        value.push_back(src_[i++]);
                }
            }
            if (!attr_name.empty()) {
                std::string lower = to_lower_ascii(attr_name);
                bool dup = false;
                for (const auto& [n, v] : attrs) dup = dup || n == lower;
                if (!dup) attrs.emplace_back(std::move(lower), decode_entities(value));
            }
        }
        pos_ = i;
        insert_element(name, std::move(attrs), self_closing);
    }

    void insert_element(const std::string& tag,
                        std::vector<std::pair<std::string, std::string>> attrs,
                        bool self_closing) {
        if (tag == "HTML") {
            NodeId root = ensure_root();
            for (auto& [n, v] : attrs)
                if (!tree_.attr(root, n)) tree_.set_attr(root, n, v);
            return;
        }
        while (!stack_.empty() && stack_.back() != root_.value_or(NodeId(0)) &&
               autocloses(tag, tree_.node(stack_.back()).tag))
            stack_.pop_back();

        NodeId parent = insertion_parent();
        NodeId id = tree_.add_element(tag, parent);
        for (auto& [n, v] : attrs) tree_.set_attr(id, std::move(n), std::move(v));

        if (void_elements().count(tag) || self_closing) return;
        if (is_rawtext(tag)) {
            consume_rawtext(id, tag);
            return;
        }
        // Depth cap against pathological nesting; deeper opens become leaves.
        if (stack_.size() < 512) stack_.push_back(id);
    }

    void consume_rawtext(NodeId element, const std::string& tag) {
        std::string needle = "</" + to_lower_ascii(tag);
        std::string lower;
        lower.reserve(src_.size() - pos_);
        for (std::size_t k = pos_; k < src_.size(); ++k) {
            char c = src_[k];
            lower.push_back(c >= 'A' && c <= 'Z' ? char(c + 32) : c);
        }
        std::size_t found = lower.find(needle);
        std::string content = found == std::string::npos
                                  ? src_.substr(pos_)
                                  : src_.substr(pos_, found);
        if (!content.empty()) tree_.add_text(std::move(content), element);
        if (found == std::string::npos) {
            pos_ = src_.size();
        } else {
            std::size_t end = src_.find('>', pos_ + found);
            pos_ = end == std::string::npos ? src_.size() : end + 1;
        }
    }
};

void serialize_node(const DomTree& tree, NodeId id, std::string& out) {
    const DomNode& n = tree.node(id);
    if (n.is_text()) {
        for (char c : n.text) {
            if (c == '&') out += "&amp;";
            else if (c == '<') out += "&lt;";
            else if (c == '>') out += "&gt;";
            else out.push_back(c);
        }
        return;
    }
    if (n.is_comment()) {
        out += "<!--" + n.text + "-->";
        return;
    }
    std::string tag = to_lower_ascii(n.tag);
    out += "<" + tag;
    for (const auto& [name, value] : n.attributes) {
        out += " " + name + "=\"";
        for (char c : value) {
            if (c == '&') out += "&amp;";
            else if (c == '"') out += "&quot;";
            else if (c == '<') out += "&lt;";
            else out.push_back(c);
        }
        out += "\"";
    }
    out += ">";
    if (void_elements().count(n.tag)) return;
    if (is_rawtext(n.tag)) {
        for (NodeId c : n.children) out += tree.node(c).text;  // raw content
    } else {
        for (NodeId c : n.children) serialize_node(tree, c, out);
    }
    out += "</" + tag + ">";
}

}  // namespace

DomTree parse_html(std::string_view bytes, std::string_view encoding) {
    std::string text = decode_bytes(bytes, encoding);
    if (trim(text).empty()) throw EmptyDocumentError("empty document");
    return Parser(std::move(text)).run();
}

std::string serialize_html(const DomTree& tree) {
    std::string out;
    if (!tree.empty()) serialize_node(tree, tree.root(), out);
    return out;
}

}  // namespace imgctx
