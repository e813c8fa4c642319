#pragma once

// Test-side JSON tree, random generator and writer. Deliberately shares no
// code with the library so it can serve as an independent reference.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace testsupport {

struct Node {
    enum class Kind { Null, Bool, Number, String, Array, Object };
    Kind kind = Kind::Null;
    bool flag = false;
    std::string text;  // string payload (UTF-8) or number lexeme
    std::vector<Node> items;
    std::vector<std::pair<std::string, Node>> members;

    static Node null() { return {}; }
    static Node boolean(bool b) {
        Node n;
        n.kind = Kind::Bool;
        n.flag = b;
        return n;
    }
    static Node number(std::string lexeme) {
        Node n;
        n.kind = Kind::Number;
        n.text = std::move(lexeme);
        return n;
    }
    static Node string(std::string s) {
        Node n;
        n.kind = Kind::String;
        n.text = std::move(s);
        return n;
    }
    static Node array(std::vector<Node> items = {}) {
        Node n;
        n.kind = Kind::Array;
        n.items = std::move(items);
        return n;
    }
    static Node object(std::vector<std::pair<std::string, Node>> members = {}) {
        Node n;
        n.kind = Kind::Object;
        n.members = std::move(members);
        return n;
    }
    bool is_container() const { return kind == Kind::Array || kind == Kind::Object; }
};

/// Thin wrapper so every draw goes through the raw 64-bit stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
    bool chance(unsigned percent) { return below(100) < percent; }
    template <typename T>
    const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

private:
    std::mt19937_64 engine_;
};

inline const std::vector<std::string>& word_pool() {
    static const std::vector<std::string> words{
        "pub", "coffee shop", "Giraffe", "The Rice Boat", "riverside", "no", "yes", "1887", "B.152",
        "caf\xC3\xA9", "\xE4\xB8\xAD\xE6\x96\x87", "na\xC3\xAFve r\xC3\xA9sum\xC3\xA9", "\xF0\x9F\x98\x80 ok",
        "def run():", "import os", "https://example.org/a?b=1", "x => x + 1", "<b>bold</b>", "{\"k\": 1}",
        "Traceback (most recent call last):", "tab\there", "line\nbreak", "quote \" and \\ slash", "",
        "   padded   ", "a-b_c.d", "100%", "$4.99", "\x01\x1f ctl",
    };
    return words;
}

inline const std::vector<std::string>& key_pool() {
    static const std::vector<std::string> keys{
        "name", "eatType", "near", "area", "id", "items", "year", "title", "a", "b", "c", "x.y", "with space",
        "k\xC3\xA9y", "", "0", "tags", "meta", "[0]", "nested",
    };
    return keys;
}

inline std::string random_number_lexeme(Rng& rng) {
    std::string s;
    if (rng.chance(25)) s.push_back('-');
    if (rng.chance(20)) {
        s.push_back('0');
    } else {
        s.push_back(static_cast<char>('1' + rng.below(9)));
        const std::size_t extra = rng.below(7);
        for (std::size_t i = 0; i < extra; ++i) s.push_back(static_cast<char>('0' + rng.below(10)));
    }
    if (rng.chance(30)) {
        s.push_back('.');
        const std::size_t frac = 1 + rng.below(4);
        for (std::size_t i = 0; i < frac; ++i) s.push_back(static_cast<char>('0' + rng.below(10)));
    }
    if (rng.chance(10)) {
        s.push_back(rng.chance(50) ? 'e' : 'E');
        if (rng.chance(50)) s.push_back(rng.chance(50) ? '-' : '+');
        s.push_back(static_cast<char>('1' + rng.below(3)));
    }
    return s;
}

inline std::string random_text(Rng& rng) {
    if (rng.chance(60)) return rng.pick(word_pool());
    std::string s;
    const std::size_t words = rng.below(40);
    for (std::size_t i = 0; i < words; ++i) {
        if (i > 0) s.push_back(' ');
        s += rng.pick(word_pool());
    }
    return s;
}

struct GenOptions {
    std::size_t max_depth = 4;
    std::size_t max_width = 5;
};

/// Random document. Object keys are unique within each object.
inline Node random_node(Rng& rng, const GenOptions& opts = {}, std::size_t depth = 0) {
    const bool allow_container = depth < opts.max_depth;
    const std::size_t kind = rng.below(allow_container ? 8 : 4);
    switch (kind) {
        case 0: return rng.chance(50) ? Node::null() : Node::boolean(rng.chance(50));
        case 1: return Node::number(random_number_lexeme(rng));
        case 2:
        case 3: return Node::string(random_text(rng));
        case 4:
        case 5: {
            std::vector<Node> items;
            const std::size_t n = rng.below(opts.max_width + 1);
            // Half of the arrays are homogeneous in kind.
            const bool same = rng.chance(50);
            Node first = random_node(rng, opts, depth + 1);
            for (std::size_t i = 0; i < n; ++i) {
                if (same && i > 0 && !first.is_container()) {
                    Node next = random_node(rng, opts, depth + 1);
                    items.push_back(next.kind == first.kind ? next : first);
                } else {
                    items.push_back(i == 0 ? first : random_node(rng, opts, depth + 1));
                }
            }
            return Node::array(std::move(items));
        }
        default: {
            std::vector<std::pair<std::string, Node>> members;
            const std::size_t n = rng.below(opts.max_width + 1);
            for (std::size_t i = 0; i < n; ++i) {
                std::string key = rng.pick(key_pool());
                bool taken = false;
                for (const auto& [k, v] : members) taken = taken || k == key;
                if (taken) continue;
                members.emplace_back(std::move(key), random_node(rng, opts, depth + 1));
            }
            return Node::object(std::move(members));
        }
    }
}

/// Object-rooted document, as used for gold outputs.
inline Node random_document(Rng& rng, const GenOptions& opts = {}) {
    Node n = random_node(rng, opts, 1);
    if (n.kind == Node::Kind::Object) return n;
    return Node::object({{"value", std::move(n)}, {rng.pick(key_pool()) + "_", Node::string(random_text(rng))}});
}

// ---------------------------------------------------------------------------
// Writer
// ---------------------------------------------------------------------------

inline void append_quoted(std::string& out, const std::string& s) {
    static const char* hex = "0123456789abcdef";
    out += '"';
    for (unsigned char c : s) {
        if (c == '"') out += "\\\"";
        else if (c == '\\') out += "\\\\";
        else if (c == '\n') out += "\\n";
        else if (c == '\t') out += "\\t";
        else if (c == '\r') out += "\\r";
        else if (c == '\b') out += "\\b";
        else if (c == '\f') out += "\\f";
        else if (c < 0x20) {
            out += "\\u00";
            out += hex[c >> 4];
            out += hex[c & 15];
        } else {
            out += static_cast<char>(c);
        }
    }
    out += '"';
}

/// `item_sep` goes between elements, `key_sep` after keys.
inline void write_node(std::string& out, const Node& n, const char* item_sep, const char* key_sep) {
    switch (n.kind) {
        case Node::Kind::Null: out += "null"; return;
        case Node::Kind::Bool: out += n.flag ? "true" : "false"; return;
        case Node::Kind::Number: out += n.text; return;
        case Node::Kind::String: append_quoted(out, n.text); return;
        case Node::Kind::Array:
            out += '[';
            for (std::size_t i = 0; i < n.items.size(); ++i) {
                if (i) out += item_sep;
                write_node(out, n.items[i], item_sep, key_sep);
            }
            out += ']';
            return;
        case Node::Kind::Object:
            out += '{';
            for (std::size_t i = 0; i < n.members.size(); ++i) {
                if (i) out += item_sep;
                append_quoted(out, n.members[i].first);
                out += key_sep;
                write_node(out, n.members[i].second, item_sep, key_sep);
            }
            out += '}';
            return;
    }
}

inline std::string compact(const Node& n) {
    std::string s;
    write_node(s, n, ",", ":");
    return s;
}

inline std::string spaced(const Node& n) {
    std::string s;
    write_node(s, n, ", ", ": ");
    return s;
}

}  // namespace testsupport
