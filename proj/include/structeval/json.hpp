#pragma once

// JSON value model used by every metric: ordered objects, numbers that keep
// their source lexeme, a strict parser that refuses duplicate keys, and the
// reference serializer whose byte length defines the size metric.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "structeval/errors.hpp"

namespace structeval {

// ---------------------------------------------------------------------------
// UTF-8 helpers
// ---------------------------------------------------------------------------

namespace utf8 {

/// Decodes one scalar value starting at `pos`. Returns the code point and
/// advances `pos`, or std::nullopt (pos untouched) on an invalid sequence.
inline std::optional<char32_t> decode(std::string_view s, std::size_t& pos) {
    const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
    const unsigned char b0 = byte(pos);
    if (b0 < 0x80) {
        ++pos;
        return b0;
    }
    std::size_t len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2, cp = b0 & 0x1F, min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3, cp = b0 & 0x0F, min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4, cp = b0 & 0x07, min = 0x10000;
    } else {
        return std::nullopt;
    }
    if (pos + len > s.size()) return std::nullopt;
    for (std::size_t i = 1; i < len; ++i) {
        const unsigned char b = byte(pos + i);
        if ((b & 0xC0) != 0x80) return std::nullopt;
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return std::nullopt;
    pos += len;
    return cp;
}

inline void append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

/// Scalar values of a string. Invalid bytes decode as U+FFFD one byte at a time.
inline std::u32string code_points(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t pos = 0;
    while (pos < s.size()) {
        if (auto cp = decode(s, pos)) {
            out.push_back(*cp);
        } else {
            out.push_back(U'�');
            ++pos;
        }
    }
    return out;
}

}  // namespace utf8

// ---------------------------------------------------------------------------
// Decimal
// ---------------------------------------------------------------------------

/// Exact decimal value `(-1)^negative * digits * 10^exponent`, normalized so
/// that `digits` has no leading or trailing zeros. Zero is the empty digit
/// string with exponent 0 and a positive sign.
struct Decimal {
    bool negative = false;
    std::string digits;
    std::int64_t exponent = 0;

    bool is_zero() const noexcept { return digits.empty(); }
    bool is_integer() const noexcept { return is_zero() || exponent >= 0; }

    friend bool operator==(const Decimal&, const Decimal&) = default;

    /// Parses a lexeme that already satisfies the JSON number grammar.
    static Decimal from_lexeme(std::string_view lexeme) {
        Decimal d;
        std::size_t i = 0;
        if (i < lexeme.size() && lexeme[i] == '-') {
            d.negative = true;
            ++i;
        }
        std::string mantissa;
        std::int64_t frac_len = 0;
        bool in_frac = false;
        for (; i < lexeme.size(); ++i) {
            const char c = lexeme[i];
            if (c == '.') {
                in_frac = true;
            } else if (c >= '0' && c <= '9') {
                mantissa.push_back(c);
                if (in_frac) ++frac_len;
            } else {
                break;
            }
        }
        std::int64_t exp = 0;
        if (i < lexeme.size() && (lexeme[i] == 'e' || lexeme[i] == 'E')) {
            ++i;
            bool exp_negative = false;
            if (i < lexeme.size() && (lexeme[i] == '+' || lexeme[i] == '-')) {
                exp_negative = lexeme[i] == '-';
                ++i;
            }
            // Saturate; anything past 10^17 is far outside what can be printed anyway.
            constexpr std::int64_t kCap = 100'000'000'000'000'000;
            for (; i < lexeme.size(); ++i) {
                exp = std::min<std::int64_t>(kCap, exp * 10 + (lexeme[i] - '0'));
            }
            if (exp_negative) exp = -exp;
        }
        const auto first = mantissa.find_first_not_of('0');
        if (first == std::string::npos) return Decimal{};
        const auto last = mantissa.find_last_not_of('0');
        d.digits = mantissa.substr(first, last - first + 1);
        d.exponent = exp - frac_len + static_cast<std::int64_t>(mantissa.size() - 1 - last);
        return d;
    }

    /// Canonical text: plain notation for moderate magnitudes, otherwise
    /// `d.ddde±x`. Equal values always render identically.
    std::string to_string() const {
        if (is_zero()) return "0";
        std::string out = negative ? "-" : "";
        const auto n = static_cast<std::int64_t>(digits.size());
        const std::int64_t point = n + exponent;  // position of the decimal point
        if (exponent >= 0 && point <= 21) {
            out += digits;
            out.append(static_cast<std::size_t>(exponent), '0');
        } else if (exponent < 0 && point > 0) {
            out += digits.substr(0, static_cast<std::size_t>(point));
            out += '.';
            out += digits.substr(static_cast<std::size_t>(point));
        } else if (exponent < 0 && point > -6) {
            out += "0.";
            out.append(static_cast<std::size_t>(-point), '0');
            out += digits;
        } else {
            out += digits[0];
            if (n > 1) {
                out += '.';
                out += digits.substr(1);
            }
            out += point - 1 < 0 ? "e" : "e+";
            out += std::to_string(point - 1);
        }
        return out;
    }
};

// ---------------------------------------------------------------------------
// JsonValue
// ---------------------------------------------------------------------------

enum class JsonType { Null, Bool, Number, String, Array, Object };

inline std::string_view to_string(JsonType t) {
    switch (t) {
        case JsonType::Null: return "null";
        case JsonType::Bool: return "boolean";
        case JsonType::Number: return "number";
        case JsonType::String: return "string";
        case JsonType::Array: return "array";
        case JsonType::Object: return "object";
    }
    return "unknown";
}

/// A JSON number: the exact decimal value plus the lexeme it was written with.
struct JsonNumber {
    std::string lexeme;
    Decimal value;
};

class JsonValue {
public:
    using Array = std::vector<JsonValue>;
    using Member = std::pair<std::string, JsonValue>;
    using Object = std::vector<Member>;

    JsonValue() = default;
    JsonValue(std::nullptr_t) {}
    JsonValue(bool b) : data_(b) {}
    JsonValue(const char* s) : data_(std::string(s)) {}
    JsonValue(std::string s) : data_(std::move(s)) {}
    JsonValue(std::string_view s) : data_(std::string(s)) {}
    JsonValue(Array a) : data_(std::move(a)) {}
    JsonValue(JsonNumber n) : data_(std::move(n)) {}
    JsonValue(int i) : JsonValue(static_cast<std::int64_t>(i)) {}
    JsonValue(std::int64_t i) : data_(number_from_lexeme(std::to_string(i))) {}
    JsonValue(std::uint64_t i) : data_(number_from_lexeme(std::to_string(i))) {}

    /// Objects need an explicit factory so that `{}` stays unambiguous.
    static JsonValue object(Object members = {}) {
        JsonValue v;
        v.data_ = std::move(members);
        return v;
    }
    static JsonValue array(Array items = {}) { return JsonValue(std::move(items)); }

    /// Number from a lexeme that satisfies the JSON number grammar. Throws
    /// ParseError otherwise.
    static JsonValue number(std::string_view lexeme);

    /// Number from a finite double, written in shortest round-trip form.
    static JsonValue number(double d) {
        if (d != d || d == std::numeric_limits<double>::infinity() ||
            d == -std::numeric_limits<double>::infinity()) {
            throw std::invalid_argument("JSON cannot represent a non-finite number");
        }
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof buf, d);
        std::string lexeme(buf, res.ptr);
        // to_chars may print "1e+20" which is valid JSON; "inf"/"nan" were excluded above.
        return number(lexeme);
    }

    JsonType type() const noexcept { return static_cast<JsonType>(data_.index()); }
    bool is_null() const noexcept { return type() == JsonType::Null; }
    bool is_bool() const noexcept { return type() == JsonType::Bool; }
    bool is_number() const noexcept { return type() == JsonType::Number; }
    bool is_string() const noexcept { return type() == JsonType::String; }
    bool is_array() const noexcept { return type() == JsonType::Array; }
    bool is_object() const noexcept { return type() == JsonType::Object; }
    bool is_container() const noexcept { return is_array() || is_object(); }

    bool as_bool() const { return std::get<bool>(data_); }
    const JsonNumber& as_number() const { return std::get<JsonNumber>(data_); }
    const std::string& as_string() const { return std::get<std::string>(data_); }
    const Array& as_array() const { return std::get<Array>(data_); }
    const Object& as_object() const { return std::get<Object>(data_); }
    Array& as_array() { return std::get<Array>(data_); }
    Object& as_object() { return std::get<Object>(data_); }

    double as_double() const {
        const auto& lex = as_number().lexeme;
        double d = 0;
        std::from_chars(lex.data(), lex.data() + lex.size(), d);
        return d;
    }

    /// Member lookup; nullptr when absent or when this is not an object.
    const JsonValue* find(std::string_view key) const {
        if (!is_object()) return nullptr;
        for (const auto& [k, v] : as_object()) {
            if (k == key) return &v;
        }
        return nullptr;
    }

    /// Appends a member, or replaces the value of an existing key.
    JsonValue& set(std::string key, JsonValue value) {
        auto& obj = as_object();
        for (auto& [k, v] : obj) {
            if (k == key) {
                v = std::move(value);
                return v;
            }
        }
        obj.emplace_back(std::move(key), std::move(value));
        return obj.back().second;
    }

    bool erase(std::string_view key) {
        auto& obj = as_object();
        auto it = std::find_if(obj.begin(), obj.end(), [&](const Member& m) { return m.first == key; });
        if (it == obj.end()) return false;
        obj.erase(it);
        return true;
    }

    /// Structural equality. Numbers compare by decimal value, objects compare
    /// as key sets (member order is not significant).
    friend bool operator==(const JsonValue& a, const JsonValue& b) {
        if (a.type() != b.type()) return false;
        switch (a.type()) {
            case JsonType::Null: return true;
            case JsonType::Bool: return a.as_bool() == b.as_bool();
            case JsonType::Number: return a.as_number().value == b.as_number().value;
            case JsonType::String: return a.as_string() == b.as_string();
            case JsonType::Array: return a.as_array() == b.as_array();
            case JsonType::Object: {
                const auto& oa = a.as_object();
                const auto& ob = b.as_object();
                if (oa.size() != ob.size()) return false;
                for (const auto& [k, v] : oa) {
                    const JsonValue* other = b.find(k);
                    if (other == nullptr || !(*other == v)) return false;
                }
                return true;
            }
        }
        return false;
    }

private:
    static JsonNumber number_from_lexeme(std::string lexeme) {
        Decimal value = Decimal::from_lexeme(lexeme);
        return JsonNumber{std::move(lexeme), std::move(value)};
    }

    std::variant<std::nullptr_t, bool, JsonNumber, std::string, Array, Object> data_;
};

// ---------------------------------------------------------------------------
// Strict parser
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && is_ascii_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_ascii_space(s.back())) s.remove_suffix(1);
    return s;
}

class StrictParser {
public:
    static constexpr int kMaxDepth = 512;

    explicit StrictParser(std::string_view text) : text_(text) {}

    JsonValue parse_document() {
        skip_ws();
        if (pos_ == text_.size()) fail("empty input");
        JsonValue v = parse_value(0);
        skip_ws();
        if (pos_ != text_.size()) fail("trailing content after JSON document");
        return v;
    }

    /// Validates `lexeme` against the number grammar as a whole.
    static bool is_number_lexeme(std::string_view lexeme) {
        StrictParser p(lexeme);
        if (lexeme.empty()) return false;
        try {
            p.scan_number();
        } catch (const ParseError&) {
            return false;
        }
        return p.pos_ == lexeme.size();
    }

private:
    [[noreturn]] void fail(const std::string& reason) const { throw ParseError(pos_, reason); }

    bool at_end() const noexcept { return pos_ >= text_.size(); }
    char peek() const noexcept { return text_[pos_]; }

    void skip_ws() {
        while (!at_end()) {
            const char c = peek();
            if (c != ' ' && c != '\t' && c != '\n' && c != '\r') break;
            ++pos_;
        }
    }

    void expect_literal(std::string_view lit) {
        if (text_.substr(pos_, lit.size()) != lit) fail("invalid literal");
        pos_ += lit.size();
    }

    JsonValue parse_value(int depth) {
        if (at_end()) fail("unexpected end of input");
        switch (peek()) {
            case '{': return parse_object(depth + 1);
            case '[': return parse_array(depth + 1);
            case '"': return JsonValue(parse_string());
            case 't': expect_literal("true"); return JsonValue(true);
            case 'f': expect_literal("false"); return JsonValue(false);
            case 'n': expect_literal("null"); return JsonValue(nullptr);
            default: break;
        }
        if (peek() == '-' || (peek() >= '0' && peek() <= '9')) {
            const std::size_t start = pos_;
            scan_number();
            std::string_view lexeme = text_.substr(start, pos_ - start);
            return JsonValue(JsonNumber{std::string(lexeme), Decimal::from_lexeme(lexeme)});
        }
        fail("unexpected character");
    }

    JsonValue parse_object(int depth) {
        if (depth > kMaxDepth) fail("nesting too deep");
        ++pos_;  // '{'
        JsonValue::Object members;
        skip_ws();
        if (!at_end() && peek() == '}') {
            ++pos_;
            return JsonValue::object(std::move(members));
        }
        while (true) {
            skip_ws();
            if (at_end() || peek() != '"') fail("expected object key");
            const std::size_t key_pos = pos_;
            std::string key = parse_string();
            for (const auto& m : members) {
                if (m.first == key) throw ParseError(key_pos, "duplicate object key \"" + key + "\"");
            }
            skip_ws();
            if (at_end() || peek() != ':') fail("expected ':' after object key");
            ++pos_;
            skip_ws();
            JsonValue v = parse_value(depth);
            members.emplace_back(std::move(key), std::move(v));
            skip_ws();
            if (at_end()) fail("unterminated object");
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            if (peek() == '}') {
                ++pos_;
                return JsonValue::object(std::move(members));
            }
            fail("expected ',' or '}' in object");
        }
    }

    JsonValue parse_array(int depth) {
        if (depth > kMaxDepth) fail("nesting too deep");
        ++pos_;  // '['
        JsonValue::Array items;
        skip_ws();
        if (!at_end() && peek() == ']') {
            ++pos_;
            return JsonValue(std::move(items));
        }
        while (true) {
            skip_ws();
            items.push_back(parse_value(depth));
            skip_ws();
            if (at_end()) fail("unterminated array");
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            if (peek() == ']') {
                ++pos_;
                return JsonValue(std::move(items));
            }
            fail("expected ',' or ']' in array");
        }
    }

    unsigned read_hex4() {
        if (pos_ + 4 > text_.size()) fail("truncated \\u escape");
        unsigned v = 0;
        for (int i = 0; i < 4; ++i) {
            const char c = text_[pos_ + i];
            v <<= 4;
            if (c >= '0' && c <= '9') v |= static_cast<unsigned>(c - '0');
            else if (c >= 'a' && c <= 'f') v |= static_cast<unsigned>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F') v |= static_cast<unsigned>(c - 'A' + 10);
            else fail("invalid hex digit in \\u escape");
        }
        pos_ += 4;
        return v;
    }

    std::string parse_string() {
        ++pos_;  // opening quote
        std::string out;
        while (true) {
            if (at_end()) fail("unterminated string");
            const auto c = static_cast<unsigned char>(peek());
            if (c == '"') {
                ++pos_;
                return out;
            }
            if (c < 0x20) fail("unescaped control character in string");
            if (c == '\\') {
                ++pos_;
                if (at_end()) fail("unterminated escape");
                const char e = peek();
                ++pos_;
                switch (e) {
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    case '/': out.push_back('/'); break;
                    case 'b': out.push_back('\b'); break;
                    case 'f': out.push_back('\f'); break;
                    case 'n': out.push_back('\n'); break;
                    case 'r': out.push_back('\r'); break;
                    case 't': out.push_back('\t'); break;
                    case 'u': {
                        char32_t cp = read_hex4();
                        if (cp >= 0xDC00 && cp <= 0xDFFF) fail("unpaired low surrogate");
                        if (cp >= 0xD800 && cp <= 0xDBFF) {
                            if (text_.substr(pos_, 2) != "\\u") fail("unpaired high surrogate");
                            pos_ += 2;
                            const char32_t lo = read_hex4();
                            if (lo < 0xDC00 || lo > 0xDFFF) fail("invalid low surrogate");
                            cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
                        }
                        utf8::append(out, cp);
                        break;
                    }
                    default: fail("invalid escape character");
                }
                continue;
            }
            if (c < 0x80) {
                out.push_back(static_cast<char>(c));
                ++pos_;
                continue;
            }
            const std::size_t start = pos_;
            if (!utf8::decode(text_, pos_)) fail("invalid UTF-8 in string");
            out.append(text_.substr(start, pos_ - start));
        }
    }

    void scan_number() {
        const auto digit = [&] { return !at_end() && peek() >= '0' && peek() <= '9'; };
        if (!at_end() && peek() == '-') ++pos_;
        if (!digit()) fail("expected digit");
        if (peek() == '0') {
            ++pos_;
        } else {
            while (digit()) ++pos_;
        }
        if (!at_end() && peek() == '.') {
            ++pos_;
            if (!digit()) fail("expected digit after decimal point");
            while (digit()) ++pos_;
        }
        if (!at_end() && (peek() == 'e' || peek() == 'E')) {
            ++pos_;
            if (!at_end() && (peek() == '+' || peek() == '-')) ++pos_;
            if (!digit()) fail("expected digit in exponent");
            while (digit()) ++pos_;
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline JsonValue JsonValue::number(std::string_view lexeme) {
    if (!detail::StrictParser::is_number_lexeme(lexeme)) {
        throw ParseError(0, "invalid number lexeme \"" + std::string(lexeme) + "\"");
    }
    return JsonValue(JsonNumber{std::string(lexeme), Decimal::from_lexeme(lexeme)});
}

/// Parses `text` as exactly one JSON document. Surrounding whitespace is
/// allowed; any other leading or trailing content is an error, as are
/// duplicate keys within one object.
inline JsonValue parse_strict(std::string_view text) {
    return detail::StrictParser(text).parse_document();
}

/// Result of lenient extraction: the parsed value and the byte span it came from.
struct ExtractedJson {
    JsonValue value;
    std::size_t begin = 0;
    std::size_t end = 0;  // one past the closing bracket
};

/// Finds the first balanced `{...}` / `[...]` span (string-literal aware)
/// that parses strictly. Spans are tried by ascending start offset; for each
/// start only the maximal span closing its opening bracket is considered.
inline ExtractedJson extract_lenient(std::string_view text) {
    for (std::size_t start = 0; start < text.size(); ++start) {
        if (text[start] != '{' && text[start] != '[') continue;
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        std::size_t close = std::string_view::npos;
        for (std::size_t i = start; i < text.size(); ++i) {
            const char c = text[i];
            if (in_string) {
                if (escaped) escaped = false;
                else if (c == '\\') escaped = true;
                else if (c == '"') in_string = false;
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{' || c == '[') {
                ++depth;
            } else if (c == '}' || c == ']') {
                if (--depth == 0) {
                    close = i;
                    break;
                }
            }
        }
        if (close == std::string_view::npos) continue;
        try {
            JsonValue v = parse_strict(text.substr(start, close - start + 1));
            return ExtractedJson{std::move(v), start, close + 1};
        } catch (const ParseError&) {
        }
    }
    throw NotFound("no parsable JSON object or array found");
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace detail {

inline void write_escaped(std::string& out, std::string_view s) {
    out.push_back('"');
    for (const char ch : s) {
        const auto c = static_cast<unsigned char>(ch);
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    static constexpr char kHex[] = "0123456789abcdef";
                    out += "\\u00";
                    out.push_back(kHex[c >> 4]);
                    out.push_back(kHex[c & 0xF]);
                } else {
                    out.push_back(ch);
                }
        }
    }
    out.push_back('"');
}

inline void write_canonical(std::string& out, const JsonValue& v) {
    switch (v.type()) {
        case JsonType::Null: out += "null"; break;
        case JsonType::Bool: out += v.as_bool() ? "true" : "false"; break;
        case JsonType::Number: out += v.as_number().lexeme; break;
        case JsonType::String: write_escaped(out, v.as_string()); break;
        case JsonType::Array: {
            out.push_back('[');
            bool first = true;
            for (const auto& item : v.as_array()) {
                if (!first) out += ", ";
                first = false;
                write_canonical(out, item);
            }
            out.push_back(']');
            break;
        }
        case JsonType::Object: {
            out.push_back('{');
            bool first = true;
            for (const auto& [k, child] : v.as_object()) {
                if (!first) out += ", ";
                first = false;
                write_escaped(out, k);
                out += ": ";
                write_canonical(out, child);
            }
            out.push_back('}');
            break;
        }
    }
}

inline void write_pretty(std::string& out, const JsonValue& v, int indent, int level) {
    const auto newline = [&](int lvl) {
        out.push_back('\n');
        out.append(static_cast<std::size_t>(indent * lvl), ' ');
    };
    if (v.is_array() && !v.as_array().empty()) {
        out.push_back('[');
        bool first = true;
        for (const auto& item : v.as_array()) {
            if (!first) out.push_back(',');
            first = false;
            newline(level + 1);
            write_pretty(out, item, indent, level + 1);
        }
        newline(level);
        out.push_back(']');
    } else if (v.is_object() && !v.as_object().empty()) {
        out.push_back('{');
        bool first = true;
        for (const auto& [k, child] : v.as_object()) {
            if (!first) out.push_back(',');
            first = false;
            newline(level + 1);
            write_escaped(out, k);
            out += ": ";
            write_pretty(out, child, indent, level + 1);
        }
        newline(level);
        out.push_back('}');
    } else {
        write_canonical(out, v);
    }
}

}  // namespace detail

/// Reference serializer: insertion-ordered keys, `", "` between elements,
/// `": "` between key and value, numbers as their original lexeme, non-ASCII
/// text emitted as raw UTF-8.
inline std::string serialize_canonical(const JsonValue& v) {
    std::string out;
    detail::write_canonical(out, v);
    return out;
}

/// Multi-line rendering for reports. Not used by any metric.
inline std::string serialize_pretty(const JsonValue& v, int indent = 2) {
    std::string out;
    detail::write_pretty(out, v, indent, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Key paths and flattening
// ---------------------------------------------------------------------------

/// One step of a key path: an object key or an array index.
using PathSegment = std::variant<std::string, std::size_t>;

class KeyPath {
public:
    KeyPath() = default;
    KeyPath(std::initializer_list<PathSegment> segments) : segments_(segments) {}
    explicit KeyPath(std::vector<PathSegment> segments) : segments_(std::move(segments)) {}

    const std::vector<PathSegment>& segments() const noexcept { return segments_; }
    bool is_root() const noexcept { return segments_.empty(); }
    std::size_t size() const noexcept { return segments_.size(); }

    KeyPath child(std::string key) const {
        KeyPath p = *this;
        p.segments_.emplace_back(std::move(key));
        return p;
    }
    KeyPath child(std::size_t index) const {
        KeyPath p = *this;
        p.segments_.emplace_back(index);
        return p;
    }

    void push(PathSegment s) { segments_.push_back(std::move(s)); }
    void pop() { segments_.pop_back(); }

    /// Display form: `a.b[0]`; keys outside [A-Za-z0-9_$-] are quoted as `["k"]`.
    /// The root renders as the empty string.
    std::string to_string() const {
        std::string out;
        for (const auto& seg : segments_) {
            if (const auto* idx = std::get_if<std::size_t>(&seg)) {
                out += '[' + std::to_string(*idx) + ']';
                continue;
            }
            const auto& key = std::get<std::string>(seg);
            const bool plain = !key.empty() && std::all_of(key.begin(), key.end(), [](char c) {
                return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                       c == '_' || c == '$' || c == '-';
            });
            if (plain) {
                if (!out.empty()) out += '.';
                out += key;
            } else {
                out += '[';
                detail::write_escaped(out, key);
                out += ']';
            }
        }
        return out;
    }

    friend bool operator==(const KeyPath&, const KeyPath&) = default;
    friend auto operator<=>(const KeyPath& a, const KeyPath& b) { return a.segments_ <=> b.segments_; }

private:
    std::vector<PathSegment> segments_;
};

/// Canonical text of a scalar: strings as-is, numbers as normalized decimal,
/// booleans as true/false, null as null.
inline std::string render_scalar(const JsonValue& v) {
    switch (v.type()) {
        case JsonType::Null: return "null";
        case JsonType::Bool: return v.as_bool() ? "true" : "false";
        case JsonType::Number: return v.as_number().value.to_string();
        case JsonType::String: return v.as_string();
        default: throw std::invalid_argument("render_scalar called on a container");
    }
}

/// A scalar leaf addressed by its full key path.
struct FlatEntry {
    KeyPath path;
    JsonValue scalar;
    std::string rendered;
};

namespace detail {

inline void flatten_into(const JsonValue& v, KeyPath& path, std::vector<FlatEntry>& out) {
    if (v.is_object()) {
        for (const auto& [k, child] : v.as_object()) {
            path.push(k);
            flatten_into(child, path, out);
            path.pop();
        }
    } else if (v.is_array()) {
        const auto& items = v.as_array();
        for (std::size_t i = 0; i < items.size(); ++i) {
            path.push(i);
            flatten_into(items[i], path, out);
            path.pop();
        }
    } else {
        out.push_back(FlatEntry{path, v, render_scalar(v)});
    }
}

}  // namespace detail

/// Scalar leaves in depth-first document order. Empty containers contribute
/// nothing; a scalar root yields one entry with the root path.
inline std::vector<FlatEntry> flatten(const JsonValue& v) {
    std::vector<FlatEntry> out;
    KeyPath path;
    detail::flatten_into(v, path, out);
    return out;
}

}  // namespace structeval
