#pragma once

// Seven structural and content complexity dimensions of a JSON value.

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "structeval/json.hpp"

namespace structeval {

/// Substrings that mark a string as code-like for the content metric.
/// Bump `kCodePatternVersion` whenever the default list changes.
inline constexpr std::string_view kCodePatternVersion = "code-patterns/v1";

inline std::vector<std::string> default_code_patterns() {
    return {"def ", "class ", "import ", "return ", "Traceback", "://", "();", "=>", "</"};
}

struct ContentOptions {
    std::vector<std::string> code_patterns = default_code_patterns();
    /// Also treat a string holding both '{' and '}' as code-like.
    bool brace_pair_is_code = true;
};

struct ComplexityProfile {
    std::int64_t depth = 0;
    std::int64_t keys = 0;
    std::int64_t size_bytes = 0;
    std::int64_t elements = 0;
    std::int64_t cyclomatic = 0;
    double schema_complexity = 0.0;
    double content_complexity = 0.0;

    friend bool operator==(const ComplexityProfile&, const ComplexityProfile&) = default;
};

/// Primitive -> 0; container -> 1 + deepest child (an empty container is 1).
inline std::int64_t depth(const JsonValue& v) {
    std::int64_t deepest = 0;
    if (v.is_object()) {
        for (const auto& [k, child] : v.as_object()) deepest = std::max(deepest, depth(child));
    } else if (v.is_array()) {
        for (const auto& child : v.as_array()) deepest = std::max(deepest, depth(child));
    } else {
        return 0;
    }
    return 1 + deepest;
}

/// Keys summed over every object at every level.
inline std::int64_t count_keys(const JsonValue& v) {
    std::int64_t n = 0;
    if (v.is_object()) {
        n += static_cast<std::int64_t>(v.as_object().size());
        for (const auto& [k, child] : v.as_object()) n += count_keys(child);
    } else if (v.is_array()) {
        for (const auto& child : v.as_array()) n += count_keys(child);
    }
    return n;
}

/// UTF-8 byte length of the reference serialization.
inline std::int64_t size_bytes(const JsonValue& v) {
    return static_cast<std::int64_t>(serialize_canonical(v).size());
}

/// Every node counts once: primitives, objects and arrays.
inline std::int64_t count_elements(const JsonValue& v) {
    std::int64_t n = 1;
    if (v.is_object()) {
        for (const auto& [k, child] : v.as_object()) n += count_elements(child);
    } else if (v.is_array()) {
        for (const auto& child : v.as_array()) n += count_elements(child);
    }
    return n;
}

/// Object keys plus one per non-empty array.
inline std::int64_t cyclomatic(const JsonValue& v) {
    std::int64_t n = 0;
    if (v.is_object()) {
        n += static_cast<std::int64_t>(v.as_object().size());
        for (const auto& [k, child] : v.as_object()) n += cyclomatic(child);
    } else if (v.is_array()) {
        if (!v.as_array().empty()) ++n;
        for (const auto& child : v.as_array()) n += cyclomatic(child);
    }
    return n;
}

/// String lengths are counted in Unicode scalar values.
inline double schema_complexity(const JsonValue& v) {
    switch (v.type()) {
        case JsonType::String: {
            const auto len = static_cast<double>(utf8::code_points(v.as_string()).size());
            return 1.0 + std::min(len, 100.0) / 10.0;
        }
        case JsonType::Object: {
            double sc = 1.0 + static_cast<double>(v.as_object().size());
            for (const auto& [k, child] : v.as_object()) sc += schema_complexity(child);
            return sc;
        }
        case JsonType::Array: {
            const auto& items = v.as_array();
            double sc = 1.0 + static_cast<double>(items.size());
            if (items.empty()) return sc;
            const bool homogeneous = std::all_of(items.begin(), items.end(),
                                                 [&](const JsonValue& x) { return x.type() == items.front().type(); });
            if (homogeneous) return sc + schema_complexity(items.front());
            for (const auto& item : items) sc += schema_complexity(item);
            return sc;
        }
        default: return 1.0;
    }
}

namespace detail {

inline bool is_code_like(const std::string& s, const ContentOptions& opts) {
    for (const auto& p : opts.code_patterns) {
        if (!p.empty() && s.find(p) != std::string::npos) return true;
    }
    return opts.brace_pair_is_code && s.find('{') != std::string::npos && s.find('}') != std::string::npos;
}

// ASCII letters and digits are alphanumeric. Non-ASCII scalar values are
// treated as alphanumeric too, so only ASCII punctuation and controls count
// as special.
inline bool is_special(char32_t c) {
    if (c >= 0x80) return false;
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) return false;
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') return false;
    return true;
}

}  // namespace detail

/// Content score of one string: length + entropy + special-character +
/// code-likeness factors. The empty string scores 0.
inline double string_content_complexity(const std::string& s, const ContentOptions& opts = {}) {
    const std::u32string cps = utf8::code_points(s);
    if (cps.empty()) return 0.0;
    const double len = static_cast<double>(cps.size());
    const std::unordered_set<char32_t> unique(cps.begin(), cps.end());
    const auto special = std::count_if(cps.begin(), cps.end(), detail::is_special);

    const double lf = std::min(len / 20.0, 5.0);
    const double ef = static_cast<double>(unique.size()) / len * 3.0;
    const double sf = std::min(static_cast<double>(special) / len * 5.0, 3.0);
    const double tf = detail::is_code_like(s, opts) ? 2.0 : 0.0;
    return lf + ef + sf + tf;
}

inline double content_complexity(const JsonValue& v, const ContentOptions& opts = {}) {
    switch (v.type()) {
        case JsonType::Object: {
            double cc = 0.0;
            for (const auto& [k, child] : v.as_object()) cc += content_complexity(child, opts);
            return cc;
        }
        case JsonType::Array: {
            double cc = 0.0;
            for (const auto& child : v.as_array()) cc += content_complexity(child, opts);
            return cc;
        }
        case JsonType::String: return string_content_complexity(v.as_string(), opts);
        case JsonType::Number: {
            const auto& lex = v.as_number().lexeme;
            const auto digits = std::count_if(lex.begin(), lex.end(), [](char c) { return c >= '0' && c <= '9'; });
            return std::min(static_cast<double>(digits) / 5.0, 1.0);
        }
        default: return 0.0;
    }
}

inline ComplexityProfile analyze(const JsonValue& v, const ContentOptions& opts = {}) {
    return ComplexityProfile{
        depth(v),      count_keys(v),         size_bytes(v),
        count_elements(v), cyclomatic(v), schema_complexity(v),
        content_complexity(v, opts),
    };
}

}  // namespace structeval
