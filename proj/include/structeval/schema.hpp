#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "structeval/errors.hpp"
#include "structeval/json.hpp"

namespace structeval {

enum class SchemaKind { Object, Array, String, Number, Integer, Boolean, Null };

inline std::string_view to_string(SchemaKind k) {
    switch (k) {
        case SchemaKind::Object: return "object";
        case SchemaKind::Array: return "array";
        case SchemaKind::String: return "string";
        case SchemaKind::Number: return "number";
        case SchemaKind::Integer: return "integer";
        case SchemaKind::Boolean: return "boolean";
        case SchemaKind::Null: return "null";
    }
    return "unknown";
}

/// Typed schema tree for the supported keyword subset
/// {type, properties, required, additionalProperties, items}.
///
/// `properties`, `required` and `additional_allowed` are meaningful only for
/// objects, `items` only for arrays. `required` is always a subset of the
/// declared property names.
struct SchemaNode {
    SchemaKind kind = SchemaKind::Object;
    std::vector<std::pair<std::string, SchemaNode>> properties;  // declaration order
    std::set<std::string> required;
    bool additional_allowed = false;
    std::shared_ptr<const SchemaNode> items;

    const SchemaNode* property(std::string_view key) const {
        for (const auto& [k, node] : properties) {
            if (k == key) return &node;
        }
        return nullptr;
    }
};

/// Non-fatal observation made while parsing a schema (ignored keyword, ...).
struct SchemaWarning {
    KeyPath path;
    std::string message;
};

namespace detail {

inline SchemaKind parse_kind(const JsonValue& raw, const KeyPath& where) {
    const JsonValue* type = raw.find("type");
    if (type == nullptr) throw SchemaError("missing \"type\" at schema path '" + where.to_string() + "'");
    if (!type->is_string()) throw SchemaError("\"type\" must be a string at schema path '" + where.to_string() + "'");
    static const std::map<std::string, SchemaKind, std::less<>> kKinds = {
        {"object", SchemaKind::Object},   {"array", SchemaKind::Array},
        {"string", SchemaKind::String},   {"number", SchemaKind::Number},
        {"integer", SchemaKind::Integer}, {"boolean", SchemaKind::Boolean},
        {"null", SchemaKind::Null},
    };
    auto it = kKinds.find(type->as_string());
    if (it == kKinds.end()) {
        throw SchemaError("unsupported type \"" + type->as_string() + "\" at schema path '" + where.to_string() + "'");
    }
    return it->second;
}

inline SchemaNode parse_schema_node(const JsonValue& raw, const KeyPath& where, std::vector<SchemaWarning>& warnings) {
    if (!raw.is_object()) throw SchemaError("schema at path '" + where.to_string() + "' is not an object");
    SchemaNode node;
    node.kind = parse_kind(raw, where);

    for (const auto& [keyword, value] : raw.as_object()) {
        if (keyword == "type") continue;
        const bool object_keyword = keyword == "properties" || keyword == "required" || keyword == "additionalProperties";
        if (object_keyword && node.kind != SchemaKind::Object) {
            warnings.push_back({where, "keyword \"" + keyword + "\" ignored on non-object schema"});
            continue;
        }
        if (keyword == "items" && node.kind != SchemaKind::Array) {
            warnings.push_back({where, "keyword \"items\" ignored on non-array schema"});
            continue;
        }
        if (keyword == "properties") {
            if (!value.is_object()) throw SchemaError("\"properties\" must be an object at schema path '" + where.to_string() + "'");
            for (const auto& [name, sub] : value.as_object()) {
                node.properties.emplace_back(name, parse_schema_node(sub, where.child(name), warnings));
            }
        } else if (keyword == "required") {
            if (!value.is_array()) throw SchemaError("\"required\" must be an array at schema path '" + where.to_string() + "'");
            for (const auto& name : value.as_array()) {
                if (!name.is_string()) {
                    throw SchemaError("\"required\" entries must be strings at schema path '" + where.to_string() + "'");
                }
                node.required.insert(name.as_string());
            }
        } else if (keyword == "additionalProperties") {
            if (!value.is_bool()) {
                throw SchemaError("\"additionalProperties\" must be a boolean at schema path '" + where.to_string() + "'");
            }
            node.additional_allowed = value.as_bool();
        } else if (keyword == "items") {
            node.items = std::make_shared<const SchemaNode>(parse_schema_node(value, where.child(std::string("items")), warnings));
        } else {
            warnings.push_back({where, "unsupported keyword \"" + keyword + "\" ignored"});
        }
    }

    for (const auto& name : node.required) {
        if (node.property(name) == nullptr) {
            throw SchemaError("required key \"" + name + "\" is not declared in properties at schema path '" +
                              where.to_string() + "'");
        }
    }
    return node;
}

}  // namespace detail

/// Builds a SchemaNode from its JSON form. Absent `required` means no key is
/// required; absent `additionalProperties` means undeclared keys are
/// rejected. Unknown keywords are ignored and reported through `warnings`.
inline SchemaNode parse_schema(const JsonValue& raw, std::vector<SchemaWarning>* warnings = nullptr) {
    std::vector<SchemaWarning> local;
    SchemaNode node = detail::parse_schema_node(raw, KeyPath{}, warnings ? *warnings : local);
    return node;
}

enum class ViolationCode { MissingRequired, UnexpectedKey, TypeMismatch, Unparsable };

inline std::string_view to_string(ViolationCode c) {
    switch (c) {
        case ViolationCode::MissingRequired: return "MISSING_REQUIRED";
        case ViolationCode::UnexpectedKey: return "UNEXPECTED_KEY";
        case ViolationCode::TypeMismatch: return "TYPE_MISMATCH";
        case ViolationCode::Unparsable: return "UNPARSABLE";
    }
    return "UNKNOWN";
}

struct Violation {
    KeyPath path;
    ViolationCode code;
    std::string detail;
};

/// `ok` holds exactly when `violations` is empty.
struct ConformanceResult {
    bool ok = true;
    std::vector<Violation> violations;
};

/// True when the JSON type of `v` satisfies `kind`. Integer accepts only
/// integral values (2.0 counts, 2.5 does not).
inline bool kind_matches(SchemaKind kind, const JsonValue& v) {
    switch (kind) {
        case SchemaKind::Object: return v.is_object();
        case SchemaKind::Array: return v.is_array();
        case SchemaKind::String: return v.is_string();
        case SchemaKind::Number: return v.is_number();
        case SchemaKind::Integer: return v.is_number() && v.as_number().value.is_integer();
        case SchemaKind::Boolean: return v.is_bool();
        case SchemaKind::Null: return v.is_null();
    }
    return false;
}

namespace detail {

inline void check_conformance(const JsonValue& v, const SchemaNode& schema, KeyPath& path, std::vector<Violation>& out) {
    if (!kind_matches(schema.kind, v)) {
        std::string detail = "expected " + std::string(to_string(schema.kind)) + ", found " + std::string(to_string(v.type()));
        if (schema.kind == SchemaKind::Integer && v.is_number()) detail = "expected integer, found non-integral number";
        out.push_back({path, ViolationCode::TypeMismatch, std::move(detail)});
        return;
    }
    if (schema.kind == SchemaKind::Object) {
        for (const auto& name : schema.required) {
            if (v.find(name) == nullptr) {
                out.push_back({path.child(name), ViolationCode::MissingRequired, "required key \"" + name + "\" is missing"});
            }
        }
        for (const auto& [key, child] : v.as_object()) {
            const SchemaNode* sub = schema.property(key);
            if (sub == nullptr) {
                if (!schema.additional_allowed) {
                    out.push_back({path.child(key), ViolationCode::UnexpectedKey, "key \"" + key + "\" is not declared"});
                }
                continue;
            }
            path.push(key);
            check_conformance(child, *sub, path, out);
            path.pop();
        }
    } else if (schema.kind == SchemaKind::Array && schema.items) {
        const auto& items = v.as_array();
        for (std::size_t i = 0; i < items.size(); ++i) {
            path.push(i);
            check_conformance(items[i], *schema.items, path, out);
            path.pop();
        }
    }
}

}  // namespace detail

/// Checks key-set and value-type conformance of `value` against `schema`,
/// collecting every violation with its path.
inline ConformanceResult conforms(const JsonValue& value, const SchemaNode& schema) {
    ConformanceResult r;
    KeyPath path;
    detail::check_conformance(value, schema, path, r.violations);
    r.ok = r.violations.empty();
    return r;
}

/// Conformance of a raw model response. A response that is not exactly one
/// JSON document yields a single UNPARSABLE violation at the root.
inline ConformanceResult check_response(std::string_view response_text, const SchemaNode& schema) {
    JsonValue parsed;
    try {
        parsed = parse_strict(response_text);
    } catch (const ParseError& e) {
        ConformanceResult r;
        r.ok = false;
        r.violations.push_back({KeyPath{}, ViolationCode::Unparsable, e.what()});
        return r;
    }
    return conforms(parsed, schema);
}

/// Binary schema accuracy of a raw response.
inline bool schema_accuracy(std::string_view response_text, const SchemaNode& schema) {
    return check_response(response_text, schema).ok;
}

}  // namespace structeval
