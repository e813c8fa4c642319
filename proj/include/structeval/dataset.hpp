#pragma once

// Line-delimited JSON dataset and prediction files.

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "structeval/errors.hpp"
#include "structeval/json.hpp"

namespace structeval {

/// One (input text, schema, gold output) triple.
struct DatasetRecord {
    std::string id;
    std::string input_text;
    JsonValue json_schema;
    JsonValue gold;
};

struct PredictionRecord {
    std::string id;
    std::string prediction_text;
};

enum class RejectCode { LineUnparsable, NotAnObject, MissingField, FieldType, DuplicateId };

inline std::string_view to_string(RejectCode c) {
    switch (c) {
        case RejectCode::LineUnparsable: return "LINE_UNPARSABLE";
        case RejectCode::NotAnObject: return "NOT_AN_OBJECT";
        case RejectCode::MissingField: return "MISSING_FIELD";
        case RejectCode::FieldType: return "FIELD_TYPE";
        case RejectCode::DuplicateId: return "DUPLICATE_ID";
    }
    return "UNKNOWN";
}

/// A line that could not become a record. `line` is 1-based.
struct RejectedLine {
    std::size_t line = 0;
    RejectCode code = RejectCode::LineUnparsable;
    std::string field;  // empty unless the problem is tied to one field
    std::string reason;
};

template <typename Record>
struct LoadResult {
    std::vector<Record> records;
    std::vector<RejectedLine> rejects;
};

/// Fraction of malformed non-blank lines above which a whole file is refused.
inline constexpr double kMaxRejectFraction = 0.5;

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed for " + path);
    return ss.str();
}

/// Calls `on_line(line_number, text)` for each non-blank line; strips a trailing CR.
template <typename F>
void for_each_line(const std::string& content, F&& on_line) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= content.size()) {
        auto end = content.find('\n', start);
        if (end == std::string::npos) end = content.size();
        ++line_no;
        std::string_view line(content.data() + start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") != std::string_view::npos) on_line(line_no, line);
        if (end == content.size()) break;
        start = end + 1;
    }
}

/// Parses a line into an object or records why it cannot be one.
inline std::optional<JsonValue> parse_line_object(std::size_t line_no, std::string_view line,
                                                  std::vector<RejectedLine>& rejects) {
    JsonValue v;
    try {
        v = parse_strict(line);
    } catch (const ParseError& e) {
        rejects.push_back({line_no, RejectCode::LineUnparsable, "", e.what()});
        return std::nullopt;
    }
    if (!v.is_object()) {
        rejects.push_back({line_no, RejectCode::NotAnObject, "", "line is not a JSON object"});
        return std::nullopt;
    }
    return v;
}

template <typename Record>
void enforce_reject_ratio(const LoadResult<Record>& r, const std::string& path) {
    const std::size_t total = r.records.size() + r.rejects.size();
    if (total > 0 && static_cast<double>(r.rejects.size()) > kMaxRejectFraction * static_cast<double>(total)) {
        throw FormatError(path + ": " + std::to_string(r.rejects.size()) + " of " + std::to_string(total) +
                          " lines are malformed; is this the right file?");
    }
}

}  // namespace detail

/// Parses dataset JSONL text. Each line needs `input_text` (string),
/// `json_schema` and `gold` (any JSON); `id` is optional and defaults to the
/// line number. Bad lines go to `rejects`.
inline LoadResult<DatasetRecord> parse_dataset(const std::string& content, const std::string& origin = "<memory>") {
    LoadResult<DatasetRecord> result;
    std::set<std::string> seen;
    detail::for_each_line(content, [&](std::size_t line_no, std::string_view line) {
        auto obj = detail::parse_line_object(line_no, line, result.rejects);
        if (!obj) return;
        for (const char* field : {"input_text", "json_schema", "gold"}) {
            if (obj->find(field) == nullptr) {
                result.rejects.push_back({line_no, RejectCode::MissingField, field, std::string("missing field \"") + field + "\""});
                return;
            }
        }
        const JsonValue& text = *obj->find("input_text");
        if (!text.is_string()) {
            result.rejects.push_back({line_no, RejectCode::FieldType, "input_text", "field \"input_text\" must be a string"});
            return;
        }
        std::string id = std::to_string(line_no);
        if (const JsonValue* raw_id = obj->find("id")) {
            if (!raw_id->is_string()) {
                result.rejects.push_back({line_no, RejectCode::FieldType, "id", "field \"id\" must be a string"});
                return;
            }
            id = raw_id->as_string();
        }
        if (!seen.insert(id).second) {
            result.rejects.push_back({line_no, RejectCode::DuplicateId, "id", "duplicate id \"" + id + "\""});
            return;
        }
        result.records.push_back(DatasetRecord{std::move(id), text.as_string(), *obj->find("json_schema"), *obj->find("gold")});
    });
    detail::enforce_reject_ratio(result, origin);
    return result;
}

inline LoadResult<DatasetRecord> load_dataset(const std::string& path) {
    return parse_dataset(detail::read_file(path), path);
}

/// Parses prediction JSONL: `id` (string) and `prediction_text` (string).
inline LoadResult<PredictionRecord> parse_predictions(const std::string& content, const std::string& origin = "<memory>") {
    LoadResult<PredictionRecord> result;
    std::set<std::string> seen;
    detail::for_each_line(content, [&](std::size_t line_no, std::string_view line) {
        auto obj = detail::parse_line_object(line_no, line, result.rejects);
        if (!obj) return;
        for (const char* field : {"id", "prediction_text"}) {
            const JsonValue* v = obj->find(field);
            if (v == nullptr) {
                result.rejects.push_back({line_no, RejectCode::MissingField, field, std::string("missing field \"") + field + "\""});
                return;
            }
            if (!v->is_string()) {
                result.rejects.push_back({line_no, RejectCode::FieldType, field, std::string("field \"") + field + "\" must be a string"});
                return;
            }
        }
        std::string id = obj->find("id")->as_string();
        if (!seen.insert(id).second) {
            result.rejects.push_back({line_no, RejectCode::DuplicateId, "id", "duplicate id \"" + id + "\""});
            return;
        }
        result.records.push_back(PredictionRecord{std::move(id), obj->find("prediction_text")->as_string()});
    });
    detail::enforce_reject_ratio(result, origin);
    return result;
}

inline LoadResult<PredictionRecord> load_predictions(const std::string& path) {
    return parse_predictions(detail::read_file(path), path);
}

/// The record in dataset-line form (the layout `parse_dataset` reads).
inline JsonValue to_json(const DatasetRecord& r) {
    return JsonValue::object({
        {"id", r.id},
        {"input_text", r.input_text},
        {"json_schema", r.json_schema},
        {"gold", r.gold},
    });
}

}  // namespace structeval
