#pragma once

// Two-stage filtering of (input text, schema, gold) triples: format checks
// first, then an LLM judge asked whether the gold output is supported by the
// text. Also the thin orchestration that asks an LLM for new triples.

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "structeval/dataset.hpp"
#include "structeval/errors.hpp"
#include "structeval/http.hpp"
#include "structeval/json.hpp"
#include "structeval/prompts.hpp"
#include "structeval/schema.hpp"

namespace structeval {

enum class ValidationCode {
    EmptyText,
    SchemaUnparsable,
    GoldUnparsable,
    GoldSchemaMismatch,
    JudgeFalse,
    JudgeUnparseable,
};

inline std::string_view to_string(ValidationCode c) {
    switch (c) {
        case ValidationCode::EmptyText: return "EMPTY_TEXT";
        case ValidationCode::SchemaUnparsable: return "SCHEMA_UNPARSABLE";
        case ValidationCode::GoldUnparsable: return "GOLD_UNPARSABLE";
        case ValidationCode::GoldSchemaMismatch: return "GOLD_SCHEMA_MISMATCH";
        case ValidationCode::JudgeFalse: return "JUDGE_FALSE";
        case ValidationCode::JudgeUnparseable: return "JUDGE_UNPARSEABLE";
    }
    return "UNKNOWN";
}

/// `pass` holds exactly when `codes` is empty.
struct ValidationOutcome {
    int stage = 1;
    bool pass = true;
    std::vector<ValidationCode> codes;
    std::vector<std::string> details;  // one human-readable line per code
    int retries = 0;                   // stage 2 only

    void add(ValidationCode code, std::string detail) {
        codes.push_back(code);
        details.push_back(std::move(detail));
        pass = false;
    }
};

/// A schema or gold value stored as a JSON string holding serialized JSON
/// (a common LLM double-encoding) is decoded before checking. A gold string
/// is taken literally when the schema itself asks for a string.
inline ValidationOutcome stage1_validate(const DatasetRecord& record) {
    ValidationOutcome out;
    out.stage = 1;

    if (detail::trim(record.input_text).empty()) out.add(ValidationCode::EmptyText, "input_text is empty");

    std::optional<SchemaNode> schema;
    try {
        const JsonValue raw = record.json_schema.is_string() ? parse_strict(record.json_schema.as_string()) : record.json_schema;
        schema = parse_schema(raw);
    } catch (const ParseError& e) {
        out.add(ValidationCode::SchemaUnparsable, std::string("json_schema is not JSON: ") + e.what());
    } catch (const SchemaError& e) {
        out.add(ValidationCode::SchemaUnparsable, e.what());
    }

    std::optional<JsonValue> gold;
    const bool decode_gold = record.gold.is_string() && !(schema && schema->kind == SchemaKind::String);
    if (decode_gold) {
        try {
            gold = parse_strict(record.gold.as_string());
        } catch (const ParseError& e) {
            out.add(ValidationCode::GoldUnparsable, std::string("gold is not JSON: ") + e.what());
        }
    } else {
        gold = record.gold;
    }

    if (schema && gold) {
        const ConformanceResult r = conforms(*gold, *schema);
        if (!r.ok) {
            std::string detail;
            for (const auto& v : r.violations) {
                if (!detail.empty()) detail += "; ";
                detail += std::string(to_string(v.code)) + " at '" + v.path.to_string() + "'";
            }
            out.add(ValidationCode::GoldSchemaMismatch, detail);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Completion client
// ---------------------------------------------------------------------------

struct CompletionRequest {
    std::string prompt;
    double temperature = 0.0;
    int max_tokens = 1024;
};

/// Text completion transport. Implementations must be safe to call from
/// several threads and throw TransportError / MalformedResponse on failure.
class CompletionClient {
public:
    virtual ~CompletionClient() = default;
    virtual std::string complete(const CompletionRequest& request) = 0;
};

struct CompletionConfig {
    std::string endpoint;
    std::chrono::milliseconds timeout{30'000};
    std::size_t max_in_flight = 8;
};

/// Speaks `{"prompt", "temperature", "max_tokens"}` -> `{"text"}` over HTTP POST.
class HttpCompletionClient final : public CompletionClient {
public:
    explicit HttpCompletionClient(CompletionConfig config)
        : config_(std::move(config)),
          endpoint_(http::parse_endpoint(config_.endpoint)),
          gate_(static_cast<std::ptrdiff_t>(config_.max_in_flight)) {}

    std::string complete(const CompletionRequest& request) override {
        const JsonValue body = JsonValue::object({
            {"prompt", request.prompt},
            {"temperature", JsonValue::number(request.temperature)},
            {"max_tokens", request.max_tokens},
        });
        JsonValue reply;
        {
            auto ticket = gate_.enter();
            reply = http::post_json(endpoint_, body, config_.timeout);
        }
        const JsonValue* text = reply.find("text");
        if (text == nullptr || !text->is_string()) throw MalformedResponse("completion response lacks a string \"text\" field");
        return text->as_string();
    }

private:
    CompletionConfig config_;
    http::Endpoint endpoint_;
    http::RequestGate gate_;
};

// ---------------------------------------------------------------------------
// Stage 2
// ---------------------------------------------------------------------------

struct JudgeOptions {
    int retries = 2;
    std::chrono::milliseconds initial_backoff{1000};  // doubles after every failed attempt
    bool fail_hard = false;  // rethrow the last transport error instead of JUDGE_UNPARSEABLE
    int max_tokens = 1024;
    /// Injected so tests do not wait out real backoff.
    std::function<void(std::chrono::milliseconds)> sleep = [](std::chrono::milliseconds d) {
        std::this_thread::sleep_for(d);
    };
};

/// Judge temperature is always 0.
inline constexpr double kJudgeTemperature = 0.0;

/// Asks the judge whether every gold field is supported by the input text.
/// Transport failures and unparseable verdicts are retried; once retries are
/// exhausted the outcome is JUDGE_UNPARSEABLE (or the transport error is
/// rethrown under fail_hard). Expects a record that passed stage 1.
inline ValidationOutcome stage2_validate(const DatasetRecord& record, CompletionClient& client, const JudgeOptions& opts = {}) {
    ValidationOutcome out;
    out.stage = 2;
    const CompletionRequest request{build_validation_prompt(record), kJudgeTemperature, opts.max_tokens};

    auto backoff = opts.initial_backoff;
    std::string last_problem;
    for (int attempt = 0; attempt <= opts.retries; ++attempt) {
        if (attempt > 0) {
            if (opts.sleep) opts.sleep(backoff);
            backoff *= 2;
        }
        out.retries = attempt;
        try {
            const std::string response = client.complete(request);
            if (const auto verdict = parse_validity(response)) {
                if (!*verdict) out.add(ValidationCode::JudgeFalse, "judge found unsupported content");
                return out;
            }
            last_problem = "judge response has no true/false <validity> tag";
        } catch (const TransportError& e) {
            if (opts.fail_hard && attempt == opts.retries) throw;
            last_problem = e.what();
        } catch (const MalformedResponse& e) {
            if (opts.fail_hard && attempt == opts.retries) throw;
            last_problem = e.what();
        }
    }
    out.add(ValidationCode::JudgeUnparseable, last_problem);
    return out;
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

/// Candidate triples found in `<JSONL>...</JSONL>` spans of a generation
/// response, one per non-blank line. Lines that are not well-formed records
/// are reported in `rejects` (line numbers count within the tagged spans).
inline LoadResult<DatasetRecord> parse_generation_response(std::string_view response, const std::string& id_prefix) {
    constexpr std::string_view kOpen = "<JSONL>";
    constexpr std::string_view kClose = "</JSONL>";
    std::string lines;
    for (std::size_t pos = 0;;) {
        const auto open = response.find(kOpen, pos);
        if (open == std::string_view::npos) break;
        const auto close = response.find(kClose, open + kOpen.size());
        if (close == std::string_view::npos) break;
        lines.append(response.substr(open + kOpen.size(), close - open - kOpen.size()));
        lines.push_back('\n');
        pos = close + kClose.size();
    }
    LoadResult<DatasetRecord> result;
    try {
        result = parse_dataset(lines, "generation response");
    } catch (const FormatError&) {
        // Mostly-garbage responses are still reported line by line below.
        LoadResult<DatasetRecord> salvage;
        detail::for_each_line(lines, [&](std::size_t line_no, std::string_view line) {
            try {
                auto one = parse_dataset(std::string(line));
                for (auto& r : one.records) salvage.records.push_back(std::move(r));
            } catch (const FormatError& e) {
                salvage.rejects.push_back({line_no, RejectCode::LineUnparsable, "", e.what()});
            }
        });
        result = std::move(salvage);
    }
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        result.records[i].id = id_prefix + "-" + std::to_string(i + 1);
    }
    return result;
}

struct GenerationOptions {
    int max_tokens = 4096;
    bool run_stage2 = true;
    JudgeOptions judge;
};

struct GenerationResult {
    std::vector<DatasetRecord> accepted;
    std::vector<std::pair<DatasetRecord, ValidationOutcome>> filtered;
    std::vector<RejectedLine> unparsed;
};

/// One generation round: prompt the model with `spec`, parse the tagged
/// JSONL, keep triples that pass stage 1 and (optionally) stage 2.
/// Rejected triples are dropped and reported, never regenerated.
inline GenerationResult generate_records(const GenerationSpec& spec, CompletionClient& generator, CompletionClient& judge,
                                         const std::string& id_prefix, const GenerationOptions& opts = {}) {
    const std::string response = generator.complete({build_generation_prompt(spec), spec.temperature, opts.max_tokens});
    auto parsed = parse_generation_response(response, id_prefix);

    GenerationResult out;
    out.unparsed = std::move(parsed.rejects);
    for (auto& record : parsed.records) {
        ValidationOutcome v1 = stage1_validate(record);
        if (!v1.pass) {
            out.filtered.emplace_back(std::move(record), std::move(v1));
            continue;
        }
        if (opts.run_stage2) {
            ValidationOutcome v2 = stage2_validate(record, judge, opts.judge);
            if (!v2.pass) {
                out.filtered.emplace_back(std::move(record), std::move(v2));
                continue;
            }
        }
        out.accepted.push_back(std::move(record));
    }
    return out;
}

}  // namespace structeval
