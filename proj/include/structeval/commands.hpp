#pragma once

// Report builders behind the command-line subcommands. Everything here is
// callable from tests; tools/structeval.cpp only parses flags and maps
// exceptions to exit codes.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "structeval/complexity.hpp"
#include "structeval/dataset.hpp"
#include "structeval/json.hpp"
#include "structeval/prompts.hpp"
#include "structeval/remote_embedding.hpp"
#include "structeval/schema.hpp"
#include "structeval/similarity.hpp"
#include "structeval/validation.hpp"

namespace structeval::cli {

inline constexpr std::string_view kToolName = "structeval";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kSerializerProfile = "reference: ', ' between elements, ': ' after keys";

inline constexpr std::string_view kEmbeddingEndpointEnv = "STRUCTEVAL_EMBEDDING_ENDPOINT";
inline constexpr std::string_view kCompletionEndpointEnv = "STRUCTEVAL_COMPLETION_ENDPOINT";

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct Config {
    std::string backend = "exact";  // exact | token | remote
    std::size_t parallelism = 1;
    bool lenient_extraction = false;
    EmbeddingConfig embedding;
    CompletionConfig completion;
    JudgeOptions judge;
    ContentOptions content;
    std::optional<GenerationCatalog> catalog;
};

namespace detail {

inline void reject_unknown_keys(const JsonValue& obj, std::initializer_list<std::string_view> known, std::string_view where) {
    for (const auto& [k, v] : obj.as_object()) {
        if (std::find(known.begin(), known.end(), k) == known.end()) {
            throw std::invalid_argument("unknown configuration key \"" + k + "\" in " + std::string(where));
        }
    }
}

inline const JsonValue& expect(const JsonValue& v, JsonType t, std::string_view key) {
    if (v.type() != t) throw std::invalid_argument("configuration key \"" + std::string(key) + "\" must be " + std::string(to_string(t)));
    return v;
}

inline std::size_t positive_int(const JsonValue& v, std::string_view key) {
    expect(v, JsonType::Number, key);
    const auto& d = v.as_number().value;
    if (!d.is_integer() || d.negative || d.is_zero() || d.digits.size() + static_cast<std::size_t>(d.exponent) > 9) {
        throw std::invalid_argument("configuration key \"" + std::string(key) + "\" must be a positive integer");
    }
    return static_cast<std::size_t>(v.as_double());
}

inline std::size_t non_negative_int(const JsonValue& v, std::string_view key) {
    expect(v, JsonType::Number, key);
    if (v.as_number().value.is_zero()) return 0;
    return positive_int(v, key);
}

}  // namespace detail

/// Applies a configuration object on top of `cfg`. Unknown keys are errors
/// (std::invalid_argument) so that typos do not silently fall back to defaults.
inline void apply_config(Config& cfg, const JsonValue& raw) {
    using detail::expect;
    if (!raw.is_object()) throw std::invalid_argument("configuration must be a JSON object");
    detail::reject_unknown_keys(raw, {"backend", "parallelism", "lenient_extraction", "embedding", "completion", "complexity", "catalog"},
                                "configuration");
    if (const auto* v = raw.find("backend")) cfg.backend = expect(*v, JsonType::String, "backend").as_string();
    if (const auto* v = raw.find("parallelism")) cfg.parallelism = detail::positive_int(*v, "parallelism");
    if (const auto* v = raw.find("lenient_extraction")) cfg.lenient_extraction = expect(*v, JsonType::Bool, "lenient_extraction").as_bool();
    if (const auto* e = raw.find("embedding")) {
        expect(*e, JsonType::Object, "embedding");
        detail::reject_unknown_keys(*e, {"endpoint", "timeout_ms", "batch_size", "max_in_flight", "on_error"}, "embedding");
        if (const auto* v = e->find("endpoint")) cfg.embedding.endpoint = expect(*v, JsonType::String, "embedding.endpoint").as_string();
        if (const auto* v = e->find("timeout_ms")) cfg.embedding.timeout = std::chrono::milliseconds(detail::positive_int(*v, "embedding.timeout_ms"));
        if (const auto* v = e->find("batch_size")) cfg.embedding.batch_size = detail::positive_int(*v, "embedding.batch_size");
        if (const auto* v = e->find("max_in_flight")) cfg.embedding.max_in_flight = detail::positive_int(*v, "embedding.max_in_flight");
        if (const auto* v = e->find("on_error")) {
            const auto& s = expect(*v, JsonType::String, "embedding.on_error").as_string();
            if (s == "fail") cfg.embedding.on_error = FailurePolicy::FailHard;
            else if (s == "zero") cfg.embedding.on_error = FailurePolicy::ScoreZero;
            else throw std::invalid_argument("embedding.on_error must be \"fail\" or \"zero\"");
        }
    }
    if (const auto* c = raw.find("completion")) {
        expect(*c, JsonType::Object, "completion");
        detail::reject_unknown_keys(*c, {"endpoint", "timeout_ms", "max_in_flight", "retries", "backoff_ms", "max_tokens", "fail_hard"},
                                    "completion");
        if (const auto* v = c->find("endpoint")) cfg.completion.endpoint = expect(*v, JsonType::String, "completion.endpoint").as_string();
        if (const auto* v = c->find("timeout_ms")) cfg.completion.timeout = std::chrono::milliseconds(detail::positive_int(*v, "completion.timeout_ms"));
        if (const auto* v = c->find("max_in_flight")) cfg.completion.max_in_flight = detail::positive_int(*v, "completion.max_in_flight");
        if (const auto* v = c->find("retries")) cfg.judge.retries = static_cast<int>(detail::non_negative_int(*v, "completion.retries"));
        if (const auto* v = c->find("backoff_ms")) cfg.judge.initial_backoff = std::chrono::milliseconds(detail::non_negative_int(*v, "completion.backoff_ms"));
        if (const auto* v = c->find("max_tokens")) cfg.judge.max_tokens = static_cast<int>(detail::positive_int(*v, "completion.max_tokens"));
        if (const auto* v = c->find("fail_hard")) cfg.judge.fail_hard = expect(*v, JsonType::Bool, "completion.fail_hard").as_bool();
    }
    if (const auto* x = raw.find("complexity")) {
        expect(*x, JsonType::Object, "complexity");
        detail::reject_unknown_keys(*x, {"code_patterns", "brace_pair_is_code"}, "complexity");
        if (const auto* v = x->find("code_patterns")) {
            cfg.content.code_patterns.clear();
            for (const auto& p : expect(*v, JsonType::Array, "complexity.code_patterns").as_array()) {
                cfg.content.code_patterns.push_back(expect(p, JsonType::String, "complexity.code_patterns[]").as_string());
            }
        }
        if (const auto* v = x->find("brace_pair_is_code")) {
            cfg.content.brace_pair_is_code = expect(*v, JsonType::Bool, "complexity.brace_pair_is_code").as_bool();
        }
    }
    if (const auto* v = raw.find("catalog")) cfg.catalog = parse_catalog(*v);
}

/// Defaults, then the optional config file, then environment overrides for
/// service endpoints. Command-line flags are applied by the caller afterwards.
inline Config load_config(const std::optional<std::string>& path) {
    Config cfg;
    if (path) {
        const std::string text = structeval::detail::read_file(*path);
        JsonValue raw;
        try {
            raw = parse_strict(text);
        } catch (const ParseError& e) {
            throw std::invalid_argument("configuration file " + *path + " is not JSON: " + e.what());
        }
        apply_config(cfg, raw);
    }
    if (const char* env = std::getenv(std::string(kEmbeddingEndpointEnv).c_str()); env && *env) cfg.embedding.endpoint = env;
    if (const char* env = std::getenv(std::string(kCompletionEndpointEnv).c_str()); env && *env) cfg.completion.endpoint = env;
    return cfg;
}

inline std::unique_ptr<SimilarityBackend> make_backend(const Config& cfg) {
    if (cfg.backend == "exact") return std::make_unique<ExactBackend>();
    if (cfg.backend == "token") return std::make_unique<TokenOverlapBackend>();
    if (cfg.backend == "remote") {
        if (cfg.embedding.endpoint.empty()) throw std::invalid_argument("remote backend needs embedding.endpoint");
        return std::make_unique<RemoteEmbeddingBackend>(cfg.embedding);
    }
    throw std::invalid_argument("unknown backend \"" + cfg.backend + "\" (expected exact, token or remote)");
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

/// Runs `task(i)` for i in [0, n) on up to `workers` threads. The first
/// exception thrown by any task is rethrown after all workers stop.
template <typename F>
void parallel_for(std::size_t n, std::size_t workers, F&& task) {
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                while (!stop.load()) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n) return;
                    try {
                        task(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                        stop.store(true);
                    }
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

/// Rounds `value` (a percentage) half-up to one decimal and prints it.
inline std::string format_pct(double value) {
    // The epsilon absorbs binary representation error such as 12.25 stored as 12.2499999.
    const double tenths = std::floor(value * 10.0 + 0.5 + 1e-9);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", tenths / 10.0);
    return buf;
}

/// 100 * count / n rounded half-up to one decimal, in exact integer arithmetic.
inline std::string format_ratio_pct(std::size_t count, std::size_t n) {
    if (n == 0) return "0.0";
    const auto tenths = (2000 * static_cast<unsigned long long>(count) + n) / (2 * static_cast<unsigned long long>(n));
    return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

inline JsonValue pct_value(const std::string& formatted) { return JsonValue::number(formatted); }

/// Display name of a dataset file: its stem.
inline std::string dataset_name(const std::string& path) { return std::filesystem::path(path).stem().string(); }

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed for " + path);
}

inline std::string pad(std::string s, std::size_t width) {
    const auto len = utf8::code_points(s).size();
    if (len < width) s.append(width - len, ' ');
    return s;
}

inline JsonValue rejects_json(const std::vector<RejectedLine>& rejects) {
    JsonValue::Array out;
    for (const auto& r : rejects) {
        out.push_back(JsonValue::object({
            {"line", static_cast<std::uint64_t>(r.line)},
            {"code", std::string(to_string(r.code))},
            {"field", r.field},
            {"reason", r.reason},
        }));
    }
    return JsonValue(std::move(out));
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

struct NamedDataset {
    std::string name;
    std::vector<DatasetRecord> records;
};

struct InstanceResult {
    std::string dataset;
    std::string id;
    InstanceScore score;
    std::vector<std::string> flags;
    std::vector<Violation> violations;
};

struct DatasetSummary {
    std::size_t n = 0;
    std::size_t schema_ok = 0;
    double mean_sim_c = 0.0;
    std::size_t missing_predictions = 0;
};

struct EvalReport {
    std::vector<InstanceResult> per_instance;
    std::vector<std::pair<std::string, DatasetSummary>> per_dataset;  // input order
    std::string backend;
    bool lenient_extraction = false;
};

struct EvalOptions {
    std::size_t parallelism = 1;
    bool lenient_extraction = false;
};

/// Scores one record against one raw prediction (std::nullopt = no prediction).
inline InstanceResult score_instance(const DatasetRecord& record, const std::optional<std::string>& prediction,
                                     const SimilarityBackend& backend, bool lenient) {
    InstanceResult r;
    r.id = record.id;
    if (!prediction) {
        r.flags.push_back("missing_prediction");
        r.score.gold_leaves = flatten(record.gold).size();
        return r;
    }

    std::optional<SchemaNode> schema;
    try {
        schema = parse_schema(record.json_schema);
    } catch (const SchemaError&) {
        r.flags.push_back("schema_invalid");
    }
    if (schema) {
        const ConformanceResult c = check_response(*prediction, *schema);
        r.score.schema_ok = c.ok;
        r.violations = c.violations;
    }

    std::optional<JsonValue> parsed;
    try {
        parsed = parse_strict(*prediction);
    } catch (const ParseError&) {
        r.flags.push_back("prediction_unparsable");
        if (lenient) {
            try {
                parsed = extract_lenient(*prediction).value;
                r.flags.push_back("content_from_lenient_extraction");
            } catch (const NotFound&) {
            }
        }
    }
    const bool schema_ok = r.score.schema_ok;
    if (parsed) {
        r.score = content_similarity(record.gold, *parsed, backend);
    } else {
        r.score = InstanceScore{};
        r.score.gold_leaves = flatten(record.gold).size();
    }
    r.score.schema_ok = schema_ok;
    return r;
}

/// Joins each dataset with its predictions by id and scores every record.
/// A prediction id absent from its dataset is a JoinError; a record without
/// a prediction scores as a failure and is flagged. Results keep input order
/// regardless of parallelism.
inline EvalReport evaluate(const std::vector<NamedDataset>& datasets,
                           const std::vector<std::vector<PredictionRecord>>& predictions,
                           const SimilarityBackend& backend, const EvalOptions& opts = {}) {
    if (datasets.size() != predictions.size()) throw JoinError("each dataset needs exactly one prediction file");

    struct Job {
        const DatasetRecord* record;
        std::optional<std::string> prediction;
        std::string dataset;
    };
    std::vector<Job> jobs;
    for (std::size_t d = 0; d < datasets.size(); ++d) {
        std::map<std::string, const std::string*> by_id;
        for (const auto& p : predictions[d]) by_id.emplace(p.id, &p.prediction_text);
        std::set<std::string> known;
        for (const auto& r : datasets[d].records) known.insert(r.id);
        for (const auto& p : predictions[d]) {
            if (!known.count(p.id)) {
                throw JoinError("prediction id \"" + p.id + "\" has no record in dataset \"" + datasets[d].name + "\"");
            }
        }
        for (const auto& r : datasets[d].records) {
            auto it = by_id.find(r.id);
            jobs.push_back(Job{&r, it == by_id.end() ? std::nullopt : std::optional<std::string>(*it->second), datasets[d].name});
        }
    }

    EvalReport report;
    report.backend = backend.name();
    report.lenient_extraction = opts.lenient_extraction;
    report.per_instance.resize(jobs.size());
    parallel_for(jobs.size(), opts.parallelism, [&](std::size_t i) {
        report.per_instance[i] = score_instance(*jobs[i].record, jobs[i].prediction, backend, opts.lenient_extraction);
        report.per_instance[i].dataset = jobs[i].dataset;
    });

    for (const auto& ds : datasets) {
        DatasetSummary s;
        double sum = 0.0;
        for (const auto& r : report.per_instance) {
            if (r.dataset != ds.name) continue;
            ++s.n;
            if (r.score.schema_ok) ++s.schema_ok;
            sum += r.score.sim_c;
            if (std::find(r.flags.begin(), r.flags.end(), "missing_prediction") != r.flags.end()) ++s.missing_predictions;
        }
        s.mean_sim_c = s.n ? sum / static_cast<double>(s.n) : 0.0;
        report.per_dataset.emplace_back(ds.name, s);
    }
    return report;
}

/// Dataset-level averages give every dataset equal weight, whatever its size.
inline std::pair<double, double> equal_weight_average(const EvalReport& report) {
    if (report.per_dataset.empty()) return {0.0, 0.0};
    double sa = 0.0, cs = 0.0;
    for (const auto& [name, s] : report.per_dataset) {
        sa += s.n ? static_cast<double>(s.schema_ok) / static_cast<double>(s.n) : 0.0;
        cs += s.mean_sim_c;
    }
    const auto k = static_cast<double>(report.per_dataset.size());
    return {sa / k, cs / k};
}

inline JsonValue to_json(const EvalReport& report) {
    JsonValue::Array instances;
    for (const auto& r : report.per_instance) {
        JsonValue::Array flags(r.flags.begin(), r.flags.end());
        JsonValue::Array violations;
        for (const auto& v : r.violations) {
            violations.push_back(JsonValue::object({
                {"path", v.path.to_string()},
                {"code", std::string(to_string(v.code))},
                {"detail", v.detail},
            }));
        }
        instances.push_back(JsonValue::object({
            {"dataset", r.dataset},
            {"id", r.id},
            {"schema_ok", r.score.schema_ok},
            {"sim_p", JsonValue::number(r.score.sim_p)},
            {"sim_r", JsonValue::number(r.score.sim_r)},
            {"sim_c", JsonValue::number(r.score.sim_c)},
            {"matched_pairs", static_cast<std::uint64_t>(r.score.matched_pairs)},
            {"gold_leaves", static_cast<std::uint64_t>(r.score.gold_leaves)},
            {"pred_leaves", static_cast<std::uint64_t>(r.score.pred_leaves)},
            {"flags", JsonValue(std::move(flags))},
            {"violations", JsonValue(std::move(violations))},
        }));
    }
    JsonValue per_dataset = JsonValue::object();
    for (const auto& [name, s] : report.per_dataset) {
        const double sa = s.n ? static_cast<double>(s.schema_ok) / static_cast<double>(s.n) : 0.0;
        per_dataset.set(name, JsonValue::object({
                                  {"n", static_cast<std::uint64_t>(s.n)},
                                  {"schema_accuracy_pct", pct_value(format_ratio_pct(s.schema_ok, s.n))},
                                  {"content_similarity_pct", pct_value(format_pct(100.0 * s.mean_sim_c))},
                                  {"schema_accuracy_raw", JsonValue::number(sa)},
                                  {"content_similarity_raw", JsonValue::number(s.mean_sim_c)},
                                  {"missing_predictions", static_cast<std::uint64_t>(s.missing_predictions)},
                              }));
    }
    const auto [avg_sa, avg_cs] = equal_weight_average(report);
    return JsonValue::object({
        {"tool", JsonValue::object({{"name", std::string(kToolName)}, {"version", std::string(kToolVersion)}})},
        {"config", JsonValue::object({
                       {"backend", report.backend},
                       {"serializer_profile", std::string(kSerializerProfile)},
                       {"lenient_extraction", report.lenient_extraction},
                   })},
        {"per_dataset", std::move(per_dataset)},
        {"average", JsonValue::object({
                        {"weighting", "equal weight per dataset"},
                        {"schema_accuracy_pct", pct_value(format_pct(100.0 * avg_sa))},
                        {"content_similarity_pct", pct_value(format_pct(100.0 * avg_cs))},
                    })},
        {"per_instance", JsonValue(std::move(instances))},
    });
}

/// Two rows (schema accuracy, content similarity) with one column per
/// dataset plus the equal-weight average.
inline std::string render_table(const EvalReport& report) {
    std::vector<std::string> header{"Metric (%)"};
    std::vector<std::string> sa_row{"Schema Accuracy"};
    std::vector<std::string> cs_row{"Content Similarity"};
    std::vector<std::string> n_row{"n"};
    for (const auto& [name, s] : report.per_dataset) {
        header.push_back(name);
        sa_row.push_back(format_ratio_pct(s.schema_ok, s.n));
        cs_row.push_back(format_pct(100.0 * s.mean_sim_c));
        n_row.push_back(std::to_string(s.n));
    }
    const auto [avg_sa, avg_cs] = equal_weight_average(report);
    header.push_back("Avg");
    sa_row.push_back(format_pct(100.0 * avg_sa));
    cs_row.push_back(format_pct(100.0 * avg_cs));
    n_row.push_back("-");

    std::vector<std::size_t> widths(header.size(), 0);
    for (const auto* row : {&header, &sa_row, &cs_row, &n_row}) {
        for (std::size_t i = 0; i < row->size(); ++i) widths[i] = std::max(widths[i], utf8::code_points((*row)[i]).size());
    }
    std::string out;
    for (const auto* row : {&header, &sa_row, &cs_row, &n_row}) {
        std::string line;
        for (std::size_t i = 0; i < row->size(); ++i) {
            if (i > 0) line += "  ";
            line += pad((*row)[i], widths[i]);
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + '\n';
    }
    out += "Avg weights every dataset equally. Backend: " + report.backend + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// complexity
// ---------------------------------------------------------------------------

struct ComplexityReport {
    struct Row {
        std::string dataset;
        std::string id;
        ComplexityProfile profile;
    };
    struct Means {
        std::size_t n = 0;
        double depth = 0, keys = 0, size_bytes = 0, elements = 0, cyclomatic = 0, schema_complexity = 0, content_complexity = 0;
    };
    std::vector<Row> rows;
    std::vector<std::pair<std::string, Means>> per_dataset;
    std::string code_patterns_version{kCodePatternVersion};
};

/// "code-patterns/v1" for the stock detection rules, "custom" once configuration changes them.
inline std::string code_patterns_version(const ContentOptions& opts) {
    const ContentOptions stock;
    const bool is_stock = opts.code_patterns == stock.code_patterns && opts.brace_pair_is_code == stock.brace_pair_is_code;
    return is_stock ? std::string(kCodePatternVersion) : "custom";
}

/// Profiles every gold output and averages each dimension per dataset.
/// An empty dataset is a FormatError.
inline ComplexityReport complexity_report(const std::vector<NamedDataset>& datasets, const ContentOptions& opts = {}) {
    ComplexityReport report;
    report.code_patterns_version = code_patterns_version(opts);
    for (const auto& ds : datasets) {
        if (ds.records.empty()) throw FormatError("dataset \"" + ds.name + "\" has no records");
        ComplexityReport::Means m;
        for (const auto& r : ds.records) {
            const ComplexityProfile p = analyze(r.gold, opts);
            report.rows.push_back({ds.name, r.id, p});
            ++m.n;
            m.depth += static_cast<double>(p.depth);
            m.keys += static_cast<double>(p.keys);
            m.size_bytes += static_cast<double>(p.size_bytes);
            m.elements += static_cast<double>(p.elements);
            m.cyclomatic += static_cast<double>(p.cyclomatic);
            m.schema_complexity += p.schema_complexity;
            m.content_complexity += p.content_complexity;
        }
        const auto n = static_cast<double>(m.n);
        for (double* x : {&m.depth, &m.keys, &m.size_bytes, &m.elements, &m.cyclomatic, &m.schema_complexity, &m.content_complexity}) {
            *x /= n;
        }
        report.per_dataset.emplace_back(ds.name, m);
    }
    return report;
}

inline JsonValue to_json(const ComplexityReport& report) {
    JsonValue::Array rows;
    for (const auto& r : report.rows) {
        rows.push_back(JsonValue::object({
            {"dataset", r.dataset},
            {"id", r.id},
            {"depth", r.profile.depth},
            {"keys", r.profile.keys},
            {"size_bytes", r.profile.size_bytes},
            {"elements", r.profile.elements},
            {"cyclomatic", r.profile.cyclomatic},
            {"schema_complexity", JsonValue::number(r.profile.schema_complexity)},
            {"content_complexity", JsonValue::number(r.profile.content_complexity)},
        }));
    }
    JsonValue means = JsonValue::object();
    for (const auto& [name, m] : report.per_dataset) {
        means.set(name, JsonValue::object({
                            {"n", static_cast<std::uint64_t>(m.n)},
                            {"depth", JsonValue::number(m.depth)},
                            {"keys", JsonValue::number(m.keys)},
                            {"size_bytes", JsonValue::number(m.size_bytes)},
                            {"elements", JsonValue::number(m.elements)},
                            {"cyclomatic", JsonValue::number(m.cyclomatic)},
                            {"schema_complexity", JsonValue::number(m.schema_complexity)},
                            {"content_complexity", JsonValue::number(m.content_complexity)},
                        }));
    }
    return JsonValue::object({
        {"tool", JsonValue::object({{"name", std::string(kToolName)}, {"version", std::string(kToolVersion)}})},
        {"serializer_profile", std::string(kSerializerProfile)},
        {"code_patterns_version", report.code_patterns_version},
        {"per_dataset_means", std::move(means)},
        {"per_record", JsonValue(std::move(rows))},
    });
}

inline std::string render_table(const ComplexityReport& report) {
    const std::vector<std::string> header{"dataset", "n", "depth", "keys", "bytes", "elements", "cyclomatic", "schema_cx", "content_cx"};
    std::vector<std::vector<std::string>> rows{header};
    const auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };
    for (const auto& [name, m] : report.per_dataset) {
        rows.push_back({name, std::to_string(m.n), num(m.depth), num(m.keys), num(m.size_bytes), num(m.elements),
                        num(m.cyclomatic), num(m.schema_complexity), num(m.content_complexity)});
    }
    std::vector<std::size_t> widths(header.size(), 0);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], utf8::code_points(row[i]).size());
    }
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) line += "  ";
            line += pad(row[i], widths[i]);
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

struct ValidationReport {
    int stage = 1;
    std::vector<std::pair<std::string, ValidationOutcome>> outcomes;  // (id, outcome), input order
    std::vector<RejectedLine> rejects;
};

/// Stage 1 on every record; with stage 2, records passing stage 1 are then
/// sent to the judge. Records failing stage 1 keep their stage-1 outcome.
inline ValidationReport validate(const LoadResult<DatasetRecord>& dataset, int stage, CompletionClient* judge,
                                 const JudgeOptions& judge_opts = {}, std::size_t parallelism = 1) {
    if (stage != 1 && stage != 2) throw std::invalid_argument("stage must be 1 or 2");
    if (stage == 2 && judge == nullptr) throw std::invalid_argument("stage 2 needs a completion client");
    ValidationReport report;
    report.stage = stage;
    report.rejects = dataset.rejects;
    report.outcomes.resize(dataset.records.size());
    parallel_for(dataset.records.size(), parallelism, [&](std::size_t i) {
        const auto& record = dataset.records[i];
        ValidationOutcome outcome = stage1_validate(record);
        if (stage == 2 && outcome.pass) outcome = stage2_validate(record, *judge, judge_opts);
        report.outcomes[i] = {record.id, std::move(outcome)};
    });
    return report;
}

inline JsonValue to_json(const ValidationReport& report) {
    std::map<std::string, std::uint64_t> counts;
    std::size_t passed = 0;
    JsonValue::Array records;
    for (const auto& [id, o] : report.outcomes) {
        if (o.pass) ++passed;
        JsonValue::Array codes;
        for (const auto c : o.codes) {
            codes.emplace_back(std::string(to_string(c)));
            ++counts[std::string(to_string(c))];
        }
        JsonValue::Array details(o.details.begin(), o.details.end());
        JsonValue entry = JsonValue::object({
            {"id", id},
            {"stage", o.stage},
            {"pass", o.pass},
            {"codes", JsonValue(std::move(codes))},
            {"details", JsonValue(std::move(details))},
        });
        if (o.stage == 2) entry.set("retries", o.retries);
        records.push_back(std::move(entry));
    }
    for (const auto& r : report.rejects) ++counts[std::string(to_string(r.code))];
    JsonValue counts_json = JsonValue::object();
    for (const auto& [code, n] : counts) counts_json.set(code, n);
    const std::size_t total = report.outcomes.size() + report.rejects.size();
    return JsonValue::object({
        {"tool", JsonValue::object({{"name", std::string(kToolName)}, {"version", std::string(kToolVersion)}})},
        {"stage", report.stage},
        {"total_lines", static_cast<std::uint64_t>(total)},
        {"passed", static_cast<std::uint64_t>(passed)},
        {"pass_pct", pct_value(format_ratio_pct(passed, total))},
        {"code_counts", std::move(counts_json)},
        {"records", JsonValue(std::move(records))},
        {"rejected_lines", rejects_json(report.rejects)},
    });
}

// ---------------------------------------------------------------------------
// prompts
// ---------------------------------------------------------------------------

enum class PromptKind { Convert, Validate, Generate };

inline PromptKind parse_prompt_kind(std::string_view s) {
    if (s == "convert") return PromptKind::Convert;
    if (s == "validate") return PromptKind::Validate;
    if (s == "generate") return PromptKind::Generate;
    throw std::invalid_argument("unknown prompt kind \"" + std::string(s) + "\" (expected convert, validate or generate)");
}

struct PromptOutput {
    std::string id;
    std::string prompt;
    std::optional<GenerationSpec> spec;
};

/// convert / validate: one prompt per record (or only `only_id`).
/// generate: one prompt sampled with `seed`, drawing demonstrations from the
/// records that pass stage 1.
inline std::vector<PromptOutput> build_prompts(PromptKind kind, const std::vector<DatasetRecord>& records,
                                               const std::optional<std::string>& only_id, const GenerationCatalog& catalog,
                                               std::uint64_t seed) {
    std::vector<PromptOutput> out;
    if (kind == PromptKind::Generate) {
        std::vector<DatasetRecord> pool;
        for (const auto& r : records) {
            if (stage1_validate(r).pass) pool.push_back(r);
        }
        GenerationSpec spec = sample_generation_spec(catalog, pool, seed);
        out.push_back({"seed-" + std::to_string(seed), build_generation_prompt(spec), std::move(spec)});
        return out;
    }
    for (const auto& r : records) {
        if (only_id && r.id != *only_id) continue;
        out.push_back({r.id, kind == PromptKind::Convert ? build_conversion_prompt(r.input_text, r.json_schema) : build_validation_prompt(r),
                       std::nullopt});
    }
    if (only_id && out.empty()) throw JoinError("no record with id \"" + *only_id + "\"");
    return out;
}

/// Text layout: prompts separated by a marker line naming the next record.
/// The file starts with the first prompt and ends with a newline.
inline std::string render_prompts_text(const std::vector<PromptOutput>& prompts) {
    std::string out;
    for (std::size_t i = 0; i < prompts.size(); ++i) {
        if (i > 0) out += "\n----- next prompt: id=" + prompts[i].id + " -----\n\n";
        out += prompts[i].prompt;
        out += '\n';
    }
    return out;
}

inline JsonValue spec_json(const GenerationSpec& spec) {
    JsonValue::Array demo_ids;
    for (const auto& d : spec.demonstrations) demo_ids.emplace_back(d.id);
    return JsonValue::object({
        {"industry_vertical", spec.industry_vertical},
        {"json_complexity", spec.json_complexity},
        {"text_length_style", spec.text_length_style},
        {"genre", spec.genre},
        {"text_type", spec.text_type},
        {"temperature", JsonValue::number(spec.temperature)},
        {"demonstration_ids", JsonValue(std::move(demo_ids))},
    });
}

/// JSONL layout: one `{"id", "prompt"[, "spec"]}` object per line.
inline std::string render_prompts_jsonl(const std::vector<PromptOutput>& prompts) {
    std::string out;
    for (const auto& p : prompts) {
        JsonValue line = JsonValue::object({{"id", p.id}, {"prompt", p.prompt}});
        if (p.spec) line.set("spec", spec_json(*p.spec));
        out += serialize_canonical(line) + '\n';
    }
    return out;
}

}  // namespace structeval::cli
