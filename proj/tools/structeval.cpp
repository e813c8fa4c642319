// structeval: evaluate, profile, validate and build prompts for JSON outputs.
//
// Exit codes: 0 success, 1 usage error, 2 input format error, 3 external-service failure.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "structeval/commands.hpp"

namespace {

using namespace structeval;
namespace sc = structeval::cli;

struct Common {
    std::vector<std::string> datasets;
    std::optional<std::string> out;
    std::optional<std::string> config;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--dataset", c.datasets, "dataset JSONL file (repeatable)")->required();
    app->add_option("--out", c.out, "output file (default: stdout)");
    app->add_option("--config", c.config, "JSON configuration file");
}

void emit(const std::optional<std::string>& out, const std::string& content) {
    if (out) {
        sc::write_text_file(*out, content);
    } else {
        std::cout << content;
    }
}

void warn_rejects(const std::string& path, const std::vector<RejectedLine>& rejects) {
    for (const auto& r : rejects) {
        std::cerr << path << ":" << r.line << ": " << to_string(r.code) << ": " << r.reason << "\n";
    }
}

std::vector<sc::NamedDataset> load_named(const std::vector<std::string>& paths) {
    std::vector<sc::NamedDataset> out;
    for (const auto& p : paths) {
        auto loaded = load_dataset(p);
        warn_rejects(p, loaded.rejects);
        out.push_back({sc::dataset_name(p), std::move(loaded.records)});
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evaluate structured JSON outputs of language models"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(sc::kToolVersion));

    Common ev_common, cx_common, va_common, pr_common;

    auto* evaluate = app.add_subcommand("evaluate", "score predictions: schema accuracy and content similarity");
    add_common(evaluate, ev_common);
    std::vector<std::string> predictions;
    std::optional<std::string> backend;
    std::optional<std::size_t> ev_parallelism;
    std::optional<std::string> table_out;
    bool lenient = false;
    evaluate->add_option("--predictions", predictions, "prediction JSONL file, one per --dataset, same order")->required();
    evaluate->add_option("--backend", backend, "similarity backend: exact, token or remote");
    evaluate->add_option("--parallelism", ev_parallelism, "worker threads")->check(CLI::PositiveNumber);
    evaluate->add_option("--table", table_out, "also write the aligned text table here");
    evaluate->add_flag("--lenient", lenient, "score content of the first JSON object found in unparsable predictions");

    auto* complexity = app.add_subcommand("complexity", "profile gold outputs along seven complexity dimensions");
    add_common(complexity, cx_common);
    std::optional<std::string> cx_table_out;
    complexity->add_option("--table", cx_table_out, "also write the aligned text table here");

    auto* validate = app.add_subcommand("validate", "run stage-1 (format) or stage-2 (judge) validation");
    add_common(validate, va_common);
    int stage = 1;
    std::optional<std::size_t> va_parallelism;
    validate->add_option("--stage", stage, "1 or 2")->check(CLI::IsMember({1, 2}));
    validate->add_option("--parallelism", va_parallelism, "worker threads")->check(CLI::PositiveNumber);

    auto* prompts = app.add_subcommand("prompts", "assemble conversion, validation or generation prompts");
    add_common(prompts, pr_common);
    std::string kind;
    std::uint64_t seed = 0;
    std::optional<std::string> only_id;
    std::string format = "text";
    prompts->add_option("--kind", kind, "convert, validate or generate")->required()->check(CLI::IsMember({"convert", "validate", "generate"}));
    prompts->add_option("--seed", seed, "sampling seed for --kind generate");
    prompts->add_option("--id", only_id, "only this record");
    prompts->add_option("--format", format, "text or jsonl")->check(CLI::IsMember({"text", "jsonl"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*evaluate) {
            sc::Config cfg = sc::load_config(ev_common.config);
            if (backend) cfg.backend = *backend;
            if (ev_parallelism) cfg.parallelism = *ev_parallelism;
            if (lenient) cfg.lenient_extraction = true;
            if (predictions.size() != ev_common.datasets.size()) {
                std::cerr << "error: give one --predictions file per --dataset\n";
                return 1;
            }
            const auto datasets = load_named(ev_common.datasets);
            std::vector<std::vector<PredictionRecord>> preds;
            for (const auto& p : predictions) {
                auto loaded = load_predictions(p);
                warn_rejects(p, loaded.rejects);
                preds.push_back(std::move(loaded.records));
            }
            const auto scorer = sc::make_backend(cfg);
            const auto report = sc::evaluate(datasets, preds, *scorer, {cfg.parallelism, cfg.lenient_extraction});
            emit(ev_common.out, serialize_pretty(sc::to_json(report)) + "\n");
            const std::string table = sc::render_table(report);
            if (table_out) sc::write_text_file(*table_out, table);
            if (ev_common.out) std::cout << table;
        } else if (*complexity) {
            const sc::Config cfg = sc::load_config(cx_common.config);
            const auto report = sc::complexity_report(load_named(cx_common.datasets), cfg.content);
            emit(cx_common.out, serialize_pretty(sc::to_json(report)) + "\n");
            const std::string table = sc::render_table(report);
            if (cx_table_out) sc::write_text_file(*cx_table_out, table);
            if (cx_common.out) std::cout << table;
        } else if (*validate) {
            sc::Config cfg = sc::load_config(va_common.config);
            if (va_parallelism) cfg.parallelism = *va_parallelism;
            std::unique_ptr<CompletionClient> judge;
            if (stage == 2) {
                if (cfg.completion.endpoint.empty()) {
                    std::cerr << "error: stage 2 needs completion.endpoint (config) or "
                              << sc::kCompletionEndpointEnv << "\n";
                    return 1;
                }
                judge = std::make_unique<HttpCompletionClient>(cfg.completion);
            }
            JsonValue::Array reports;
            for (const auto& path : va_common.datasets) {
                const auto loaded = load_dataset(path);
                JsonValue r = sc::to_json(sc::validate(loaded, stage, judge.get(), cfg.judge, cfg.parallelism));
                r.set("dataset", sc::dataset_name(path));
                reports.push_back(std::move(r));
            }
            const JsonValue out = reports.size() == 1 ? reports.front() : JsonValue(std::move(reports));
            emit(va_common.out, serialize_pretty(out) + "\n");
        } else if (*prompts) {
            const sc::Config cfg = sc::load_config(pr_common.config);
            std::vector<DatasetRecord> records;
            for (const auto& path : pr_common.datasets) {
                auto loaded = load_dataset(path);
                warn_rejects(path, loaded.rejects);
                for (auto& r : loaded.records) records.push_back(std::move(r));
            }
            const auto built = sc::build_prompts(sc::parse_prompt_kind(kind), records, only_id,
                                                 cfg.catalog ? *cfg.catalog : default_catalog(), seed);
            emit(pr_common.out, format == "jsonl" ? sc::render_prompts_jsonl(built) : sc::render_prompts_text(built));
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const TransportError& e) {
        std::cerr << "service error: " << e.what() << "\n";
        return 3;
    } catch (const MalformedResponse& e) {
        std::cerr << "service error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        // IoError, FormatError, JoinError, ParseError, SchemaError, CatalogError
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
