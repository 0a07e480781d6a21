// Command surface: translate / judge / bias-report / qe-export /
// qe-score-report / delta-report / validate. Summaries go to stdout,
// diagnostics to stderr. Exit codes: 0 success, 1 partial failures,
// 2 fatal config/auth/usage errors.

#include "mtforge/core/error.hpp"
#include "mtforge/core/serde.hpp"
#include "mtforge/eval/evaluate.hpp"
#include "mtforge/llm/http_transport.hpp"
#include "mtforge/llm/mock.hpp"
#include "mtforge/pipeline/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace mtforge {
namespace {

// ---------------------------------------------------------------- config

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"run",
     {"mode", "input", "output", "checkpoint", "concurrency", "schema_map",
      "prompt_pack", "benchmark_name"}},
    {"method",
     {"name", "n", "p", "check", "correction", "sample_temperature",
      "judge_temperature"}},
    {"pair", {"source", "target", "target_display_name"}},
    {"client",
     {"backend", "endpoint_url", "api_key_env", "model", "requests_per_minute",
      "max_retries", "base_backoff_ms", "timeout_ms"}},
};

void check_known_keys(const Json& config) {
    for (auto section = config.begin(); section != config.end(); ++section) {
        auto known = kKnownKeys.find(section.key());
        if (known == kKnownKeys.end())
            throw Error(ErrorCode::Config, "unknown config section '" + section.key() + "'");
        for (auto entry = section.value().begin(); entry != section.value().end(); ++entry) {
            if (!known->second.count(entry.key()))
                throw Error(ErrorCode::Config, "unknown config key '" + section.key() +
                                                   "." + entry.key() + "'");
        }
    }
}

Json load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Config, "cannot open config " + path);
    Json config = Json::parse(in, nullptr, false);
    if (config.is_discarded() || !config.is_object())
        throw Error(ErrorCode::Config, "config is not a JSON object: " + path);

    for (const std::string& assignment : overrides) {
        size_t eq = assignment.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::Config, "--set expects key=value, got '" + assignment + "'");
        const std::string dotted = assignment.substr(0, eq);
        const std::string raw_value = assignment.substr(eq + 1);
        size_t dot = dotted.find('.');
        if (dot == std::string::npos)
            throw Error(ErrorCode::Config, "--set key must be section.key, got '" + dotted + "'");
        const std::string section = dotted.substr(0, dot);
        const std::string key = dotted.substr(dot + 1);
        Json value = Json::parse(raw_value, nullptr, false);
        if (value.is_discarded()) value = raw_value; // plain string
        // schema_map entries are free-form: run.schema_map.answers=choices
        if (section == "run" && key.rfind("schema_map.", 0) == 0) {
            config["run"]["schema_map"][key.substr(11)] = value;
        } else {
            config[section][key] = value;
        }
    }
    check_known_keys(config);
    return config;
}

RunConfig run_config_from_json(const Json& config) {
    RunConfig rc;
    const Json run = config.value("run", Json::object());
    const std::string mode = run.value("mode", std::string("benchmark"));
    if (mode == "dataset") rc.mode = RunMode::Dataset;
    else if (mode == "benchmark") rc.mode = RunMode::Benchmark;
    else throw Error(ErrorCode::Config, "run.mode must be 'dataset' or 'benchmark'");
    rc.input_path = run.value("input", std::string());
    rc.output_path = run.value("output", std::string());
    rc.checkpoint_path = run.value("checkpoint", std::string());
    rc.concurrency = run.value("concurrency", 1);
    rc.prompt_pack_path = run.value("prompt_pack", std::string());
    rc.benchmark_name = run.value("benchmark_name", std::string());
    if (run.contains("schema_map"))
        for (auto it = run["schema_map"].begin(); it != run["schema_map"].end(); ++it)
            rc.schema_map[it.key()] = it.value().is_string()
                                          ? it.value().get<std::string>()
                                          : it.value().dump();

    const Json method = config.value("method", Json::object());
    rc.method_config.method = method_from_name(method.value("name", std::string("sc")));
    rc.method_config.n = method.value("n", 1);
    rc.method_config.p = method.value("p", 1);
    rc.method_config.check = method.value("check", false);
    rc.method_config.correction = method.value("correction", true);
    rc.method_config.sample_temperature = method.value("sample_temperature", 0.7);
    rc.method_config.judge_temperature = method.value("judge_temperature", 0.0);

    const Json pair = config.value("pair", Json::object());
    rc.pair.source = pair.value("source", std::string("en"));
    rc.pair.target = pair.value("target", std::string());
    rc.pair.target_display_name = pair.value("target_display_name", std::string());

    const Json client = config.value("client", Json::object());
    rc.client_config.endpoint_url = client.value("endpoint_url", std::string());
    rc.client_config.api_key_env_var =
        client.value("api_key_env", std::string("MTFORGE_API_KEY"));
    rc.client_config.model = client.value("model", std::string());
    rc.client_config.requests_per_minute = client.value("requests_per_minute", 600);
    rc.client_config.max_retries = client.value("max_retries", 3);
    rc.client_config.base_backoff_ms = client.value("base_backoff_ms", 250);
    rc.client_config.timeout_ms = client.value("timeout_ms", 60000);
    return rc;
}

std::shared_ptr<Transport> make_transport(const Json& config, const ClientConfig& cc) {
    const std::string backend =
        config.value("client", Json::object()).value("backend", std::string("http"));
    if (backend == "mock-echo") return MockTransport::responder(echo_responder);
    if (backend == "http") return std::make_shared<HttpTransport>(cc);
    throw Error(ErrorCode::Config, "client.backend must be 'http' or 'mock-echo'");
}

PromptRegistry make_registry(const RunConfig& rc) {
    PromptRegistry registry = PromptRegistry::builtin();
    if (!rc.prompt_pack_path.empty()) registry.load_dir(rc.prompt_pack_path);
    return registry;
}

// ---------------------------------------------------------------- helpers

std::string record_text(const Json& obj) {
    if (obj.contains("text")) return obj["text"].get<std::string>();
    const Json* body = nullptr;
    if (obj.contains("final")) body = &obj["final"];
    else if (obj.contains("question")) body = &obj;
    if (!body) return "";
    std::string text = body->value("question", std::string());
    if (body->contains("answers") && (*body)["answers"].is_array())
        for (const auto& a : (*body)["answers"]) text += "\n" + a.get<std::string>();
    if (body->contains("fields") && (*body)["fields"].is_object()) {
        bool first = true;
        for (auto it = (*body)["fields"].begin(); it != (*body)["fields"].end(); ++it) {
            if (first) { first = false; continue; } // question already holds field 0
            text += "\n" + it.value().get<std::string>();
        }
    }
    return text;
}

std::map<std::string, std::string> read_texts_by_id(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::map<std::string, std::string> texts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json obj = Json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.contains("id")) continue;
        texts[obj["id"].get<std::string>()] = record_text(obj);
    }
    return texts;
}

std::vector<TranslationRecord> read_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::vector<TranslationRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        records.push_back(record_from_line(line));
    }
    return records;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
    out << text;
}

// ---------------------------------------------------------------- commands

int cmd_translate(const Json& config) {
    RunConfig rc = run_config_from_json(config);
    PromptRegistry registry = make_registry(rc);
    LlmClient client(make_transport(config, rc.client_config), rc.client_config);
    RunSummary summary = run(rc, client, registry);
    Json out = {{"total", summary.total},       {"ok", summary.ok},
                {"failed", summary.failed},     {"skipped", summary.skipped},
                {"calls", summary.calls},       {"prompt_tokens", summary.prompt_tokens},
                {"completion_tokens", summary.completion_tokens},
                {"wall_time_s", summary.wall_time_s}};
    std::cout << out.dump(2) << "\n";
    return summary.failed > 0 ? 1 : 0;
}

int cmd_validate(const Json& config) {
    RunConfig rc = run_config_from_json(config);
    auto violations = validate_run_config(rc);
    std::vector<std::string> line_errors;
    if (!rc.input_path.empty()) {
        try {
            auto units = load_units(rc.input_path, rc.mode, rc.schema_map, &line_errors);
            std::cout << "units: " << units.size() << "\n";
        } catch (const Error& e) {
            violations.push_back(e.what());
        }
    }
    if (!rc.prompt_pack_path.empty()) {
        try {
            make_registry(rc);
        } catch (const Error& e) {
            violations.push_back(e.what());
        }
    }
    for (const auto& v : violations) std::cerr << "invalid: " << v << "\n";
    for (const auto& v : line_errors) std::cerr << "invalid: " << v << "\n";
    if (!violations.empty()) return 2;
    if (!line_errors.empty()) return 1;
    std::cout << "config ok\n";
    return 0;
}

int cmd_judge(const Json& config, const std::string& original_path,
              const std::string& a_path, const std::string& b_path, bool both_orders,
              const std::string& json_out) {
    RunConfig rc = run_config_from_json(config);
    PromptRegistry registry = make_registry(rc);
    LlmClient client(make_transport(config, rc.client_config), rc.client_config);

    auto originals = read_texts_by_id(original_path);
    auto a_texts = read_texts_by_id(a_path);
    auto b_texts = read_texts_by_id(b_path);

    std::vector<JudgeVerdict> verdicts;
    for (const auto& [id, original] : originals) {
        auto a = a_texts.find(id);
        auto b = b_texts.find(id);
        if (a == a_texts.end() || b == b_texts.end()) continue;
        verdicts.push_back(
            judge_pair(original, a->second, b->second, client, registry, rc.pair,
                       rc.method_config.judge_temperature));
        if (both_orders) {
            JudgeVerdict swapped =
                judge_pair(original, b->second, a->second, client, registry, rc.pair,
                           rc.method_config.judge_temperature);
            // fold back into A's perspective
            if (swapped.choice == JudgeChoice::APlus) swapped.choice = JudgeChoice::BPlus;
            else if (swapped.choice == JudgeChoice::BPlus) swapped.choice = JudgeChoice::APlus;
            verdicts.push_back(std::move(swapped));
        }
    }
    JudgeTally t = tally(verdicts);
    Json out = {{"wins", t.wins},         {"draws", t.draws},
                {"losses", t.losses},     {"win_rate", t.win_rate},
                {"draw_rate", t.draw_rate}, {"loss_rate", t.loss_rate}};
    std::cout << "wins=" << t.wins << " draws=" << t.draws << " losses=" << t.losses
              << " win_rate=" << t.win_rate << "\n";
    if (!json_out.empty()) write_text(json_out, out.dump(2));
    return 0;
}

int cmd_bias_report(const std::string& records_path, int top_k,
                    const std::string& json_out) {
    auto records = read_records(records_path);
    BiasReport report = bias_report(records, static_cast<size_t>(top_k));

    std::cout << "position  avg_rank  rounds\n";
    for (int pos = 0; pos < report.n; ++pos)
        std::cout << pos + 1 << "  " << report.position_avg_rank[pos] << "  "
                  << report.position_counts[pos] << "\n";
    std::cout << "equal_ranks: " << report.equal_ranks_count << "\n";
    std::cout << "top combinations (ranks by sampling order):\n";
    for (const auto& [combination, count] : report.top_combinations) {
        std::cout << "  (";
        for (size_t i = 0; i < combination.size(); ++i)
            std::cout << (i ? ", " : "") << combination[i];
        std::cout << "): " << count << "\n";
    }

    if (!json_out.empty()) {
        Json j = {{"n", report.n},
                  {"position_avg_rank", report.position_avg_rank},
                  {"position_counts", report.position_counts},
                  {"equal_ranks_count", report.equal_ranks_count},
                  {"total_rounds", report.total_rounds}};
        Json combos = Json::array();
        for (const auto& [combination, count] : report.top_combinations)
            combos.push_back({{"ranks", combination}, {"count", count}});
        j["top_combinations"] = std::move(combos);
        write_text(json_out, j.dump(2));
    }
    return 0;
}

int cmd_qe_export(const std::string& records_path, const std::string& out_path) {
    qe_export(read_records(records_path), out_path);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_qe_score_report(const std::string& scores_path, const std::string& json_out) {
    auto records = read_qe_scores(scores_path);
    std::map<std::pair<std::string, std::string>, std::vector<QERecord>> by_system;
    for (auto& r : records) by_system[{r.system, r.target_lang}].push_back(r);
    Json j = Json::array();
    for (const auto& [key, group] : by_system) {
        const double score = system_score(group);
        std::cout << key.first << " " << key.second << " " << score << " (n="
                  << group.size() << ")\n";
        j.push_back({{"system", key.first},
                     {"target_lang", key.second},
                     {"system_score", score},
                     {"segments", group.size()}});
    }
    if (!json_out.empty()) write_text(json_out, j.dump(2));
    return 0;
}

int cmd_delta_report(const std::string& accuracies_path, const std::string& ours_label,
                     const std::string& other_label, const std::string& json_out) {
    auto rows = read_accuracies(accuracies_path);
    std::map<DeltaKey, double> ours, other;
    for (const auto& row : rows) {
        if (row.source_label == ours_label) ours[row.key] = row.accuracy;
        else if (row.source_label == other_label) other[row.key] = row.accuracy;
    }
    DeltaReport report = delta_report(ours, other);

    auto pct = [](double v) {
        std::ostringstream ss;
        ss << (v >= 0 ? "+" : "") << v << "%";
        return ss.str();
    };
    std::cout << "by benchmark:\n";
    for (const auto& [benchmark, avg] : report.by_benchmark)
        std::cout << "  " << benchmark << ": " << pct(avg) << "\n";
    std::cout << "by language:\n";
    for (const auto& [language, avg] : report.by_language)
        std::cout << "  " << language << ": " << pct(avg) << "\n";
    for (const auto& key : report.missing_in_other)
        std::cerr << "missing in other: " << key.model << "/" << key.benchmark << "/"
                  << key.language << "\n";
    for (const auto& key : report.missing_in_ours)
        std::cerr << "missing in ours: " << key.model << "/" << key.benchmark << "/"
                  << key.language << "\n";

    if (!json_out.empty()) {
        Json j = Json::object();
        Json per_key = Json::array();
        for (const auto& [key, delta] : report.per_key)
            per_key.push_back({{"model", key.model},
                               {"benchmark", key.benchmark},
                               {"language", key.language},
                               {"delta_pp", delta}});
        j["per_key"] = std::move(per_key);
        j["by_benchmark"] = report.by_benchmark;
        j["by_language"] = report.by_language;
        write_text(json_out, j.dump(2));
    }
    return 0;
}

} // namespace
} // namespace mtforge

int main(int argc, char** argv) {
    using namespace mtforge;

    CLI::App app{"mtforge: LLM benchmark/dataset translation and evaluation"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string original_path, a_path, b_path, records_path, out_path, scores_path;
    std::string accuracies_path, ours_label = "ours", other_label = "other";
    std::string json_out;
    bool both_orders = false;
    int top_k = 5;

    auto add_config = [&](CLI::App* cmd, bool required) {
        auto* opt = cmd->add_option("--config", config_path, "JSON config file");
        if (required) opt->required();
        cmd->add_option("--set", overrides, "override, dotted key=value");
    };

    auto* translate = app.add_subcommand("translate", "run the translation pipeline");
    add_config(translate, true);

    auto* validate = app.add_subcommand("validate", "validate config and inputs offline");
    add_config(validate, true);

    auto* judge = app.add_subcommand("judge", "pairwise LLM-as-a-judge comparison");
    add_config(judge, true);
    judge->add_option("--original", original_path, "original texts JSONL")->required();
    judge->add_option("--a", a_path, "system A translations JSONL")->required();
    judge->add_option("--b", b_path, "system B translations JSONL")->required();
    judge->add_flag("--both-orders", both_orders, "also judge with A/B swapped");
    judge->add_option("--json", json_out, "write tally JSON here");

    auto* bias = app.add_subcommand("bias-report", "positional bias analysis of ranking rounds");
    bias->add_option("--records", records_path, "translation records JSONL")->required();
    bias->add_option("--top-k", top_k, "number of top rank combinations");
    bias->add_option("--json", json_out, "write report JSON here");

    auto* qe = app.add_subcommand("qe-export", "export scorer input TSV");
    qe->add_option("--records", records_path, "translation records JSONL")->required();
    qe->add_option("--out", out_path, "output TSV path")->required();

    auto* qe_report = app.add_subcommand("qe-score-report", "system-level QE score aggregation");
    qe_report->add_option("--scores", scores_path, "QE scores JSONL")->required();
    qe_report->add_option("--json", json_out, "write report JSON here");

    auto* delta = app.add_subcommand("delta-report", "accuracy deltas between sources");
    delta->add_option("--accuracies", accuracies_path, "accuracy rows JSONL")->required();
    delta->add_option("--ours", ours_label, "source_label treated as ours");
    delta->add_option("--other", other_label, "source_label treated as other");
    delta->add_option("--json", json_out, "write report JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Json config = Json::object();
        if (!config_path.empty()) config = load_config(config_path, overrides);

        if (translate->parsed()) return cmd_translate(config);
        if (validate->parsed()) return cmd_validate(config);
        if (judge->parsed())
            return cmd_judge(config, original_path, a_path, b_path, both_orders, json_out);
        if (bias->parsed()) return cmd_bias_report(records_path, top_k, json_out);
        if (qe->parsed()) return cmd_qe_export(records_path, out_path);
        if (qe_report->parsed()) return cmd_qe_score_report(scores_path, json_out);
        if (delta->parsed())
            return cmd_delta_report(accuracies_path, ours_label, other_label, json_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.code() == ErrorCode::Config || e.code() == ErrorCode::Auth) return 2;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
