#include "mtforge/pipeline/pipeline.hpp"

#include "mtforge/core/error.hpp"
#include "mtforge/core/serde.hpp"
#include "mtforge/methods/engines.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace mtforge {

std::vector<std::string> validate_run_config(const RunConfig& config) {
    std::vector<std::string> violations = validate_method_config(config.method_config);
    auto pair = validate_language_pair(config.pair);
    violations.insert(violations.end(), pair.begin(), pair.end());
    if (config.concurrency < 1) violations.push_back("concurrency must be >= 1");
    if (config.input_path.empty()) violations.push_back("input_path empty");
    if (config.output_path.empty()) violations.push_back("output_path empty");
    if (config.checkpoint_path.empty()) violations.push_back("checkpoint_path empty");
    if (config.output_path == config.input_path ||
        config.checkpoint_path == config.input_path ||
        config.output_path == config.checkpoint_path)
        violations.push_back("input/output/checkpoint paths must be distinct");
    if (config.client_config.requests_per_minute < 1)
        violations.push_back("requests_per_minute must be >= 1");
    if (config.client_config.max_retries < 0)
        violations.push_back("max_retries must be >= 0");
    return violations;
}

namespace {

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t b = item.find_first_not_of(' ');
        size_t e = item.find_last_not_of(' ');
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

std::string json_as_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string mapped(const std::map<std::string, std::string>& schema_map,
                   const std::string& key, const std::string& fallback) {
    auto it = schema_map.find(key);
    return it == schema_map.end() ? fallback : it->second;
}

TranslationUnit unit_from_row(const Json& row, RunMode mode,
                              const std::map<std::string, std::string>& schema_map,
                              const std::string& default_id) {
    TranslationUnit unit;
    std::string id = default_id;
    if (auto it = schema_map.find("id"); it != schema_map.end() && row.contains(it->second))
        id = json_as_text(row[it->second]);

    if (mode == RunMode::Benchmark) {
        BenchmarkEntry entry;
        entry.id = id;
        const std::string qkey = mapped(schema_map, "question", "question");
        if (!row.contains(qkey))
            throw Error(ErrorCode::Validation, "missing question field '" + qkey + "'");
        entry.question = json_as_text(row[qkey]);

        const std::string akey = mapped(schema_map, "answers", "answers");
        if (row.contains(akey) && row[akey].is_array()) {
            for (const auto& a : row[akey]) entry.answers.push_back(json_as_text(a));
        } else {
            // comma-separated option field names, e.g. "option1,option2"
            for (const std::string& field : split_csv(akey)) {
                if (!row.contains(field))
                    throw Error(ErrorCode::Validation,
                                "missing answer field '" + field + "'");
                entry.answers.push_back(json_as_text(row[field]));
            }
        }

        if (auto it = schema_map.find("answer_index");
            it != schema_map.end() && row.contains(it->second) &&
            !row[it->second].is_null()) {
            const Json& v = row[it->second];
            int index = v.is_number() ? v.get<int>() : std::stoi(v.get<std::string>());
            int base = 0;
            if (auto bit = schema_map.find("answer_index_base"); bit != schema_map.end())
                base = std::stoi(bit->second);
            entry.answer_index = index - base;
        }

        for (const auto& [key, field] : schema_map) {
            if (key.rfind("meta:", 0) == 0 && row.contains(field))
                entry.metadata[key.substr(5)] = json_as_text(row[field]);
        }
        unit.entry = std::move(entry);
    } else {
        DatasetEntry entry;
        entry.id = id;
        if (auto it = schema_map.find("fields"); it != schema_map.end()) {
            for (const std::string& field : split_csv(it->second)) {
                if (!row.contains(field))
                    throw Error(ErrorCode::Validation, "missing field '" + field + "'");
                entry.fields.emplace_back(field, json_as_text(row[field]));
            }
        } else {
            for (auto it2 = row.begin(); it2 != row.end(); ++it2) {
                if (it2.value().is_object() || it2.value().is_array())
                    throw Error(ErrorCode::Validation,
                                "nested field '" + it2.key() + "' not supported");
                if (it2.value().is_string())
                    entry.fields.emplace_back(it2.key(), it2.value().get<std::string>());
            }
        }
        unit.entry = std::move(entry);
    }
    return unit;
}

} // namespace

std::vector<TranslationUnit> load_units(const std::string& path, RunMode mode,
                                        const std::map<std::string, std::string>& schema_map,
                                        std::vector<std::string>* errors) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    const std::string stem = std::filesystem::path(path).stem().string();

    std::vector<TranslationUnit> units;
    std::string line;
    int line_no = 0;
    auto report = [&](ErrorCode code, const std::string& what) {
        const std::string message = path + ":" + std::to_string(line_no) + ": " + what;
        if (errors) errors->push_back(message); // bad line skipped, rest unaffected
        else throw Error(code, message);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json row = Json::parse(line, nullptr, false);
        if (row.is_discarded() || !row.is_object()) {
            report(ErrorCode::MalformedLine, "not a JSON object");
            continue;
        }
        TranslationUnit unit;
        try {
            unit = unit_from_row(row, mode, schema_map,
                                 stem + ":" + std::to_string(line_no));
        } catch (const Error& e) {
            report(ErrorCode::Validation, e.what());
            continue;
        }
        auto violations = validate_unit(unit);
        if (!violations.empty()) {
            report(ErrorCode::Validation, violations.front());
            continue;
        }
        units.push_back(std::move(unit));
    }
    return units;
}

std::set<std::string> read_checkpoint(const std::string& path) {
    std::set<std::string> done;
    std::ifstream in(path);
    if (!in) return done;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json j = Json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("id")) {
            std::cerr << "warning: ignoring partial checkpoint line in " << path << "\n";
            continue;
        }
        if (j.value("status", std::string()) != "FAILED")
            done.insert(j["id"].get<std::string>());
    }
    return done;
}

void append_record(const std::string& output_path, const std::string& checkpoint_path,
                   const TranslationRecord& record) {
    {
        std::ofstream out(output_path, std::ios::app);
        if (!out) throw Error(ErrorCode::Io, "cannot append to " + output_path);
        out << record_to_line(record) << "\n";
        out.flush();
    }
    {
        std::ofstream cp(checkpoint_path, std::ios::app);
        if (!cp) throw Error(ErrorCode::Io, "cannot append to " + checkpoint_path);
        Json mark = {{"id", record.id}, {"status", record_status_name(record.status)}};
        cp << mark.dump() << "\n";
        cp.flush();
    }
}

RunSummary run(const RunConfig& config, LlmClient& client, const PromptRegistry& registry,
               const RunHooks& hooks) {
    auto violations = validate_run_config(config);
    if (!violations.empty()) throw Error(ErrorCode::Config, violations.front());

    const auto started = std::chrono::steady_clock::now();
    const auto units = load_units(config.input_path, config.mode, config.schema_map);
    const auto done = read_checkpoint(config.checkpoint_path);

    RunSummary summary;
    summary.total = static_cast<long long>(units.size());

    std::vector<const TranslationUnit*> pending;
    for (const auto& unit : units) {
        if (done.count(unit.id())) ++summary.skipped;
        else pending.push_back(&unit);
    }

    EngineContext ctx{client, registry, config.pair, config.benchmark_name};

    std::mutex write_mutex;
    std::atomic<size_t> next{0};
    std::atomic<bool> stop{false};
    std::atomic<int> in_flight{0};
    size_t records_written = 0;
    std::exception_ptr fatal;

    auto worker = [&] {
        for (;;) {
            if (stop.load()) return;
            const size_t i = next.fetch_add(1);
            if (i >= pending.size()) return;
            in_flight.fetch_add(1);
            if (hooks.on_in_flight) hooks.on_in_flight(in_flight.load());
            TranslationRecord record;
            try {
                record = translate_unit(*pending[i], config.method_config, ctx);
            } catch (...) {
                in_flight.fetch_sub(1);
                std::lock_guard lock(write_mutex);
                if (!fatal) fatal = std::current_exception();
                stop.store(true);
                return;
            }
            in_flight.fetch_sub(1);

            std::lock_guard lock(write_mutex);
            if (stop.load()) return;
            append_record(config.output_path, config.checkpoint_path, record);
            ++records_written;
            if (record.status == RecordStatus::OK) ++summary.ok;
            else ++summary.failed;
            summary.calls += record.usage.calls;
            summary.prompt_tokens += record.usage.prompt_tokens;
            summary.completion_tokens += record.usage.completion_tokens;
            if (hooks.continue_after && !hooks.continue_after(records_written))
                stop.store(true);
        }
    };

    const size_t threads =
        std::min(static_cast<size_t>(config.concurrency),
                 pending.empty() ? size_t{1} : pending.size());
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    if (fatal) std::rethrow_exception(fatal);

    summary.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return summary;
}

} // namespace mtforge
