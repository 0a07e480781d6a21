#pragma once

#include "mtforge/core/types.hpp"
#include "mtforge/llm/client.hpp"
#include "mtforge/prompt/template.hpp"

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace mtforge {

enum class RunMode { Dataset, Benchmark };

struct RunConfig {
    RunMode mode = RunMode::Benchmark;
    MethodConfig method_config;
    LanguagePair pair;
    ClientConfig client_config;
    int concurrency = 1;
    std::string input_path;
    std::string output_path;
    std::string checkpoint_path;
    std::map<std::string, std::string> schema_map;
    std::string prompt_pack_path; // empty = built-in registry
    std::string benchmark_name;   // registry override key
};

std::vector<std::string> validate_run_config(const RunConfig& config);

struct RunSummary {
    long long total = 0;
    long long ok = 0;
    long long failed = 0;
    long long skipped = 0;
    long long calls = 0;
    long long prompt_tokens = 0;
    long long completion_tokens = 0;
    double wall_time_s = 0.0;
};

/// JSONL loader; schema_map keys: question, answers (field name holding a
/// list, or comma-separated option field names), answer_index,
/// answer_index_base ("0"/"1"), id, plus any "meta:<name>" passthroughs.
/// With `errors` supplied, bad lines are reported there and skipped;
/// otherwise the first bad line throws.
std::vector<TranslationUnit> load_units(const std::string& path, RunMode mode,
                                        const std::map<std::string, std::string>& schema_map,
                                        std::vector<std::string>* errors = nullptr);

/// Checkpoint is JSONL of {id, status}; FAILED ids are re-attempted on
/// resume, so only non-FAILED ids come back. A trailing partial line is
/// ignored with a warning on stderr.
std::set<std::string> read_checkpoint(const std::string& path);

void append_record(const std::string& output_path, const std::string& checkpoint_path,
                   const TranslationRecord& record);

/// Test instrumentation: return false from continue_after to stop the run
/// at a record boundary (simulated crash).
struct RunHooks {
    std::function<bool(size_t records_written)> continue_after;
    std::function<void(int in_flight)> on_in_flight;
};

RunSummary run(const RunConfig& config, LlmClient& client, const PromptRegistry& registry,
               const RunHooks& hooks = {});

} // namespace mtforge
