#pragma once

#include "mtforge/core/types.hpp"
#include "mtforge/llm/client.hpp"
#include "mtforge/prompt/template.hpp"

#include <map>
#include <string>
#include <vector>

namespace mtforge {

struct JudgeTally {
    long long wins = 0;   // A+ from system A's perspective
    long long draws = 0;  // T=
    long long losses = 0; // B+
    double win_rate = 0.0;
    double draw_rate = 0.0;
    double loss_rate = 0.0;
};

struct BiasReport {
    int n = 0;
    std::vector<double> position_avg_rank;       // by presentation position
    std::vector<long long> position_counts;      // rounds contributing per position
    // full rank combination keyed by candidate sampling order -> occurrences
    std::vector<std::pair<std::vector<int>, long long>> top_combinations;
    long long equal_ranks_count = 0;
    long long total_rounds = 0;
};

/// One PAIR_JUDGE call at judge_temperature; both-orders debiasing is the
/// caller's concern.
JudgeVerdict judge_pair(const std::string& original, const std::string& a,
                        const std::string& b, LlmClient& client,
                        const PromptRegistry& registry, const LanguagePair& pair,
                        double judge_temperature = 0.0);

JudgeTally tally(const std::vector<JudgeVerdict>& verdicts);

BiasReport bias_report(const std::vector<TranslationRecord>& records, size_t top_k = 5);

/// Mean segment score; all records must share one system and language pair.
double system_score(const std::vector<QERecord>& records);

struct DeltaKey {
    std::string model;
    std::string benchmark;
    std::string language;
    auto operator<=>(const DeltaKey&) const = default;
};

struct DeltaReport {
    std::map<DeltaKey, double> per_key;            // percentage points
    std::map<std::string, double> by_benchmark;    // averages over shared keys
    std::map<std::string, double> by_language;
    std::vector<DeltaKey> missing_in_ours;
    std::vector<DeltaKey> missing_in_other;
};

DeltaReport delta_report(const std::map<DeltaKey, double>& ours,
                         const std::map<DeltaKey, double>& other);

/// Tab-separated scorer input: id, source text, translation text. Newlines
/// and tabs inside fields are backslash-escaped.
void qe_export(const std::vector<TranslationRecord>& records, const std::string& path);

std::vector<QERecord> read_qe_scores(const std::string& path);

struct AccuracyRow {
    DeltaKey key;
    std::string source_label;
    double accuracy = 0.0;
};

std::vector<AccuracyRow> read_accuracies(const std::string& path);

} // namespace mtforge
