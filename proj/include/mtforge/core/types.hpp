#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mtforge {

struct LanguagePair {
    std::string source;              // e.g. "en"
    std::string target;              // e.g. "uk"
    std::string target_display_name; // injected into prompts, e.g. "Ukrainian"
};

struct BenchmarkEntry {
    std::string id;
    std::string question;
    std::vector<std::string> answers;
    std::optional<int> answer_index; // 0-based; carried through untranslated
    std::map<std::string, std::string> metadata;
};

/// Flat string fields, no nesting; order is meaningful.
struct DatasetEntry {
    std::string id;
    std::vector<std::pair<std::string, std::string>> fields;
};

struct TranslationUnit {
    std::variant<BenchmarkEntry, DatasetEntry> entry;

    bool is_benchmark() const { return std::holds_alternative<BenchmarkEntry>(entry); }
    const BenchmarkEntry& benchmark() const { return std::get<BenchmarkEntry>(entry); }
    const DatasetEntry& dataset() const { return std::get<DatasetEntry>(entry); }

    const std::string& id() const {
        return is_benchmark() ? benchmark().id : dataset().id;
    }
};

enum class Method { SC, BON, USI, TRANK };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

struct MethodConfig {
    Method method = Method::SC;
    bool check = false;      // SC only: extra evaluate-and-correct call
    int n = 1;               // samples from a single prompt
    int p = 1;               // distinct prompt variants (p > 1 forces n = 1)
    double sample_temperature = 0.7;
    double judge_temperature = 0.0;
    bool correction = true;  // T-RANK only: final correction call

    int candidate_count() const { return n > p ? n : p; }
};

struct Candidate {
    int index = 0; // 0-based position in sampling order
    std::string question;
    std::vector<std::string> answers;                        // Benchmark units
    std::vector<std::pair<std::string, std::string>> fields; // Dataset units
    std::string prompt_id;
    std::string raw_output;
};

struct RankingRound {
    int round_index = 0;
    std::vector<int> presentation_order; // presentation_order[pos] = candidate at pos
    std::map<int, int> ranks;            // candidate index -> rank in 1..N, ties allowed
    bool had_ties = false;
};

enum class TieRule { None, FirstPlaceCount, LowestIndex };

const char* tie_rule_name(TieRule rule);

struct RankAggregate {
    std::map<int, double> avg_rank;
    int winner = 0;
    bool tie_broken = false;
    TieRule tie_rule_applied = TieRule::None;
};

enum class JudgeChoice { APlus, BPlus, Tie };

struct JudgeVerdict {
    JudgeChoice choice = JudgeChoice::Tie;
    std::string analysis_a;
    std::string analysis_b;
    std::string reason_a_gt_b;
    std::string reason_b_gt_a;
    std::string reason_equal;
    std::string raw_output;
};

enum class RecordStatus { OK, FAILED, SKIPPED };

const char* record_status_name(RecordStatus s);

struct FinalTranslation {
    std::string question;
    std::vector<std::string> answers;
    std::vector<std::pair<std::string, std::string>> fields;
};

struct Usage {
    long long calls = 0;
    long long prompt_tokens = 0;
    long long completion_tokens = 0;
};

struct TranslationRecord {
    std::string id;
    TranslationUnit unit;
    MethodConfig config;
    std::vector<Candidate> candidates;
    std::vector<RankingRound> rounds;          // T-RANK only
    std::optional<RankAggregate> aggregate;    // T-RANK only
    std::vector<int> scores;                   // BoN only, 1..10 per candidate
    FinalTranslation final;
    std::string reasoning;
    std::string warning;
    Usage usage;
    RecordStatus status = RecordStatus::OK;
    std::string error;
};

struct QERecord {
    std::string entry_id;
    double score = 0.0; // in [0,1]
    std::string system;
    std::string source_lang;
    std::string target_lang;
};

/// Returns the list of invariant violations; empty means valid.
std::vector<std::string> validate_unit(const TranslationUnit& unit);
std::vector<std::string> validate_method_config(const MethodConfig& config);
std::vector<std::string> validate_language_pair(const LanguagePair& pair);

} // namespace mtforge
