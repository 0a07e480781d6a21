#pragma once

#include "mtforge/core/serde.hpp"
#include "mtforge/core/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mtforge {

struct ParsedTranslation {
    std::string question;
    std::vector<std::string> answers;
    bool answers_were_list = false;
};

struct ParsedRanking {
    std::string summary;
    std::map<int, int> final_ranks; // 1-based presentation label -> rank
    std::vector<int> rankings_list; // labels, best to worst
    std::optional<ParsedTranslation> best_translation;
    std::string reasoning; // prose preceding the JSON object
};

/// Balanced top-level JSON-ish objects found in free text, in order of
/// appearance. Code fences and surrounding prose are ignored.
std::vector<std::string> extract_json_objects(const std::string& text);

/// expected_answers: answer count of the source unit when known; 0 means a
/// unit with no separate answers (single-field dataset entry).
ParsedTranslation parse_translation(const std::string& raw,
                                    std::optional<int> expected_answers = std::nullopt);

ParsedRanking parse_ranking(const std::string& raw, int n);

std::vector<int> parse_scores(const std::string& raw, int n);

JudgeVerdict parse_judge(const std::string& raw);

/// Canonical {"Question": ..., "Answers": ...} shape emitted back into
/// judge prompts and accepted by parse_translation unchanged.
std::string canonical_translation_json(const std::string& question,
                                       const std::vector<std::string>& answers,
                                       bool answers_as_list);

} // namespace mtforge
