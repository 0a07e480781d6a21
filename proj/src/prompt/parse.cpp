#include "mtforge/prompt/parse.hpp"

#include "mtforge/core/error.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace mtforge {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

/// Case-insensitive key lookup on a parsed object.
const Json* find_key(const Json& obj, std::initializer_list<const char*> names) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        std::string k = lower(it.key());
        for (const char* name : names)
            if (k == name) return &it.value();
    }
    return nullptr;
}

std::string value_as_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::vector<std::string> value_as_list(const Json& v) {
    std::vector<std::string> out;
    if (v.is_array()) {
        for (const auto& item : v) out.push_back(value_as_text(item));
    } else if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it)
            out.push_back(value_as_text(it.value()));
    } else {
        out.push_back(value_as_text(v));
    }
    return out;
}

// Trailing integer of a label like "Response 3", "candidate_2" or "1".
std::optional<int> label_number(const std::string& key) {
    size_t end = key.find_last_of("0123456789");
    if (end == std::string::npos) return std::nullopt;
    size_t begin = end;
    while (begin > 0 && std::isdigit(static_cast<unsigned char>(key[begin - 1]))) --begin;
    try {
        return std::stoi(key.substr(begin, end - begin + 1));
    } catch (...) {
        return std::nullopt;
    }
}

std::optional<int> value_number(const Json& v) {
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float()) return static_cast<int>(v.get<double>());
    if (v.is_string()) return label_number(v.get<std::string>());
    return std::nullopt;
}

} // namespace

std::vector<std::string> extract_json_objects(const std::string& text) {
    std::vector<std::string> objects;
    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        if (text[i] != '{') {
            ++i;
            continue;
        }
        int depth = 0;
        bool in_string = false;
        size_t j = i;
        size_t end = std::string::npos;
        for (; j < n; ++j) {
            char c = text[j];
            if (in_string) {
                if (c == '\\') ++j;
                else if (c == '"') in_string = false;
            } else if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                if (--depth == 0) {
                    end = j;
                    break;
                }
            }
        }
        if (end == std::string::npos) {
            ++i; // unbalanced; retry from the next brace
            continue;
        }
        objects.push_back(text.substr(i, end - i + 1));
        i = end + 1;
    }
    return objects;
}

ParsedTranslation parse_translation(const std::string& raw,
                                    std::optional<int> expected_answers) {
    // Models often restate the format before answering; the last parseable
    // object wins.
    const auto candidates = extract_json_objects(raw);
    for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
        Json obj = Json::parse(*it, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) continue;
        const Json* question = find_key(obj, {"question", "translated_question"});
        if (!question) continue;
        ParsedTranslation parsed;
        parsed.question = trim(value_as_text(*question));
        const Json* answers = find_key(obj, {"answers", "answer", "translated_answers"});
        if (answers && !answers->is_null()) {
            parsed.answers_were_list = answers->is_array() || answers->is_object();
            parsed.answers = value_as_list(*answers);
            if (parsed.answers.size() == 1 && trim(parsed.answers[0]).empty())
                parsed.answers.clear();
        }
        if (parsed.question.empty()) continue;
        if (expected_answers && static_cast<int>(parsed.answers.size()) != *expected_answers)
            throw Error(ErrorCode::ShapeMismatch,
                        "expected " + std::to_string(*expected_answers) + " answers, got " +
                            std::to_string(parsed.answers.size()));
        return parsed;
    }

    // Line form: "Question: ... / Answer(s): ..." as some judge prompts emit.
    static const std::regex line_form(
        R"(Question\s*[:：]\s*([\s\S]*?)\s*(?:,|\n)\s*Answers?\s*[:：]\s*([\s\S]*))",
        std::regex::icase);
    std::smatch m;
    if (std::regex_search(raw, m, line_form)) {
        ParsedTranslation parsed;
        parsed.question = trim(m[1].str());
        std::string answers_text = trim(m[2].str());
        if (!answers_text.empty()) {
            Json arr = Json::parse(answers_text, nullptr, false);
            if (!arr.is_discarded() && arr.is_array()) {
                parsed.answers_were_list = true;
                parsed.answers = value_as_list(arr);
            } else {
                parsed.answers.push_back(answers_text);
            }
        }
        if (!parsed.question.empty()) {
            if (expected_answers &&
                static_cast<int>(parsed.answers.size()) != *expected_answers)
                throw Error(ErrorCode::ShapeMismatch,
                            "expected " + std::to_string(*expected_answers) +
                                " answers, got " + std::to_string(parsed.answers.size()));
            return parsed;
        }
    }

    throw Error(ErrorCode::ParseFailure, "no translation object found");
}

ParsedRanking parse_ranking(const std::string& raw, int n) {
    if (n < 2) throw Error(ErrorCode::Validation, "ranking needs n >= 2");
    const auto candidates = extract_json_objects(raw);
    for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
        Json obj = Json::parse(*it, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) continue;
        const Json* ranks = find_key(obj, {"final_ranks", "ranks"});
        if (!ranks || !ranks->is_object()) continue;

        ParsedRanking parsed;
        size_t start = raw.find(*it);
        if (start != std::string::npos) parsed.reasoning = trim(raw.substr(0, start));

        if (const Json* summary = find_key(obj, {"summary"}))
            parsed.summary = value_as_text(*summary);

        for (auto kv = ranks->begin(); kv != ranks->end(); ++kv) {
            auto label = label_number(kv.key());
            auto rank = value_number(kv.value());
            if (!label || !rank)
                throw Error(ErrorCode::ParseFailure,
                            "unreadable rank entry '" + kv.key() + "'");
            if (*rank < 1 || *rank > n)
                throw Error(ErrorCode::RankDomain,
                            "rank " + std::to_string(*rank) + " outside 1.." +
                                std::to_string(n));
            if (*label < 1 || *label > n)
                throw Error(ErrorCode::RankDomain,
                            "candidate label " + std::to_string(*label) + " outside 1.." +
                                std::to_string(n));
            parsed.final_ranks[*label] = *rank;
        }
        for (int label = 1; label <= n; ++label)
            if (!parsed.final_ranks.count(label))
                throw Error(ErrorCode::MissingCandidate,
                            "final_ranks omits candidate " + std::to_string(label));

        if (const Json* list = find_key(obj, {"rankings_list"})) {
            if (list->is_array())
                for (const auto& item : *list)
                    if (auto label = value_number(item)) parsed.rankings_list.push_back(*label);
        }
        if (parsed.rankings_list.empty()) {
            for (int label = 1; label <= n; ++label) parsed.rankings_list.push_back(label);
            std::stable_sort(parsed.rankings_list.begin(), parsed.rankings_list.end(),
                             [&](int a, int b) {
                                 return parsed.final_ranks.at(a) < parsed.final_ranks.at(b);
                             });
        }

        if (const Json* best = find_key(obj, {"best_translation"})) {
            if (best->is_object()) {
                try {
                    parsed.best_translation = parse_translation(best->dump());
                } catch (const Error&) {
                    // Lenient: the round's winner comes from final_ranks anyway.
                }
            }
        }
        return parsed;
    }
    throw Error(ErrorCode::ParseFailure, "no ranking object found");
}

std::vector<int> parse_scores(const std::string& raw, int n) {
    if (n < 2) throw Error(ErrorCode::Validation, "scoring needs n >= 2");

    auto check = [&](std::vector<int> scores) {
        if (static_cast<int>(scores.size()) != n)
            throw Error(ErrorCode::CountMismatch,
                        "expected " + std::to_string(n) + " scores, got " +
                            std::to_string(scores.size()));
        for (int s : scores)
            if (s < 1 || s > 10)
                throw Error(ErrorCode::ScoreDomain,
                            "score " + std::to_string(s) + " outside 1..10");
        return scores;
    };

    // Preferred: the trailing "Answers: [s1, s2, ...]" list.
    static const std::regex answers_list(R"(Answers?\s*[:：]\s*\[([^\]]*)\])",
                                         std::regex::icase);
    bool list_found = false;
    std::string last_list;
    for (std::sregex_iterator it(raw.begin(), raw.end(), answers_list), end; it != end;
         ++it) {
        list_found = true;
        last_list = (*it)[1].str();
    }
    auto to_int = [](const std::string& digits) {
        try {
            return std::stoi(digits);
        } catch (...) {
            throw Error(ErrorCode::ScoreDomain, "unreadable number '" + digits + "'");
        }
    };
    if (list_found) {
        std::vector<int> scores;
        static const std::regex number(R"(-?\d+)");
        for (std::sregex_iterator it(last_list.begin(), last_list.end(), number), end;
             it != end; ++it)
            scores.push_back(to_int(it->str()));
        return check(std::move(scores));
    }

    // Fallback: "Response i: s" lines.
    static const std::regex line(R"(Response\s*(\d+)\s*[:：]\s*(-?\d+))", std::regex::icase);
    std::map<int, int> by_index;
    for (std::sregex_iterator it(raw.begin(), raw.end(), line), end; it != end; ++it)
        by_index[to_int((*it)[1].str())] = to_int((*it)[2].str());
    if (by_index.empty()) throw Error(ErrorCode::ParseFailure, "no scores found");
    std::vector<int> scores;
    for (int i = 1; i <= n; ++i) {
        auto it = by_index.find(i);
        if (it == by_index.end())
            throw Error(ErrorCode::CountMismatch,
                        "missing score for response " + std::to_string(i));
        scores.push_back(it->second);
    }
    if (static_cast<int>(by_index.size()) != n)
        throw Error(ErrorCode::CountMismatch,
                    "expected " + std::to_string(n) + " scores, got " +
                        std::to_string(by_index.size()));
    return check(std::move(scores));
}

JudgeVerdict parse_judge(const std::string& raw) {
    const auto candidates = extract_json_objects(raw);
    for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
        Json obj = Json::parse(*it, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) continue;
        const Json* choice = find_key(obj, {"choice"});
        if (!choice || !choice->is_string()) continue;

        JudgeVerdict verdict;
        verdict.raw_output = raw;
        std::string c = trim(choice->get<std::string>());
        if (c == "A+") verdict.choice = JudgeChoice::APlus;
        else if (c == "B+") verdict.choice = JudgeChoice::BPlus;
        else if (c == "T=" || c == "T") verdict.choice = JudgeChoice::Tie;
        else throw Error(ErrorCode::UnknownChoice, "unknown choice '" + c + "'");

        auto grab = [&](std::initializer_list<const char*> names, std::string& out) {
            if (const Json* v = find_key(obj, names)) out = value_as_text(*v);
        };
        grab({"analysis_of_a", "analysis_a"}, verdict.analysis_a);
        grab({"analysis_of_b", "analysis_b"}, verdict.analysis_b);
        grab({"reason_of_a_better_than_b", "reason_a_gt_b"}, verdict.reason_a_gt_b);
        grab({"reason_of_b_better_than_a", "reason_b_gt_a"}, verdict.reason_b_gt_a);
        grab({"reason_of_a_equals_b", "reason_equal"}, verdict.reason_equal);
        return verdict;
    }
    throw Error(ErrorCode::ParseFailure, "no judge verdict object found");
}

std::string canonical_translation_json(const std::string& question,
                                       const std::vector<std::string>& answers,
                                       bool answers_as_list) {
    Json j = Json::object();
    j["Question"] = question;
    if (answers_as_list) j["Answers"] = answers;
    else j["Answers"] = answers.empty() ? "" : answers.front();
    return j.dump();
}

} // namespace mtforge
