#include "mtforge/llm/mock.hpp"

#include "mtforge/core/serde.hpp"
#include "mtforge/prompt/parse.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace mtforge {

std::shared_ptr<MockTransport> MockTransport::scripted(std::vector<MockStep> script) {
    auto mock = std::make_shared<MockTransport>();
    mock->mode_ = Mode::Script;
    mock->script_ = std::move(script);
    return mock;
}

std::shared_ptr<MockTransport> MockTransport::scripted_texts(
    std::vector<std::string> texts) {
    std::vector<MockStep> script;
    script.reserve(texts.size());
    for (auto& t : texts) script.push_back(MockStep::reply(std::move(t)));
    return scripted(std::move(script));
}

std::shared_ptr<MockTransport> MockTransport::mapped(
    std::unordered_map<std::string, std::string> responses) {
    auto mock = std::make_shared<MockTransport>();
    mock->mode_ = Mode::Map;
    mock->map_ = std::move(responses);
    return mock;
}

std::shared_ptr<MockTransport> MockTransport::responder(Responder fn) {
    auto mock = std::make_shared<MockTransport>();
    mock->mode_ = Mode::Fn;
    mock->fn_ = std::move(fn);
    return mock;
}

std::string MockTransport::request_key(const ChatRequest& request) {
    std::string key;
    for (const auto& m : request.messages) {
        key += m.role;
        key += '\x1f';
        key += m.content;
        key += '\x1e';
    }
    return key;
}

ChatResponse MockTransport::send(const ChatRequest& request) {
    std::lock_guard lock(mutex_);
    log_.push_back(request);

    std::string text;
    switch (mode_) {
        case Mode::Script: {
            if (next_ >= script_.size())
                throw Error(ErrorCode::ScriptExhausted,
                            "scripted mock received call " + std::to_string(next_ + 1) +
                                " of " + std::to_string(script_.size()));
            const MockStep& step = script_[next_++];
            if (step.fail) {
                Error e(step.error, "scripted failure");
                e.retry_after_ms = step.retry_after_ms;
                throw e;
            }
            text = step.text;
            break;
        }
        case Mode::Map: {
            auto it = map_.find(request_key(request));
            if (it == map_.end())
                throw Error(ErrorCode::ScriptExhausted, "no mapped response for request");
            text = it->second;
            break;
        }
        case Mode::Fn:
            text = fn_(request);
            break;
    }

    ChatResponse response;
    response.text = std::move(text);
    for (const auto& m : request.messages)
        response.prompt_tokens += static_cast<long long>(m.content.size() / 4 + 1);
    response.completion_tokens = static_cast<long long>(response.text.size() / 4 + 1);
    response.finish_reason = FinishReason::Stop;
    return response;
}

namespace {

bool is_format_literal(const std::string& question) {
    return question == "your_translated_question" || question == "corrected_question" ||
           question == "selected question" || question == "...";
}

/// Parseable {"Question": ...} objects in the prompt, format examples
/// excluded; these are the candidate blocks the engines embedded.
std::vector<Json> candidate_objects(const std::string& prompt) {
    std::vector<Json> out;
    for (const auto& raw : extract_json_objects(prompt)) {
        Json obj = Json::parse(raw, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) continue;
        std::string question;
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            std::string k = it.key();
            for (auto& c : k) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            if (k == "question" && it.value().is_string())
                question = it.value().get<std::string>();
        }
        if (question.empty() || is_format_literal(question)) continue;
        out.push_back(obj);
    }
    return out;
}

std::optional<Json> original_object(const std::string& prompt) {
    for (const auto& raw : extract_json_objects(prompt)) {
        Json obj = Json::parse(raw, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) continue;
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            std::string k = it.key();
            for (auto& c : k) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            if (k == "original_question") return obj;
        }
    }
    return std::nullopt;
}

int response_count(const std::string& prompt) {
    static const std::regex label(R"(Response\s+(\d+)\s*[:：])");
    int n = 0;
    for (std::sregex_iterator it(prompt.begin(), prompt.end(), label), end; it != end; ++it)
        n = std::max(n, std::stoi((*it)[1].str()));
    return n;
}

std::string pseudo_translate(const Json& original, const char* prefix) {
    std::string question;
    Json answers;
    for (auto it = original.begin(); it != original.end(); ++it) {
        std::string k = it.key();
        for (auto& c : k) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (k == "original_question") question = it.value().get<std::string>();
        if (k == "original_answers") answers = it.value();
    }
    Json out = Json::object();
    out["Question"] = std::string(prefix) + question;
    if (answers.is_array()) {
        Json arr = Json::array();
        for (const auto& a : answers)
            arr.push_back(std::string(prefix) + a.get<std::string>());
        out["Answers"] = arr;
    } else if (answers.is_string() && !answers.get<std::string>().empty()) {
        out["Answers"] = std::string(prefix) + answers.get<std::string>();
    } else {
        out["Answers"] = "";
    }
    return out.dump();
}

std::string between(const std::string& text, const std::string& begin,
                    const std::string& end) {
    size_t b = text.find(begin);
    if (b == std::string::npos) return "";
    b += begin.size();
    size_t e = text.find(end, b);
    if (e == std::string::npos) return "";
    std::string inner = text.substr(b, e - b);
    size_t first = inner.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    size_t last = inner.find_last_not_of(" \t\r\n");
    return inner.substr(first, last - first + 1);
}

} // namespace

std::string echo_responder(const ChatRequest& request) {
    const std::string& prompt = request.messages.back().content;

    if (prompt.find("Output scores only") != std::string::npos) {
        int n = response_count(prompt);
        std::string out;
        Json list = Json::array();
        for (int i = 1; i <= n; ++i) {
            int score = (7 * i) % 10 + 1;
            out += "Response " + std::to_string(i) + ": " + std::to_string(score) + "\n";
            list.push_back(score);
        }
        out += "Answers: " + list.dump();
        return out;
    }

    if (prompt.find("final_ranks") != std::string::npos &&
        prompt.find("Selected translation:") == std::string::npos) {
        int n = response_count(prompt);
        auto candidates = candidate_objects(prompt);
        Json out = Json::object();
        out["summary"] = "all candidates are close in quality";
        Json ranks = Json::object();
        Json list = Json::array();
        for (int i = 1; i <= n; ++i) {
            ranks[std::to_string(i)] = i;
            list.push_back(i);
        }
        out["final_ranks"] = std::move(ranks);
        out["rankings_list"] = std::move(list);
        if (!candidates.empty()) out["best_translation"] = candidates.front();
        return "Reviewed all candidates in order.\n" + out.dump();
    }

    if (prompt.find("Selected translation:") != std::string::npos) {
        std::string tail = prompt.substr(prompt.find("Selected translation:"));
        auto selected = candidate_objects(tail);
        if (!selected.empty()) {
            Json obj = selected.front();
            Json out = Json::object();
            for (auto it = obj.begin(); it != obj.end(); ++it) {
                std::string k = it.key();
                for (auto& c : k)
                    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
                if (k == "question")
                    out["Question"] = "[FIX] " + it.value().get<std::string>();
                else if (k == "answers" || k == "answer") out["Answers"] = it.value();
            }
            return out.dump();
        }
        return "{}";
    }

    if (prompt.find("Combine the best features") != std::string::npos) {
        auto candidates = candidate_objects(prompt);
        if (!candidates.empty()) return candidates.front().dump();
        return "{}";
    }

    if (prompt.find("analysis_of_A") != std::string::npos) {
        std::string a = between(prompt, "<begin_of_translation_A>", "<end_of_translation_A>");
        std::string b = between(prompt, "<begin_of_translation_B>", "<end_of_translation_B>");
        std::string choice = a == b ? "T=" : (a < b ? "A+" : "B+");
        Json out = Json::object();
        out["analysis_of_A"] = "deterministic mock analysis of A";
        out["analysis_of_B"] = "deterministic mock analysis of B";
        out["reason_of_A_equals_B"] = a == b ? "identical texts" : "";
        out["reason_of_A_better_than_B"] = choice == "A+" ? "mock ordering" : "";
        out["reason_of_B_better_than_A"] = choice == "B+" ? "mock ordering" : "";
        out["choice"] = choice;
        return out.dump();
    }

    if (prompt.find("Current translation:") != std::string::npos) {
        auto candidates = candidate_objects(prompt);
        if (!candidates.empty()) {
            Json obj = candidates.front();
            Json out = Json::object();
            for (auto it = obj.begin(); it != obj.end(); ++it) {
                std::string k = it.key();
                for (auto& c : k)
                    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
                if (k == "question")
                    out["Question"] = "[CHK] " + it.value().get<std::string>();
                else if (k == "answers" || k == "answer") out["Answers"] = it.value();
            }
            return out.dump();
        }
        return "{}";
    }

    if (auto original = original_object(prompt)) return pseudo_translate(*original, "[MT] ");

    // Line-form original (BoN/USI header style) or free text.
    return "{\"Question\": \"[MT] unknown\", \"Answers\": \"\"}";
}

} // namespace mtforge
