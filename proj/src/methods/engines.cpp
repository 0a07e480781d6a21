#include "mtforge/methods/engines.hpp"

#include "mtforge/core/error.hpp"
#include "mtforge/methods/schedule.hpp"
#include "mtforge/prompt/parse.hpp"

#include <algorithm>
#include <set>

namespace mtforge {

namespace {

int expected_answer_count(const TranslationUnit& unit) {
    if (unit.is_benchmark()) return static_cast<int>(unit.benchmark().answers.size());
    return static_cast<int>(unit.dataset().fields.size()) - 1;
}

bool answers_are_list(const TranslationUnit& unit) {
    return expected_answer_count(unit) > 1;
}

Candidate candidate_from_parsed(const TranslationUnit& unit, const ParsedTranslation& parsed,
                                int index, const std::string& prompt_id,
                                const std::string& raw) {
    Candidate c;
    c.index = index;
    c.question = parsed.question;
    c.prompt_id = prompt_id;
    c.raw_output = raw;
    if (unit.is_benchmark()) {
        c.answers = parsed.answers;
    } else {
        const auto& fields = unit.dataset().fields;
        c.fields.emplace_back(fields.front().first, parsed.question);
        for (size_t i = 1; i < fields.size(); ++i)
            c.fields.emplace_back(fields[i].first, parsed.answers[i - 1]);
    }
    return c;
}

FinalTranslation final_from_candidate(const Candidate& c) {
    FinalTranslation f;
    f.question = c.question;
    f.answers = c.answers;
    f.fields = c.fields;
    return f;
}

FinalTranslation final_from_parsed(const TranslationUnit& unit,
                                   const ParsedTranslation& parsed) {
    return final_from_candidate(candidate_from_parsed(unit, parsed, 0, "", ""));
}

std::string candidate_json(const TranslationUnit& unit, const Candidate& c) {
    std::vector<std::string> answers = c.answers;
    if (!unit.is_benchmark()) {
        answers.clear();
        for (size_t i = 1; i < c.fields.size(); ++i) answers.push_back(c.fields[i].second);
    }
    return canonical_translation_json(c.question, answers, answers_are_list(unit));
}

std::string responses_block(const TranslationUnit& unit,
                            const std::vector<Candidate>& candidates,
                            const std::vector<int>& order) {
    std::string block = "\n";
    for (size_t pos = 0; pos < order.size(); ++pos) {
        block += "Response " + std::to_string(pos + 1) + ": " +
                 candidate_json(unit, candidates[order[pos]]) + "\n";
    }
    return block;
}

std::vector<int> identity_order(size_t n) {
    std::vector<int> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
    return order;
}

struct Session {
    const TranslationUnit& unit;
    const MethodConfig& config;
    EngineContext& ctx;
    TranslationRecord record;

    Session(const TranslationUnit& u, const MethodConfig& c, EngineContext& x)
        : unit(u), config(c), ctx(x) {
        record.id = u.id();
        record.unit = u;
        record.config = c;
    }

    std::string call(const std::vector<ChatMessage>& messages, double temperature) {
        ChatRequest request;
        request.messages = messages;
        request.temperature = temperature;
        request.model = ctx.client.config().model;
        ChatResponse response = ctx.client.complete(request);
        record.usage.calls += 1;
        record.usage.prompt_tokens += response.prompt_tokens;
        record.usage.completion_tokens += response.completion_tokens;
        return response.text;
    }

    const PromptTemplate& tmpl(MethodRole role) const {
        return ctx.registry.get(role, ctx.benchmark_name, ctx.pair.target);
    }

    /// N candidates: single prompt sampled n times, or p distinct prompt
    /// variants sampled once each.
    void sample_candidates() {
        const int n = config.candidate_count();
        std::vector<const PromptTemplate*> prompts;
        if (config.p > 1) {
            prompts = ctx.registry.variants(MethodRole::Translate, ctx.benchmark_name,
                                            ctx.pair.target);
            if (static_cast<int>(prompts.size()) < config.p)
                throw Error(ErrorCode::Config,
                            "registry has " + std::to_string(prompts.size()) +
                                " translate variants, p=" + std::to_string(config.p));
            prompts.resize(config.p);
        } else {
            prompts.assign(n, &tmpl(MethodRole::Translate));
        }
        const int expected = expected_answer_count(unit);
        for (int i = 0; i < n; ++i) {
            const PromptTemplate* prompt = prompts[config.p > 1 ? i : 0];
            std::string raw =
                call(render(*prompt, unit, ctx.pair), config.sample_temperature);
            ParsedTranslation parsed = parse_translation(raw, expected);
            record.candidates.push_back(
                candidate_from_parsed(unit, parsed, i, prompt->id, raw));
        }
    }
};

} // namespace

TranslationRecord translate_sc(const TranslationUnit& unit, const MethodConfig& config,
                               EngineContext& ctx) {
    Session s(unit, config, ctx);
    const int expected = expected_answer_count(unit);

    std::string raw = s.call(render(s.tmpl(MethodRole::Translate), unit, ctx.pair),
                             config.sample_temperature);
    ParsedTranslation parsed = parse_translation(raw, expected);
    s.record.candidates.push_back(
        candidate_from_parsed(unit, parsed, 0, s.tmpl(MethodRole::Translate).id, raw));
    s.record.final = final_from_parsed(unit, parsed);

    if (config.check) {
        // Fresh context: the check call carries no history.
        std::map<std::string, std::string> extras;
        extras["responses"] = candidate_json(unit, s.record.candidates.front());
        std::string check_raw =
            s.call(render(s.tmpl(MethodRole::SelfCheck), unit, ctx.pair, extras),
                   config.judge_temperature);
        s.record.final = final_from_parsed(unit, parse_translation(check_raw, expected));
    }
    return s.record;
}

TranslationRecord translate_bon(const TranslationUnit& unit, const MethodConfig& config,
                                EngineContext& ctx) {
    Session s(unit, config, ctx);
    s.sample_candidates();
    const int n = config.candidate_count();

    std::map<std::string, std::string> extras;
    extras["responses"] = responses_block(unit, s.record.candidates, identity_order(n));
    std::string raw = s.call(render(s.tmpl(MethodRole::BonScore), unit, ctx.pair, extras),
                             config.judge_temperature);
    s.record.scores = parse_scores(raw, n);

    int winner = 0;
    bool tie = false;
    for (int i = 1; i < n; ++i) {
        if (s.record.scores[i] > s.record.scores[winner]) {
            winner = i;
            tie = false;
        } else if (s.record.scores[i] == s.record.scores[winner]) {
            tie = true;
        }
    }
    if (tie) s.record.warning = "score tie; lowest index kept";
    s.record.final = final_from_candidate(s.record.candidates[winner]);
    return s.record;
}

TranslationRecord translate_usi(const TranslationUnit& unit, const MethodConfig& config,
                                EngineContext& ctx) {
    Session s(unit, config, ctx);
    s.sample_candidates();
    const int n = config.candidate_count();

    std::map<std::string, std::string> extras;
    extras["responses"] = responses_block(unit, s.record.candidates, identity_order(n));
    std::string raw = s.call(render(s.tmpl(MethodRole::UsiJudge), unit, ctx.pair, extras),
                             config.judge_temperature);
    s.record.final =
        final_from_parsed(unit, parse_translation(raw, expected_answer_count(unit)));
    return s.record;
}

TranslationRecord translate_trank(const TranslationUnit& unit, const MethodConfig& config,
                                  EngineContext& ctx) {
    Session s(unit, config, ctx);
    s.sample_candidates();
    const int n = config.candidate_count();
    const RotationSchedule schedule = rotation_schedule(n);

    std::vector<std::string> round_reasoning;
    for (int r = 0; r < n; ++r) {
        const std::vector<int>& order = schedule.rounds[r];
        std::map<std::string, std::string> extras;
        extras["responses"] = responses_block(unit, s.record.candidates, order);
        std::string raw =
            s.call(render(s.tmpl(MethodRole::TrankRank), unit, ctx.pair, extras),
                   config.judge_temperature);
        // A failed round fails the whole entry; partial aggregation would
        // break the rotation guarantee.
        ParsedRanking parsed = parse_ranking(raw, n);

        RankingRound round;
        round.round_index = r;
        round.presentation_order = order;
        std::set<int> seen_ranks;
        for (const auto& [label, rank] : parsed.final_ranks) {
            round.ranks[order[label - 1]] = rank;
            if (!seen_ranks.insert(rank).second) round.had_ties = true;
        }
        s.record.rounds.push_back(std::move(round));
        if (!parsed.reasoning.empty()) round_reasoning.push_back(parsed.reasoning);
    }

    s.record.aggregate = aggregate_ranks(s.record.rounds);
    const Candidate& winner = s.record.candidates[s.record.aggregate->winner];
    s.record.final = final_from_candidate(winner);
    for (size_t i = 0; i < round_reasoning.size(); ++i) {
        if (i) s.record.reasoning += "\n---\n";
        s.record.reasoning += round_reasoning[i];
    }

    if (config.correction) {
        std::map<std::string, std::string> extras;
        extras["responses"] =
            responses_block(unit, s.record.candidates, identity_order(n));
        extras["selected"] = candidate_json(unit, winner);
        std::string raw =
            s.call(render(s.tmpl(MethodRole::TrankCorrect), unit, ctx.pair, extras),
                   config.judge_temperature);
        try {
            s.record.final = final_from_parsed(
                unit, parse_translation(raw, expected_answer_count(unit)));
        } catch (const Error& e) {
            // Correction is best-effort; the ranked winner stands.
            s.record.warning =
                std::string("correction output unusable (") + e.what() +
                "); kept the uncorrected winner";
        }
    }
    return s.record;
}

TranslationRecord translate_unit(const TranslationUnit& unit, const MethodConfig& config,
                                 EngineContext& ctx) {
    try {
        switch (config.method) {
            case Method::SC: return translate_sc(unit, config, ctx);
            case Method::BON: return translate_bon(unit, config, ctx);
            case Method::USI: return translate_usi(unit, config, ctx);
            case Method::TRANK: return translate_trank(unit, config, ctx);
        }
        throw Error(ErrorCode::Config, "unknown method");
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Auth) throw; // configuration problem, abort the run
        TranslationRecord record;
        record.id = unit.id();
        record.unit = unit;
        record.config = config;
        record.status = RecordStatus::FAILED;
        record.error = e.what();
        return record;
    }
}

} // namespace mtforge
