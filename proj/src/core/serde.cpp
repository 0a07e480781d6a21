#include "mtforge/core/serde.hpp"

#include "mtforge/core/error.hpp"

namespace mtforge {

namespace {

Json fields_to_json(const std::vector<std::pair<std::string, std::string>>& fields) {
    Json j = Json::object();
    for (const auto& [name, value] : fields) j[name] = value;
    return j;
}

std::vector<std::pair<std::string, std::string>> fields_from_json(const Json& j) {
    std::vector<std::pair<std::string, std::string>> fields;
    for (auto it = j.begin(); it != j.end(); ++it)
        fields.emplace_back(it.key(), it.value().get<std::string>());
    return fields;
}

} // namespace

Json to_json(const TranslationUnit& unit) {
    Json j = Json::object();
    if (unit.is_benchmark()) {
        const auto& e = unit.benchmark();
        j["kind"] = "benchmark";
        j["id"] = e.id;
        j["question"] = e.question;
        j["answers"] = e.answers;
        if (e.answer_index) j["answer_index"] = *e.answer_index;
        if (!e.metadata.empty()) j["metadata"] = e.metadata;
    } else {
        const auto& e = unit.dataset();
        j["kind"] = "dataset";
        j["id"] = e.id;
        j["fields"] = fields_to_json(e.fields);
    }
    return j;
}

TranslationUnit unit_from_json(const Json& j) {
    TranslationUnit unit;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "benchmark") {
        BenchmarkEntry e;
        e.id = j.at("id").get<std::string>();
        e.question = j.at("question").get<std::string>();
        e.answers = j.at("answers").get<std::vector<std::string>>();
        if (j.contains("answer_index") && !j["answer_index"].is_null())
            e.answer_index = j["answer_index"].get<int>();
        if (j.contains("metadata"))
            e.metadata = j["metadata"].get<std::map<std::string, std::string>>();
        unit.entry = std::move(e);
    } else if (kind == "dataset") {
        DatasetEntry e;
        e.id = j.at("id").get<std::string>();
        e.fields = fields_from_json(j.at("fields"));
        unit.entry = std::move(e);
    } else {
        throw Error(ErrorCode::MalformedLine, "unknown unit kind '" + kind + "'");
    }
    return unit;
}

Json to_json(const MethodConfig& config) {
    Json j = Json::object();
    j["method"] = method_name(config.method);
    j["check"] = config.check;
    j["n"] = config.n;
    j["p"] = config.p;
    j["sample_temperature"] = config.sample_temperature;
    j["judge_temperature"] = config.judge_temperature;
    j["correction"] = config.correction;
    return j;
}

MethodConfig method_config_from_json(const Json& j) {
    MethodConfig c;
    if (j.contains("method")) c.method = method_from_name(j["method"].get<std::string>());
    if (j.contains("check")) c.check = j["check"].get<bool>();
    if (j.contains("n")) c.n = j["n"].get<int>();
    if (j.contains("p")) c.p = j["p"].get<int>();
    if (j.contains("sample_temperature"))
        c.sample_temperature = j["sample_temperature"].get<double>();
    if (j.contains("judge_temperature"))
        c.judge_temperature = j["judge_temperature"].get<double>();
    if (j.contains("correction")) c.correction = j["correction"].get<bool>();
    return c;
}

Json to_json(const RankingRound& round) {
    Json j = Json::object();
    j["round_index"] = round.round_index;
    j["presentation_order"] = round.presentation_order;
    Json ranks = Json::object();
    for (const auto& [candidate, rank] : round.ranks)
        ranks[std::to_string(candidate)] = rank;
    j["ranks"] = std::move(ranks);
    j["had_ties"] = round.had_ties;
    return j;
}

RankingRound round_from_json(const Json& j) {
    RankingRound r;
    r.round_index = j.at("round_index").get<int>();
    r.presentation_order = j.at("presentation_order").get<std::vector<int>>();
    for (auto it = j.at("ranks").begin(); it != j.at("ranks").end(); ++it)
        r.ranks[std::stoi(it.key())] = it.value().get<int>();
    r.had_ties = j.at("had_ties").get<bool>();
    return r;
}

Json to_json(const RankAggregate& aggregate) {
    Json j = Json::object();
    Json avg = Json::object();
    for (const auto& [candidate, rank] : aggregate.avg_rank)
        avg[std::to_string(candidate)] = rank;
    j["avg_rank"] = std::move(avg);
    j["winner"] = aggregate.winner;
    j["tie_broken"] = aggregate.tie_broken;
    j["tie_rule_applied"] = tie_rule_name(aggregate.tie_rule_applied);
    return j;
}

RankAggregate aggregate_from_json(const Json& j) {
    RankAggregate a;
    for (auto it = j.at("avg_rank").begin(); it != j.at("avg_rank").end(); ++it)
        a.avg_rank[std::stoi(it.key())] = it.value().get<double>();
    a.winner = j.at("winner").get<int>();
    a.tie_broken = j.at("tie_broken").get<bool>();
    const std::string rule = j.at("tie_rule_applied").get<std::string>();
    if (rule == "FIRST_PLACE_COUNT") a.tie_rule_applied = TieRule::FirstPlaceCount;
    else if (rule == "LOWEST_INDEX") a.tie_rule_applied = TieRule::LowestIndex;
    else a.tie_rule_applied = TieRule::None;
    return a;
}

namespace {

Json candidate_to_json(const Candidate& c) {
    Json j = Json::object();
    j["index"] = c.index;
    j["question"] = c.question;
    if (!c.fields.empty()) j["fields"] = fields_to_json(c.fields);
    else j["answers"] = c.answers;
    j["prompt_id"] = c.prompt_id;
    j["raw_output"] = c.raw_output;
    return j;
}

Candidate candidate_from_json(const Json& j) {
    Candidate c;
    c.index = j.at("index").get<int>();
    c.question = j.at("question").get<std::string>();
    if (j.contains("fields")) c.fields = fields_from_json(j["fields"]);
    if (j.contains("answers")) c.answers = j["answers"].get<std::vector<std::string>>();
    c.prompt_id = j.at("prompt_id").get<std::string>();
    c.raw_output = j.at("raw_output").get<std::string>();
    return c;
}

Json final_to_json(const FinalTranslation& f) {
    Json j = Json::object();
    j["question"] = f.question;
    if (!f.fields.empty()) j["fields"] = fields_to_json(f.fields);
    else j["answers"] = f.answers;
    return j;
}

FinalTranslation final_from_json(const Json& j) {
    FinalTranslation f;
    f.question = j.at("question").get<std::string>();
    if (j.contains("fields")) f.fields = fields_from_json(j["fields"]);
    if (j.contains("answers")) f.answers = j["answers"].get<std::vector<std::string>>();
    return f;
}

} // namespace

Json to_json(const TranslationRecord& record) {
    Json j = Json::object();
    j["id"] = record.id;
    j["mode"] = record.unit.is_benchmark() ? "benchmark" : "dataset";
    j["method"] = method_name(record.config.method);
    j["config"] = to_json(record.config);
    j["source"] = to_json(record.unit);
    Json candidates = Json::array();
    for (const auto& c : record.candidates) candidates.push_back(candidate_to_json(c));
    j["candidates"] = std::move(candidates);
    Json rounds = Json::array();
    for (const auto& r : record.rounds) rounds.push_back(to_json(r));
    j["rounds"] = std::move(rounds);
    if (record.aggregate) j["aggregate"] = to_json(*record.aggregate);
    j["scores"] = record.scores;
    j["final"] = final_to_json(record.final);
    j["reasoning"] = record.reasoning;
    if (!record.warning.empty()) j["warning"] = record.warning;
    j["usage"] = {{"calls", record.usage.calls},
                  {"prompt_tokens", record.usage.prompt_tokens},
                  {"completion_tokens", record.usage.completion_tokens}};
    j["status"] = record_status_name(record.status);
    j["error"] = record.error;
    return j;
}

TranslationRecord record_from_json(const Json& j) {
    TranslationRecord r;
    r.id = j.at("id").get<std::string>();
    r.unit = unit_from_json(j.at("source"));
    r.config = method_config_from_json(j.at("config"));
    for (const auto& c : j.at("candidates")) r.candidates.push_back(candidate_from_json(c));
    for (const auto& rd : j.at("rounds")) r.rounds.push_back(round_from_json(rd));
    if (j.contains("aggregate")) r.aggregate = aggregate_from_json(j["aggregate"]);
    r.scores = j.at("scores").get<std::vector<int>>();
    r.final = final_from_json(j.at("final"));
    r.reasoning = j.at("reasoning").get<std::string>();
    if (j.contains("warning")) r.warning = j["warning"].get<std::string>();
    const auto& usage = j.at("usage");
    r.usage.calls = usage.at("calls").get<long long>();
    r.usage.prompt_tokens = usage.at("prompt_tokens").get<long long>();
    r.usage.completion_tokens = usage.at("completion_tokens").get<long long>();
    const std::string status = j.at("status").get<std::string>();
    if (status == "FAILED") r.status = RecordStatus::FAILED;
    else if (status == "SKIPPED") r.status = RecordStatus::SKIPPED;
    else r.status = RecordStatus::OK;
    r.error = j.at("error").get<std::string>();
    return r;
}

std::string record_to_line(const TranslationRecord& record) {
    return to_json(record).dump();
}

TranslationRecord record_from_line(const std::string& line) {
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded())
        throw Error(ErrorCode::MalformedLine, "unparseable record line");
    return record_from_json(j);
}

} // namespace mtforge
