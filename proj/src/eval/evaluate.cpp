#include "mtforge/eval/evaluate.hpp"

#include "mtforge/core/error.hpp"
#include "mtforge/core/serde.hpp"
#include "mtforge/prompt/parse.hpp"

#include <algorithm>
#include <fstream>
#include <map>

namespace mtforge {

JudgeVerdict judge_pair(const std::string& original, const std::string& a,
                        const std::string& b, LlmClient& client,
                        const PromptRegistry& registry, const LanguagePair& pair,
                        double judge_temperature) {
    if (original.empty() || a.empty() || b.empty())
        throw Error(ErrorCode::Validation, "judge_pair requires non-empty texts");
    const PromptTemplate& tmpl = registry.get(MethodRole::PairJudge, "", pair.target);
    std::map<std::string, std::string> values;
    values["original_text"] = original;
    values["output_1"] = a;
    values["output_2"] = b;
    values["target_language"] = pair.target_display_name;

    ChatRequest request;
    request.messages = render_raw(tmpl, values);
    request.temperature = judge_temperature;
    request.model = client.config().model;
    ChatResponse response = client.complete(request);
    return parse_judge(response.text);
}

JudgeTally tally(const std::vector<JudgeVerdict>& verdicts) {
    if (verdicts.empty()) throw Error(ErrorCode::Empty, "no verdicts");
    JudgeTally t;
    for (const auto& v : verdicts) {
        switch (v.choice) {
            case JudgeChoice::APlus: ++t.wins; break;
            case JudgeChoice::Tie: ++t.draws; break;
            case JudgeChoice::BPlus: ++t.losses; break;
        }
    }
    const double total = static_cast<double>(verdicts.size());
    t.win_rate = static_cast<double>(t.wins) / total;
    t.draw_rate = static_cast<double>(t.draws) / total;
    t.loss_rate = static_cast<double>(t.losses) / total;
    return t;
}

BiasReport bias_report(const std::vector<TranslationRecord>& records, size_t top_k) {
    BiasReport report;
    std::map<std::vector<int>, long long> combinations;
    std::vector<double> rank_sum;

    for (const auto& record : records) {
        for (const auto& round : record.rounds) {
            const int n = static_cast<int>(round.presentation_order.size());
            if (report.n == 0) {
                report.n = n;
                report.position_avg_rank.assign(n, 0.0);
                report.position_counts.assign(n, 0);
                rank_sum.assign(n, 0.0);
            } else if (n != report.n) {
                throw Error(ErrorCode::MixedN, "rounds with different candidate counts");
            }
            ++report.total_rounds;

            for (int pos = 0; pos < n; ++pos) {
                const int candidate = round.presentation_order[pos];
                rank_sum[pos] += round.ranks.at(candidate);
                ++report.position_counts[pos];
            }

            if (round.had_ties) {
                // Mirrors the separate "equal ranks" accounting: tied rounds
                // are excluded from combination counting.
                ++report.equal_ranks_count;
            } else {
                std::vector<int> combination(n);
                for (int c = 0; c < n; ++c) combination[c] = round.ranks.at(c);
                ++combinations[combination];
            }
        }
    }
    if (report.n == 0) throw Error(ErrorCode::Empty, "no ranking rounds in records");

    for (int pos = 0; pos < report.n; ++pos)
        report.position_avg_rank[pos] =
            rank_sum[pos] / static_cast<double>(report.position_counts[pos]);

    std::vector<std::pair<std::vector<int>, long long>> sorted(combinations.begin(),
                                                               combinations.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (sorted.size() > top_k) sorted.resize(top_k);
    report.top_combinations = std::move(sorted);
    return report;
}

double system_score(const std::vector<QERecord>& records) {
    if (records.empty()) throw Error(ErrorCode::Empty, "no QE records");
    const std::string& system = records.front().system;
    const std::string& target = records.front().target_lang;
    double sum = 0.0;
    for (const auto& r : records) {
        if (r.system != system || r.target_lang != target)
            throw Error(ErrorCode::MixedSystem,
                        "records mix systems or language pairs");
        sum += r.score;
    }
    return sum / static_cast<double>(records.size());
}

DeltaReport delta_report(const std::map<DeltaKey, double>& ours,
                         const std::map<DeltaKey, double>& other) {
    DeltaReport report;
    std::map<std::string, std::pair<double, long long>> benchmark_acc;
    std::map<std::string, std::pair<double, long long>> language_acc;

    for (const auto& [key, value] : ours) {
        auto it = other.find(key);
        if (it == other.end()) {
            report.missing_in_other.push_back(key);
            continue;
        }
        const double delta_pp = (value - it->second) * 100.0;
        report.per_key[key] = delta_pp;
        auto& b = benchmark_acc[key.benchmark];
        b.first += delta_pp;
        ++b.second;
        auto& l = language_acc[key.language];
        l.first += delta_pp;
        ++l.second;
    }
    for (const auto& [key, _] : other)
        if (!ours.count(key)) report.missing_in_ours.push_back(key);

    if (report.per_key.empty())
        throw Error(ErrorCode::NoOverlap, "no shared keys between the two sources");

    for (const auto& [benchmark, acc] : benchmark_acc)
        report.by_benchmark[benchmark] = acc.first / static_cast<double>(acc.second);
    for (const auto& [language, acc] : language_acc)
        report.by_language[language] = acc.first / static_cast<double>(acc.second);
    return report;
}

namespace {

std::string escape_tsv(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '\t') out += "\\t";
        else if (c == '\n') out += "\\n";
        else if (c == '\r') out += "\\r";
        else if (c == '\\') out += "\\\\";
        else out.push_back(c);
    }
    return out;
}

std::string joined_text(const std::string& question, const std::vector<std::string>& answers,
                        const std::vector<std::pair<std::string, std::string>>& fields) {
    std::string text = question;
    if (!fields.empty()) {
        for (size_t i = 1; i < fields.size(); ++i) text += "\n" + fields[i].second;
    } else {
        for (const auto& a : answers) text += "\n" + a;
    }
    return text;
}

} // namespace

void qe_export(const std::vector<TranslationRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
    out << "id\tsource\ttranslation\n";
    for (const auto& record : records) {
        if (record.status != RecordStatus::OK) continue;
        std::string source;
        if (record.unit.is_benchmark()) {
            const auto& e = record.unit.benchmark();
            source = joined_text(e.question, e.answers, {});
        } else {
            const auto& e = record.unit.dataset();
            source = joined_text(e.fields.empty() ? "" : e.fields.front().second, {},
                                 e.fields);
        }
        const std::string translation =
            joined_text(record.final.question, record.final.answers, record.final.fields);
        out << escape_tsv(record.id) << '\t' << escape_tsv(source) << '\t'
            << escape_tsv(translation) << '\n';
    }
}

std::vector<QERecord> read_qe_scores(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::vector<QERecord> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json j = Json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw Error(ErrorCode::MalformedLine,
                        path + ":" + std::to_string(line_no));
        QERecord r;
        r.entry_id = j.at("id").get<std::string>();
        r.score = j.at("score").get<double>();
        r.system = j.value("system", std::string());
        r.source_lang = j.value("source_lang", std::string());
        r.target_lang = j.value("target_lang", std::string());
        if (r.score < 0.0 || r.score > 1.0)
            throw Error(ErrorCode::Validation,
                        path + ":" + std::to_string(line_no) + ": score outside [0,1]");
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<AccuracyRow> read_accuracies(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::vector<AccuracyRow> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json j = Json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw Error(ErrorCode::MalformedLine, path + ":" + std::to_string(line_no));
        AccuracyRow row;
        row.key.model = j.at("model").get<std::string>();
        row.key.benchmark = j.at("benchmark").get<std::string>();
        row.key.language = j.at("language").get<std::string>();
        row.source_label = j.at("source_label").get<std::string>();
        row.accuracy = j.at("accuracy").get<double>();
        if (row.accuracy < 0.0 || row.accuracy > 1.0)
            throw Error(ErrorCode::Validation, path + ":" + std::to_string(line_no) +
                                                   ": accuracy outside [0,1]");
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace mtforge
