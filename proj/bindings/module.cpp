// Python surface over the core library: schedules, rank aggregation, the
// structured-output parsers, evaluation aggregates, and an offline
// translation entry point backed by the deterministic mock.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mtforge/core/serde.hpp"
#include "mtforge/eval/evaluate.hpp"
#include "mtforge/llm/mock.hpp"
#include "mtforge/methods/engines.hpp"
#include "mtforge/methods/schedule.hpp"
#include "mtforge/prompt/parse.hpp"

namespace py = pybind11;
using namespace mtforge;

namespace {

py::object py_from_json(const Json& j) {
    switch (j.type()) {
        case Json::value_t::null: return py::none();
        case Json::value_t::boolean: return py::bool_(j.get<bool>());
        case Json::value_t::number_integer: return py::int_(j.get<long long>());
        case Json::value_t::number_unsigned:
            return py::int_(j.get<unsigned long long>());
        case Json::value_t::number_float: return py::float_(j.get<double>());
        case Json::value_t::string: return py::str(j.get<std::string>());
        case Json::value_t::array: {
            py::list out;
            for (const auto& item : j) out.append(py_from_json(item));
            return out;
        }
        case Json::value_t::object: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it)
                out[py::str(it.key())] = py_from_json(it.value());
            return out;
        }
        default: return py::none();
    }
}

Json json_from_py(const py::handle& obj) {
    if (obj.is_none()) return nullptr;
    if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
    if (py::isinstance<py::int_>(obj)) return obj.cast<long long>();
    if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
    if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
    if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
        Json out = Json::array();
        for (const auto& item : obj) out.push_back(json_from_py(item));
        return out;
    }
    if (py::isinstance<py::dict>(obj)) {
        Json out = Json::object();
        for (const auto& item : obj.cast<py::dict>())
            out[py::str(item.first).cast<std::string>()] = json_from_py(item.second);
        return out;
    }
    throw py::type_error("unsupported value type for JSON conversion");
}

RankingRound round_from_py(const py::dict& d) {
    RankingRound round;
    if (d.contains("round_index")) round.round_index = d["round_index"].cast<int>();
    round.presentation_order = d["presentation_order"].cast<std::vector<int>>();
    for (const auto& item : d["ranks"].cast<py::dict>()) {
        const int candidate = py::isinstance<py::str>(item.first)
                                  ? std::stoi(item.first.cast<std::string>())
                                  : item.first.cast<int>();
        round.ranks[candidate] = item.second.cast<int>();
    }
    if (d.contains("had_ties")) round.had_ties = d["had_ties"].cast<bool>();
    return round;
}

const char* choice_name(JudgeChoice c) {
    switch (c) {
        case JudgeChoice::APlus: return "A+";
        case JudgeChoice::BPlus: return "B+";
        case JudgeChoice::Tie: return "T=";
    }
    return "T=";
}

} // namespace

PYBIND11_MODULE(_mtforge, m) {
    m.doc() = "translation strategy and evaluation primitives";

    py::register_exception<Error>(m, "MtforgeError");

    m.def("rotation_schedule", [](int n) {
        return rotation_schedule(n).rounds;
    }, py::arg("n"), "Cyclic presentation orders; round 0 is the identity.");

    m.def("aggregate_ranks", [](const std::vector<py::dict>& rounds) {
        std::vector<RankingRound> parsed;
        parsed.reserve(rounds.size());
        for (const auto& r : rounds) parsed.push_back(round_from_py(r));
        return py_from_json(to_json(aggregate_ranks(parsed)));
    }, py::arg("rounds"),
       "Mean-rank winner with first-place-count then lowest-index tie-breaks.");

    m.def("parse_translation",
          [](const std::string& raw, std::optional<int> expected_answers) {
              ParsedTranslation p = parse_translation(raw, expected_answers);
              py::dict out;
              out["question"] = p.question;
              out["answers"] = p.answers;
              out["answers_were_list"] = p.answers_were_list;
              return out;
          },
          py::arg("raw"), py::arg("expected_answers") = std::nullopt);

    m.def("parse_ranking", [](const std::string& raw, int n) {
        ParsedRanking p = parse_ranking(raw, n);
        py::dict out;
        out["summary"] = p.summary;
        py::dict ranks;
        for (const auto& [label, rank] : p.final_ranks) ranks[py::int_(label)] = rank;
        out["final_ranks"] = ranks;
        out["rankings_list"] = p.rankings_list;
        out["reasoning"] = p.reasoning;
        return out;
    }, py::arg("raw"), py::arg("n"));

    m.def("parse_scores", &parse_scores, py::arg("raw"), py::arg("n"));

    m.def("parse_judge", [](const std::string& raw) {
        JudgeVerdict v = parse_judge(raw);
        py::dict out;
        out["choice"] = choice_name(v.choice);
        out["analysis_a"] = v.analysis_a;
        out["analysis_b"] = v.analysis_b;
        return out;
    }, py::arg("raw"));

    m.def("tally", [](const std::vector<std::string>& choices) {
        std::vector<JudgeVerdict> verdicts;
        for (const auto& c : choices) {
            JudgeVerdict v;
            if (c == "A+") v.choice = JudgeChoice::APlus;
            else if (c == "B+") v.choice = JudgeChoice::BPlus;
            else if (c == "T=" || c == "T") v.choice = JudgeChoice::Tie;
            else throw Error(ErrorCode::UnknownChoice, "unknown choice '" + c + "'");
            verdicts.push_back(v);
        }
        JudgeTally t = tally(verdicts);
        py::dict out;
        out["wins"] = t.wins;
        out["draws"] = t.draws;
        out["losses"] = t.losses;
        out["win_rate"] = t.win_rate;
        out["draw_rate"] = t.draw_rate;
        out["loss_rate"] = t.loss_rate;
        return out;
    }, py::arg("choices"));

    m.def("bias_report", [](const std::vector<std::string>& record_lines, size_t top_k) {
        std::vector<TranslationRecord> records;
        for (const auto& line : record_lines) records.push_back(record_from_line(line));
        BiasReport r = bias_report(records, top_k);
        py::dict out;
        out["n"] = r.n;
        out["position_avg_rank"] = r.position_avg_rank;
        out["position_counts"] = r.position_counts;
        out["equal_ranks_count"] = r.equal_ranks_count;
        out["total_rounds"] = r.total_rounds;
        py::list combos;
        for (const auto& [combination, count] : r.top_combinations)
            combos.append(py::make_tuple(combination, count));
        out["top_combinations"] = combos;
        return out;
    }, py::arg("record_lines"), py::arg("top_k") = 5);

    m.def("system_score", [](const std::vector<py::dict>& rows) {
        std::vector<QERecord> records;
        for (const auto& row : rows) {
            QERecord r;
            r.entry_id = row.contains("id") ? row["id"].cast<std::string>() : "";
            r.score = row["score"].cast<double>();
            if (row.contains("system")) r.system = row["system"].cast<std::string>();
            if (row.contains("target_lang"))
                r.target_lang = row["target_lang"].cast<std::string>();
            records.push_back(std::move(r));
        }
        return system_score(records);
    }, py::arg("rows"));

    m.def("delta_report", [](const py::dict& ours, const py::dict& other) {
        auto to_map = [](const py::dict& d) {
            std::map<DeltaKey, double> out;
            for (const auto& item : d) {
                auto key = item.first.cast<py::tuple>();
                out[DeltaKey{key[0].cast<std::string>(), key[1].cast<std::string>(),
                             key[2].cast<std::string>()}] = item.second.cast<double>();
            }
            return out;
        };
        DeltaReport r = delta_report(to_map(ours), to_map(other));
        py::dict out;
        py::dict per_key;
        for (const auto& [key, delta] : r.per_key)
            per_key[py::make_tuple(key.model, key.benchmark, key.language)] = delta;
        out["per_key"] = per_key;
        out["by_benchmark"] = r.by_benchmark;
        out["by_language"] = r.by_language;
        return out;
    }, py::arg("ours"), py::arg("other"));

    m.def("translate_offline",
          [](const py::dict& unit, const std::string& method, int n, int p, bool check,
             bool correction) {
              TranslationUnit parsed = unit_from_json(json_from_py(unit));
              MethodConfig config;
              config.method = method_from_name(method);
              config.n = n;
              config.p = p;
              config.check = check;
              config.correction = correction;
              PromptRegistry registry = PromptRegistry::builtin();
              ClientConfig client_config;
              client_config.requests_per_minute = 1000000;
              LlmClient client(MockTransport::responder(echo_responder), client_config);
              LanguagePair pair{"en", "uk", "Ukrainian"};
              EngineContext ctx{client, registry, pair, ""};
              return py_from_json(to_json(translate_unit(parsed, config, ctx)));
          },
          py::arg("unit"), py::arg("method") = "sc", py::arg("n") = 1,
          py::arg("p") = 1, py::arg("check") = false, py::arg("correction") = true,
          "Runs one unit through an engine against the deterministic offline mock.");
}
