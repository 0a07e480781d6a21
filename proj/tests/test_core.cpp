#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mtforge/core/error.hpp"
#include "mtforge/core/serde.hpp"
#include "mtforge/core/types.hpp"

using namespace mtforge;

namespace {

TranslationUnit benchmark_unit() {
    BenchmarkEntry e;
    e.id = "q1";
    e.question = "What is the capital of France?";
    e.answers = {"Paris", "Lyon", "Nice", "Lille"};
    e.answer_index = 0;
    e.metadata["subject"] = "geography";
    return TranslationUnit{std::move(e)};
}

TranslationUnit dataset_unit() {
    DatasetEntry e;
    e.id = "d1";
    e.fields = {{"instruction", "Write a poem."}, {"output", "Roses are red."}};
    return TranslationUnit{std::move(e)};
}

} // namespace

TEST_CASE("benchmark unit validation") {
    TranslationUnit unit = benchmark_unit();
    CHECK(validate_unit(unit).empty());

    SUBCASE("empty answers") {
        std::get<BenchmarkEntry>(unit.entry).answers.clear();
        CHECK_FALSE(validate_unit(unit).empty());
    }
    SUBCASE("whitespace-only question") {
        std::get<BenchmarkEntry>(unit.entry).question = "  \t\n ";
        CHECK_FALSE(validate_unit(unit).empty());
    }
    SUBCASE("blank answer option") {
        std::get<BenchmarkEntry>(unit.entry).answers[2] = "   ";
        CHECK_FALSE(validate_unit(unit).empty());
    }
    SUBCASE("answer_index out of range") {
        std::get<BenchmarkEntry>(unit.entry).answer_index = 4;
        CHECK_FALSE(validate_unit(unit).empty());
        std::get<BenchmarkEntry>(unit.entry).answer_index = -1;
        CHECK_FALSE(validate_unit(unit).empty());
    }
    SUBCASE("missing id") {
        std::get<BenchmarkEntry>(unit.entry).id.clear();
        CHECK_FALSE(validate_unit(unit).empty());
    }
}

TEST_CASE("dataset unit validation") {
    TranslationUnit unit = dataset_unit();
    CHECK(validate_unit(unit).empty());

    SUBCASE("duplicate field names") {
        std::get<DatasetEntry>(unit.entry).fields.push_back({"instruction", "again"});
        CHECK_FALSE(validate_unit(unit).empty());
    }
    SUBCASE("no fields") {
        std::get<DatasetEntry>(unit.entry).fields.clear();
        CHECK_FALSE(validate_unit(unit).empty());
    }
}

TEST_CASE("method config invariants") {
    MethodConfig c;
    c.method = Method::TRANK;
    c.n = 5;
    CHECK(validate_method_config(c).empty());
    CHECK(c.candidate_count() == 5);

    SUBCASE("p > 1 forces n = 1") {
        c.p = 3;
        CHECK_FALSE(validate_method_config(c).empty());
        c.n = 1;
        CHECK(validate_method_config(c).empty());
        CHECK(c.candidate_count() == 3);
    }
    SUBCASE("multi-candidate methods need N >= 2") {
        c.n = 1;
        CHECK_FALSE(validate_method_config(c).empty());
        c.method = Method::SC;
        CHECK(validate_method_config(c).empty());
    }
    SUBCASE("temperature bounds") {
        c.sample_temperature = 2.5;
        CHECK_FALSE(validate_method_config(c).empty());
        c.sample_temperature = -0.1;
        CHECK_FALSE(validate_method_config(c).empty());
    }
    SUBCASE("defaults") {
        MethodConfig d;
        CHECK(d.sample_temperature == doctest::Approx(0.7));
        CHECK(d.judge_temperature == doctest::Approx(0.0));
        CHECK(d.correction);
    }
}

TEST_CASE("language pair validation") {
    LanguagePair pair{"en", "uk", "Ukrainian"};
    CHECK(validate_language_pair(pair).empty());
    pair.target = "en";
    CHECK_FALSE(validate_language_pair(pair).empty());
    pair = {"en", "el", ""};
    CHECK_FALSE(validate_language_pair(pair).empty());
}

TEST_CASE("method names round-trip") {
    for (Method m : {Method::SC, Method::BON, Method::USI, Method::TRANK})
        CHECK(method_from_name(method_name(m)) == m);
    CHECK(method_from_name("T-RANK") == Method::TRANK);
    CHECK(method_from_name("best-of-n") == Method::BON);
    CHECK_THROWS_AS(method_from_name("nope"), Error);
}

TEST_CASE("unit serde round-trip") {
    for (const TranslationUnit& unit : {benchmark_unit(), dataset_unit()}) {
        TranslationUnit back = unit_from_json(to_json(unit));
        CHECK(to_json(back) == to_json(unit));
        CHECK(back.id() == unit.id());
    }
    // dataset field order survives
    TranslationUnit d = dataset_unit();
    TranslationUnit back = unit_from_json(to_json(d));
    REQUIRE(back.dataset().fields.size() == 2);
    CHECK(back.dataset().fields[0].first == "instruction");
    CHECK(back.dataset().fields[1].first == "output");
}

TEST_CASE("record serde round-trip with all sections") {
    TranslationRecord r;
    r.id = "q1";
    r.unit = benchmark_unit();
    r.config.method = Method::TRANK;
    r.config.n = 3;
    Candidate c;
    c.index = 0;
    c.question = "Яка столиця Франції?";
    c.answers = {"Париж", "Ліон", "Ніцца", "Лілль"};
    c.prompt_id = "base";
    c.raw_output = "{\"Question\": \"...\"}";
    r.candidates = {c, c, c};
    RankingRound round;
    round.round_index = 0;
    round.presentation_order = {0, 1, 2};
    round.ranks = {{0, 1}, {1, 2}, {2, 3}};
    r.rounds = {round};
    RankAggregate agg;
    agg.avg_rank = {{0, 1.0}, {1, 2.0}, {2, 3.0}};
    agg.winner = 0;
    r.aggregate = agg;
    r.final.question = c.question;
    r.final.answers = c.answers;
    r.reasoning = "round notes";
    r.warning = "score tie; lowest index kept";
    r.usage = {7, 1200, 340};
    r.status = RecordStatus::OK;

    const std::string line = record_to_line(r);
    CHECK(line.find('\n') == std::string::npos);
    TranslationRecord back = record_from_line(line);
    CHECK(record_to_line(back) == line);
    CHECK(back.aggregate.has_value());
    CHECK(back.aggregate->winner == 0);
    CHECK(back.usage.calls == 7);
    CHECK(back.warning == r.warning);
    CHECK(back.rounds.at(0).ranks.at(2) == 3);
}

TEST_CASE("failed record round-trips status and error") {
    TranslationRecord r;
    r.id = "bad";
    r.unit = benchmark_unit();
    r.status = RecordStatus::FAILED;
    r.error = "PARSE_FAILURE: no translation object found";
    TranslationRecord back = record_from_line(record_to_line(r));
    CHECK(back.status == RecordStatus::FAILED);
    CHECK(back.error == r.error);
}

TEST_CASE("record_from_line rejects garbage") {
    CHECK_THROWS_AS(record_from_line("{not json"), Error);
}

TEST_CASE("error taxonomy") {
    CHECK(Error(ErrorCode::RateLimited, "x").retryable());
    CHECK(Error(ErrorCode::Timeout, "x").retryable());
    CHECK(Error(ErrorCode::Server5xx, "x").retryable());
    CHECK_FALSE(Error(ErrorCode::Auth, "x").retryable());
    CHECK_FALSE(Error(ErrorCode::ParseFailure, "x").retryable());
    CHECK(std::string(Error(ErrorCode::RankDomain, "boom").what()) ==
          "RANK_DOMAIN: boom");
}
