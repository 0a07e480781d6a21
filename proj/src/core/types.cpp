#include "mtforge/core/types.hpp"

#include "mtforge/core/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace mtforge {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::Validation: return "VALIDATION";
        case ErrorCode::RateLimited: return "RATE_LIMITED";
        case ErrorCode::Timeout: return "TIMEOUT";
        case ErrorCode::Server5xx: return "SERVER_5XX";
        case ErrorCode::Auth: return "AUTH";
        case ErrorCode::MalformedResponse: return "MALFORMED_RESPONSE";
        case ErrorCode::ScriptExhausted: return "SCRIPT_EXHAUSTED";
        case ErrorCode::ParseFailure: return "PARSE_FAILURE";
        case ErrorCode::ShapeMismatch: return "SHAPE_MISMATCH";
        case ErrorCode::RankDomain: return "RANK_DOMAIN";
        case ErrorCode::MissingCandidate: return "MISSING_CANDIDATE";
        case ErrorCode::CountMismatch: return "COUNT_MISMATCH";
        case ErrorCode::ScoreDomain: return "SCORE_DOMAIN";
        case ErrorCode::UnknownChoice: return "UNKNOWN_CHOICE";
        case ErrorCode::MissingPlaceholder: return "MISSING_PLACEHOLDER";
        case ErrorCode::InconsistentRounds: return "INCONSISTENT_ROUNDS";
        case ErrorCode::MixedN: return "MIXED_N";
        case ErrorCode::MixedSystem: return "MIXED_SYSTEM";
        case ErrorCode::Empty: return "EMPTY";
        case ErrorCode::NoOverlap: return "NO_OVERLAP";
        case ErrorCode::MalformedLine: return "MALFORMED_LINE";
        case ErrorCode::Io: return "IO";
        case ErrorCode::Config: return "CONFIG";
    }
    return "UNKNOWN";
}

const char* method_name(Method m) {
    switch (m) {
        case Method::SC: return "sc";
        case Method::BON: return "bon";
        case Method::USI: return "usi";
        case Method::TRANK: return "trank";
    }
    return "sc";
}

Method method_from_name(const std::string& name) {
    std::string lower;
    for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "sc") return Method::SC;
    if (lower == "bon" || lower == "best-of-n" || lower == "bestofn") return Method::BON;
    if (lower == "usi") return Method::USI;
    if (lower == "trank" || lower == "t-rank") return Method::TRANK;
    throw Error(ErrorCode::Config, "unknown method '" + name + "'");
}

const char* tie_rule_name(TieRule rule) {
    switch (rule) {
        case TieRule::None: return "NONE";
        case TieRule::FirstPlaceCount: return "FIRST_PLACE_COUNT";
        case TieRule::LowestIndex: return "LOWEST_INDEX";
    }
    return "NONE";
}

const char* record_status_name(RecordStatus s) {
    switch (s) {
        case RecordStatus::OK: return "OK";
        case RecordStatus::FAILED: return "FAILED";
        case RecordStatus::SKIPPED: return "SKIPPED";
    }
    return "OK";
}

namespace {

bool blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

} // namespace

std::vector<std::string> validate_unit(const TranslationUnit& unit) {
    std::vector<std::string> violations;
    if (unit.is_benchmark()) {
        const auto& e = unit.benchmark();
        if (e.id.empty()) violations.push_back("id empty");
        if (blank(e.question)) violations.push_back("question empty");
        if (e.answers.empty()) violations.push_back("answers empty");
        for (size_t i = 0; i < e.answers.size(); ++i) {
            if (blank(e.answers[i]))
                violations.push_back("answer " + std::to_string(i) + " empty");
        }
        if (e.answer_index &&
            (*e.answer_index < 0 ||
             *e.answer_index >= static_cast<int>(e.answers.size())))
            violations.push_back("answer_index out of range");
    } else {
        const auto& e = unit.dataset();
        if (e.id.empty()) violations.push_back("id empty");
        if (e.fields.empty()) violations.push_back("no fields");
        std::set<std::string> names;
        for (const auto& [name, _] : e.fields) {
            if (!names.insert(name).second)
                violations.push_back("duplicate field name '" + name + "'");
        }
    }
    return violations;
}

std::vector<std::string> validate_method_config(const MethodConfig& config) {
    std::vector<std::string> violations;
    if (config.n < 1) violations.push_back("n must be >= 1");
    if (config.p < 1) violations.push_back("p must be >= 1");
    if (config.p > 1 && config.n != 1)
        violations.push_back("n must be 1 when p > 1");
    if (config.sample_temperature < 0.0 || config.sample_temperature > 2.0)
        violations.push_back("sample_temperature outside [0,2]");
    if (config.method != Method::SC && config.candidate_count() < 2)
        violations.push_back("effective candidate count N must be >= 2 for this method");
    return violations;
}

std::vector<std::string> validate_language_pair(const LanguagePair& pair) {
    std::vector<std::string> violations;
    if (pair.source == pair.target) violations.push_back("source equals target");
    if (pair.target_display_name.empty())
        violations.push_back("target_display_name empty");
    return violations;
}

} // namespace mtforge
