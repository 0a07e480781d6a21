#pragma once

#include <stdexcept>
#include <string>

namespace mtforge {

enum class ErrorCode {
    Validation,
    RateLimited,
    Timeout,
    Server5xx,
    Auth,
    MalformedResponse,
    ScriptExhausted,
    ParseFailure,
    ShapeMismatch,
    RankDomain,
    MissingCandidate,
    CountMismatch,
    ScoreDomain,
    UnknownChoice,
    MissingPlaceholder,
    InconsistentRounds,
    MixedN,
    MixedSystem,
    Empty,
    NoOverlap,
    MalformedLine,
    Io,
    Config,
};

const char* error_code_name(ErrorCode code);

/// Single exception type used across modules; `code` carries the category.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const { return code_; }

    /// Client errors worth another attempt under the retry policy.
    bool retryable() const {
        return code_ == ErrorCode::RateLimited || code_ == ErrorCode::Timeout ||
               code_ == ErrorCode::Server5xx;
    }

    // Server-suggested wait before retrying, milliseconds; <0 when absent.
    long long retry_after_ms = -1;

  private:
    ErrorCode code_;
};

} // namespace mtforge
