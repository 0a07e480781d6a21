#pragma once

#include "mtforge/core/types.hpp"
#include "mtforge/llm/client.hpp"
#include "mtforge/prompt/template.hpp"

namespace mtforge {

/// Shared context for one translation of one unit.
struct EngineContext {
    LlmClient& client;
    const PromptRegistry& registry;
    LanguagePair pair;
    std::string benchmark_name; // registry override key, may be empty
};

/// Zero-shot translation, optionally followed by a fresh-context
/// evaluate-and-correct call. 1 call, 2 with check.
TranslationRecord translate_sc(const TranslationUnit& unit, const MethodConfig& config,
                               EngineContext& ctx);

/// N samples at sample_temperature, one scoring call; argmax score wins
/// (ties to the lowest index). N+1 calls.
TranslationRecord translate_bon(const TranslationUnit& unit, const MethodConfig& config,
                                EngineContext& ctx);

/// N samples, one fusion call whose output is final. N+1 calls.
TranslationRecord translate_usi(const TranslationUnit& unit, const MethodConfig& config,
                                EngineContext& ctx);

/// N samples, N ranking rounds under the cyclic rotation, mean-rank winner,
/// optional correction pass. 2N+1 calls (2N without correction).
TranslationRecord translate_trank(const TranslationUnit& unit, const MethodConfig& config,
                                  EngineContext& ctx);

/// Dispatch on config.method; client and parse errors become a FAILED
/// record rather than propagating.
TranslationRecord translate_unit(const TranslationUnit& unit, const MethodConfig& config,
                                 EngineContext& ctx);

} // namespace mtforge
