#pragma once

#include "mtforge/core/types.hpp"
#include "mtforge/llm/client.hpp"

#include <map>
#include <string>
#include <vector>

namespace mtforge {

enum class MethodRole {
    Translate,
    SelfCheck,
    UsiJudge,
    TrankRank,
    TrankCorrect,
    BonScore,
    PairJudge,
};

const char* method_role_name(MethodRole role);
MethodRole method_role_from_name(const std::string& name);

enum class InstructionLanguage { English, Target };

struct PromptTemplate {
    std::string id;
    MethodRole role = MethodRole::Translate;
    InstructionLanguage instruction_language = InstructionLanguage::English;
    std::string benchmark; // empty = any benchmark
    std::string language;  // empty = any target language
    std::string body;      // with <placeholder> markers
};

/// Placeholders the role's body must contain.
std::vector<std::string> required_placeholders(MethodRole role);

/// Lookup key is (role, benchmark, target language) with fallback to the
/// role's default templates; immutable after load.
class PromptRegistry {
  public:
    static PromptRegistry builtin();

    /// Loads `<role-dir>/<id>.prompt` files; entries with a matching id
    /// replace built-ins.
    void load_dir(const std::string& path);

    void add(PromptTemplate tmpl);

    const PromptTemplate& get(MethodRole role, const std::string& benchmark = "",
                              const std::string& language = "") const;

    /// All matching variants, most specific first; used for multi-prompt
    /// sampling (p > 1).
    std::vector<const PromptTemplate*> variants(MethodRole role,
                                                const std::string& benchmark = "",
                                                const std::string& language = "") const;

    size_t size() const { return templates_.size(); }

  private:
    std::vector<PromptTemplate> templates_;
};

/// Single user message with every placeholder substituted verbatim.
std::vector<ChatMessage> render(const PromptTemplate& tmpl, const TranslationUnit& unit,
                                const LanguagePair& pair,
                                const std::map<std::string, std::string>& extras = {});

/// Rendering for prompts that carry no unit (pairwise judge).
std::vector<ChatMessage> render_raw(const PromptTemplate& tmpl,
                                    const std::map<std::string, std::string>& values);

/// The unit's question/answers placeholder values: answers serialize as a
/// JSON array for list-valued options, plain text for a single answer.
std::map<std::string, std::string> unit_placeholders(const TranslationUnit& unit);

} // namespace mtforge
