#include "mtforge/prompt/template.hpp"

#include "mtforge/core/error.hpp"
#include "mtforge/core/serde.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mtforge {

const char* method_role_name(MethodRole role) {
    switch (role) {
        case MethodRole::Translate: return "translate";
        case MethodRole::SelfCheck: return "self_check";
        case MethodRole::UsiJudge: return "usi_judge";
        case MethodRole::TrankRank: return "trank_rank";
        case MethodRole::TrankCorrect: return "trank_correct";
        case MethodRole::BonScore: return "bon_score";
        case MethodRole::PairJudge: return "pair_judge";
    }
    return "translate";
}

MethodRole method_role_from_name(const std::string& name) {
    for (MethodRole role :
         {MethodRole::Translate, MethodRole::SelfCheck, MethodRole::UsiJudge,
          MethodRole::TrankRank, MethodRole::TrankCorrect, MethodRole::BonScore,
          MethodRole::PairJudge}) {
        if (name == method_role_name(role)) return role;
    }
    throw Error(ErrorCode::Config, "unknown method role '" + name + "'");
}

std::vector<std::string> required_placeholders(MethodRole role) {
    switch (role) {
        case MethodRole::Translate:
            return {"target_language", "original_question", "original_answers"};
        case MethodRole::SelfCheck:
        case MethodRole::UsiJudge:
        case MethodRole::TrankRank:
        case MethodRole::BonScore:
            return {"target_language", "original_question", "original_answers",
                    "responses"};
        case MethodRole::TrankCorrect:
            return {"target_language", "original_question", "original_answers",
                    "responses", "selected"};
        case MethodRole::PairJudge:
            return {"original_text", "output_1", "output_2"};
    }
    return {};
}

namespace {

constexpr const char* kBaseTranslate = R"(Instructions: Imagine you're part of a team at an international education center that's revamping its exams for a global audience. Your job is to translate an English question and its answer options into <target_language> so that students from <target_language> schools can be evaluated too. Just provide the final translation -- leave out any extra comments or explanations. Use language which is authentic for <target_language> natives. Remember to keep the answer options connected to the question, using the same format as the original (a list for multiple choices or plain text for a single answer). Please do not translate valid code in any of the programming languages.

Original text: {"Original_question": "<original_question>", "Original_answers": <original_answers>}

Output instructions: Now, please give your final translation in <target_language> exactly in this format, with only the translated content: {"Question": "your_translated_question", "Answers": "translated_answers"})";

constexpr const char* kTranslateFaithful = R"(Instructions: You are an expert translator localizing an exam for <target_language>-speaking students. Translate the English question and its answer options into <target_language>, staying as faithful to the original meaning as possible. Preserve the connection between the question and its answer options, keep numbers, named entities and code untranslated where appropriate, and output nothing but the translation itself.

Original text: {"Original_question": "<original_question>", "Original_answers": <original_answers>}

Output instructions: Give your final translation in <target_language> exactly in this format, with only the translated content: {"Question": "your_translated_question", "Answers": "translated_answers"})";

constexpr const char* kTranslateNatural = R"(Instructions: Translate the following English question and its answer options into <target_language>. Prioritize natural, idiomatic phrasing that a native <target_language> speaker would use, while preserving the exact meaning, difficulty and structure of the original. Keep the same format as the original (a list for multiple choices or plain text for a single answer). Do not translate valid program code.

Original text: {"Original_question": "<original_question>", "Original_answers": <original_answers>}

Output instructions: Give your final translation in <target_language> exactly in this format, with only the translated content: {"Question": "your_translated_question", "Answers": "translated_answers"})";

// Instruction text addressed to the model in the target language itself; a
// generic scaffold since the registry cannot ship native text for every
// supported language.
constexpr const char* kTranslateNativeV1 = R"(Instructions (respond as a native <target_language> speaker, thinking in <target_language>): Translate the English exam question and its answer options into <target_language>. Write the translation the way it would appear in an exam authored originally in <target_language>. Keep the answer options connected to the question and keep the original format (a list for multiple choices or plain text for a single answer).

Original text: {"Original_question": "<original_question>", "Original_answers": <original_answers>}

Output instructions: Give your final translation in <target_language> exactly in this format, with only the translated content: {"Question": "your_translated_question", "Answers": "translated_answers"})";

constexpr const char* kTranslateNativeV2 = R"(Instructions (respond as a native <target_language> speaker): You are a <target_language> teacher preparing teaching materials. Rewrite the English question and its answer options in <target_language> with correct declension and conjugation, so the question reads naturally together with every answer option. Keep the original format (a list for multiple choices or plain text for a single answer) and do not translate program code.

Original text: {"Original_question": "<original_question>", "Original_answers": <original_answers>}

Output instructions: Give your final translation in <target_language> exactly in this format, with only the translated content: {"Question": "your_translated_question", "Answers": "translated_answers"})";

constexpr const char* kSelfCheck = R"(You are reviewing a translation from English to <target_language>. Your task is to evaluate and correct the translation with respect to the original text content. Fix grammatical errors, unnatural phrasing and mistranslated domain terms; keep already-correct parts unchanged. Make sure the answer options stay connected to the question.

Original text: {"Original_question": "<original_question>", "Original_answers": <original_answers>}

Current translation: <responses>

Output the corrected translation in <target_language> exactly in this format, with only the translated content: {"Question": "corrected_question", "Answers": "corrected_answers"})";

constexpr const char* kUsiJudge = R"(My task is to translate BENCHMARK questions with answers from English to <target_language>. Your task is to evaluate if the response preserves the original question idea and to verify the correctness of declension and conjunction of words in the target language.

The original text in English is: Question: <original_question>, Answers: <original_answers>

I have generated the following responses: <responses>

Combine the best features from responses to form the best response from grammatical and coherent points of view. Look for the next metrics:
* Quality of translation, including grammatical correctness
* Domain knowledge - were the terms correctly translated w.r.t to domain? Were coding terms or function names preserved (not translated)?
* Is the question text fully translated? Is the question idea preserved?
* Are all the answer options/texts fully translated?
* Are the words written correctly? Are there any typos?

Output only the selected response: Question: selected question, Answer: selected answers)";

constexpr const char* kTrankRank = R"(My task is to translate BENCHMARK questions from English to <target_language>. Your task is to rank my translations and select the best one.

Ranking criteria:
* Quality of translation
* Domain knowledge - were the terms correctly translated w.r.t to domain? Were coding terms or function names preserved (one would usually not translate coding operators or function names)?
* Is the question text fully translated? Is the question idea preserved?
* Are all the answer options/texts fully translated?
* Are the words written correctly? Are there any typos?
* Are the declension and the conjunction of words written correctly in the target language if you connect answer options with the question?

Original: {"original_question": "<original_question>", "original_answers": <original_answers>}

Candidates: <responses>

Instruction: Select the best response (1st place = best). Correct if needed before output.

Output: Reasoning, then: {"summary": "...", "final_ranks": {...}, "rankings_list": [...], "best_translation": {...}})";

constexpr const char* kTrankCorrect = R"(My task is to translate BENCHMARK questions from English to <target_language>. A ranking pass selected the best of my candidate translations. Your task is to correct and refine the selected translation if needed, looking at the strong and weak sides of all candidates.

Original: {"original_question": "<original_question>", "original_answers": <original_answers>}

All candidates: <responses>

Selected translation: <selected>

Output the final corrected translation in <target_language> exactly in this format, with only the translated content: {"Question": "corrected_question", "Answers": "corrected_answers"})";

constexpr const char* kBonScore = R"(My task is to translate questions from English to <target_language>. Score my translations 1-10 (10 = best).

Original: Question: <original_question>, Answers: <original_answers>

Scoring metrics: (1) Translation quality; (2) Question fully translated?; (3) All answers translated?; (4) Question idea preserved?; (5) Correct grammar?

Responses: <responses>

Output scores only: Response 1: score, Response 2: score, ..., Answers: [list of scores])";

constexpr const char* kPairJudge = R"(Current User Query

{"instruction": Your task is compare two translation from English to <target_language> and compare their advantages and disadvantages. Lastly, you have to pick one of three choices: A is better, B is better or they are equal.}

Original text (English)

<original_text>

Translation A (<target_language>)

<begin_of_translation_A>
<output_1>
<end_of_translation_A>

Translation B (<target_language>)

<begin_of_translation_B>
<output_2>
<end_of_translation_B>

Evaluation

Rules

You should compare the above two translations from English to <target_language> based on your analysis of the user queries. You should first write down your analysis and the checklist that you used for the evaluation, and then provide your assessment according to the checklist. There are two choices to give your final assessment: ["A+", "B+",], which correspond to the following meanings:

- `A+`: Translation A is better than Translation B.
- `B+`: Translation B is better than Translation A.
- `T=`: Translation A and Translation B are equally good. Tie.

Output Format

First, please output your analysis for each model translation from English to <target_language>, and then summarize your assessment to three aspects: "reason A>B", and "reason B>A", and finally make your choice for the final assessment. Please provide your evaluation results in the following json format (starting with {{ and ending with }} ), with no quotes around the curly brackets by filling in the placeholders in []:

analysis_of_A: <analysis of Translation A>,
analysis_of_B: <analysis of Translation B>,
reason_of_A_equals_B: <where Translation A and B perform equally well>,
reason_of_A_better_than_B: <where Translation A is better than Translation B>,
reason_of_B_better_than_A: <where Translation B is better than Translation A>,
choice: <A+, B+ or T=>

Your answer should be a valid json dictionary following exactly this format.

Your answer:)";

} // namespace

PromptRegistry PromptRegistry::builtin() {
    PromptRegistry registry;
    registry.add({"base", MethodRole::Translate, InstructionLanguage::English, "", "",
                  kBaseTranslate});
    registry.add({"faithful", MethodRole::Translate, InstructionLanguage::English, "", "",
                  kTranslateFaithful});
    registry.add({"natural", MethodRole::Translate, InstructionLanguage::English, "", "",
                  kTranslateNatural});
    registry.add({"native_v1", MethodRole::Translate, InstructionLanguage::Target, "", "",
                  kTranslateNativeV1});
    registry.add({"native_v2", MethodRole::Translate, InstructionLanguage::Target, "", "",
                  kTranslateNativeV2});
    registry.add({"self_check", MethodRole::SelfCheck, InstructionLanguage::English, "",
                  "", kSelfCheck});
    registry.add({"usi_judge", MethodRole::UsiJudge, InstructionLanguage::English, "", "",
                  kUsiJudge});
    registry.add({"trank_rank", MethodRole::TrankRank, InstructionLanguage::English, "",
                  "", kTrankRank});
    registry.add({"trank_correct", MethodRole::TrankCorrect, InstructionLanguage::English,
                  "", "", kTrankCorrect});
    registry.add({"bon_score", MethodRole::BonScore, InstructionLanguage::English, "", "",
                  kBonScore});
    registry.add({"pair_judge", MethodRole::PairJudge, InstructionLanguage::English, "",
                  "", kPairJudge});
    return registry;
}

void PromptRegistry::add(PromptTemplate tmpl) {
    for (const std::string& ph : required_placeholders(tmpl.role)) {
        if (tmpl.body.find("<" + ph + ">") == std::string::npos)
            throw Error(ErrorCode::MissingPlaceholder,
                        "template '" + tmpl.id + "' lacks placeholder '" + ph + "'");
    }
    for (auto& existing : templates_) {
        if (existing.id == tmpl.id && existing.role == tmpl.role) {
            existing = std::move(tmpl);
            return;
        }
    }
    templates_.push_back(std::move(tmpl));
}

void PromptRegistry::load_dir(const std::string& path) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(path))
        throw Error(ErrorCode::Io, "prompt pack directory not found: " + path);
    for (const auto& role_dir : fs::directory_iterator(path)) {
        if (!role_dir.is_directory()) continue;
        MethodRole role = method_role_from_name(role_dir.path().filename().string());
        for (const auto& file : fs::directory_iterator(role_dir.path())) {
            if (file.path().extension() != ".prompt") continue;
            std::ifstream in(file.path());
            if (!in) throw Error(ErrorCode::Io, "cannot read " + file.path().string());
            PromptTemplate tmpl;
            tmpl.id = file.path().stem().string();
            tmpl.role = role;
            std::string line;
            // header: "key: value" lines up to the first blank line
            while (std::getline(in, line)) {
                if (!line.empty() && line.back() == '\r') line.pop_back();
                if (line.empty()) break;
                size_t colon = line.find(':');
                if (colon == std::string::npos)
                    throw Error(ErrorCode::Config,
                                "bad header line in " + file.path().string());
                std::string key = line.substr(0, colon);
                std::string value = line.substr(colon + 1);
                value.erase(0, value.find_first_not_of(' '));
                if (key == "language_of_instructions")
                    tmpl.instruction_language = value == "target"
                                                    ? InstructionLanguage::Target
                                                    : InstructionLanguage::English;
                else if (key == "benchmark") tmpl.benchmark = value;
                else if (key == "language") tmpl.language = value;
                else
                    throw Error(ErrorCode::Config, "unknown header key '" + key +
                                                       "' in " + file.path().string());
            }
            std::stringstream body;
            body << in.rdbuf();
            tmpl.body = body.str();
            while (!tmpl.body.empty() &&
                   (tmpl.body.back() == '\n' || tmpl.body.back() == '\r'))
                tmpl.body.pop_back();
            add(std::move(tmpl));
        }
    }
}

std::vector<const PromptTemplate*> PromptRegistry::variants(
    MethodRole role, const std::string& benchmark, const std::string& language) const {
    std::vector<std::pair<int, const PromptTemplate*>> scored;
    for (const auto& t : templates_) {
        if (t.role != role) continue;
        if (!t.benchmark.empty() && t.benchmark != benchmark) continue;
        if (!t.language.empty() && t.language != language) continue;
        int score = (t.benchmark.empty() ? 0 : 2) + (t.language.empty() ? 0 : 1);
        scored.emplace_back(score, &t);
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<const PromptTemplate*> out;
    for (const auto& [_, t] : scored) out.push_back(t);
    return out;
}

const PromptTemplate& PromptRegistry::get(MethodRole role, const std::string& benchmark,
                                          const std::string& language) const {
    auto matches = variants(role, benchmark, language);
    if (matches.empty())
        throw Error(ErrorCode::Config,
                    std::string("no template for role ") + method_role_name(role));
    return *matches.front();
}

std::map<std::string, std::string> unit_placeholders(const TranslationUnit& unit) {
    std::map<std::string, std::string> values;
    if (unit.is_benchmark()) {
        const auto& e = unit.benchmark();
        values["original_question"] = e.question;
        if (e.answers.size() > 1) {
            Json arr = Json::array();
            for (const auto& a : e.answers) arr.push_back(a);
            values["original_answers"] = arr.dump();
        } else {
            values["original_answers"] =
                Json(e.answers.empty() ? "" : e.answers.front()).dump();
        }
    } else {
        // Flat fields: the first field is the text to translate, the rest
        // travel as the answers list so the joint-translation prompts apply
        // unchanged.
        const auto& e = unit.dataset();
        values["original_question"] = e.fields.empty() ? "" : e.fields.front().second;
        if (e.fields.size() > 2) {
            Json arr = Json::array();
            for (size_t i = 1; i < e.fields.size(); ++i) arr.push_back(e.fields[i].second);
            values["original_answers"] = arr.dump();
        } else if (e.fields.size() == 2) {
            values["original_answers"] = Json(e.fields[1].second).dump();
        } else {
            values["original_answers"] = "\"\"";
        }
    }
    return values;
}

std::vector<ChatMessage> render_raw(const PromptTemplate& tmpl,
                                    const std::map<std::string, std::string>& values) {
    for (const std::string& ph : required_placeholders(tmpl.role)) {
        if (tmpl.body.find("<" + ph + ">") == std::string::npos)
            throw Error(ErrorCode::MissingPlaceholder, ph);
        if (!values.count(ph)) throw Error(ErrorCode::MissingPlaceholder, ph);
    }
    std::string text = tmpl.body;
    for (const auto& [key, value] : values) {
        const std::string marker = "<" + key + ">";
        size_t pos = 0;
        while ((pos = text.find(marker, pos)) != std::string::npos) {
            text.replace(pos, marker.size(), value);
            pos += value.size();
        }
    }
    return {{"user", text}};
}

std::vector<ChatMessage> render(const PromptTemplate& tmpl, const TranslationUnit& unit,
                                const LanguagePair& pair,
                                const std::map<std::string, std::string>& extras) {
    std::map<std::string, std::string> values = unit_placeholders(unit);
    values["target_language"] = pair.target_display_name;
    for (const auto& [key, value] : extras) values[key] = value;
    return render_raw(tmpl, values);
}

} // namespace mtforge
