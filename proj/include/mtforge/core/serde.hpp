#pragma once

#include "mtforge/core/types.hpp"

#include <json.hpp>

namespace mtforge {

using Json = nlohmann::ordered_json;

Json to_json(const TranslationUnit& unit);
TranslationUnit unit_from_json(const Json& j);

Json to_json(const MethodConfig& config);
MethodConfig method_config_from_json(const Json& j);

Json to_json(const TranslationRecord& record);
TranslationRecord record_from_json(const Json& j);

Json to_json(const RankingRound& round);
RankingRound round_from_json(const Json& j);

Json to_json(const RankAggregate& aggregate);
RankAggregate aggregate_from_json(const Json& j);

/// One stable JSONL line (no trailing newline).
std::string record_to_line(const TranslationRecord& record);
TranslationRecord record_from_line(const std::string& line);

} // namespace mtforge
