#pragma once

#include <string>

#include <json.hpp>

#include "hierarb/dominance.hpp"
#include "hierarb/scenario.hpp"
#include "hierarb/tatonnement.hpp"

namespace hierarb {

using Json = nlohmann::ordered_json;

inline constexpr const char* kDocumentVersion = "1";

/// Parses a scenario document. Any schema or validation problem becomes a
/// ConfigError whose message starts with "<source>:<line>: <pointer>: ".
MarketScenario parse_scenario(const std::string& text, const std::string& source = "<input>");
MarketScenario load_scenario(const std::string& path);

Json scenario_to_json(const MarketScenario& scenario);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& doc);

Json rationals_to_json(const RationalVector& values);
Json profile_to_json(const Profile& p);

/// "0,2,1" -> {0,2,1}; rejects anything else.
Profile parse_profile(const std::string& text);

Json ladder_to_json(const Ladders& ladders, const MarketScenario& scenario);
Json trace_to_json(const TatonnementTrace& trace, const MarketScenario& scenario);
Json plan_to_json(const TradePlan& plan, const MarketScenario& scenario);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace hierarb
