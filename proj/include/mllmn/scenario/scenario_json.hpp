#pragma once

#include <string>

#include <json.hpp>

#include "mllmn/scenario/scenario.hpp"

namespace mllmn::scenario {

nlohmann::json to_json(const WirelessScenario& s);
/// Throws Error(parse_error) on missing fields or wrong types.
WirelessScenario scenario_from_json(const nlohmann::json& j);

void save_scenario(const WirelessScenario& s, const std::string& path);
WirelessScenario load_scenario(const std::string& path);

}  // namespace mllmn::scenario
