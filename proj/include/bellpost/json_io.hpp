#pragma once

#include <string>

#include "json.hpp"

#include "bellpost/scenario.hpp"

namespace bellpost {

// {scenario: {parties, settings, outcomes}, table: [[...]]} — one row per
// joint setting, values in the documented party-1-fastest order. Round trips
// preserve full double precision.
nlohmann::ordered_json behavior_to_json(const Behavior& b);
Behavior behavior_from_json(const nlohmann::ordered_json& j);

}  // namespace bellpost
