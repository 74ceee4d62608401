#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pmpqoc/core/scenario.hpp"

namespace pmpqoc {

std::vector<std::string> builtin_names();
// Embedded JSON text; throws ArgumentError for unknown names.
std::string builtin_scenario_json(std::string_view name);
Scenario builtin_scenario(std::string_view name);

}  // namespace pmpqoc
