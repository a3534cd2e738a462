#pragma once

#include <string>

#include "locint/scenario.hpp"

namespace locint::testing {

inline std::string fixture(const std::string& name) {
  return std::string(SCENARIO_DIR) + "/" + name;
}

inline BuiltScenario build_fixture(const std::string& name) {
  return build_scenario(parse_scenario(fixture(name)));
}

}  // namespace locint::testing
