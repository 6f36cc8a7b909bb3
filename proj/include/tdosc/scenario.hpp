#pragma once

#include <string>

#include "tdosc/ode.hpp"
#include "tdosc/profiles.hpp"

namespace tdosc {

struct GridOptions {
  int n = 256;
  double widths = 8.0;
};

/// A scenario file is the single source of truth for a run: profiles,
/// constants, interval, tolerances, solver and grid options.
struct Scenario {
  std::string name;
  SystemParams params;
  double theta_tolerance = 1e-8;
  SolverOptions solver;
  GridOptions grid;
};

/// Parses a scenario JSON document; throws ScenarioParseError on schema
/// violations (unknown kinds or keys, missing fields, bad shapes).
Scenario parse_scenario(const std::string& json_text);

/// Reads and parses a scenario file.
Scenario load_scenario(const std::string& path);

}  // namespace tdosc
