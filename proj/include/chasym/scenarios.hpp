#pragma once

// Pinned experiments. Each scenario reads its configuration from
// configs/scenarios/<name>.json, runs, and reports pass/fail per check with the
// measured values. Thresholds are fixed in code.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace chasym {

namespace fs = std::filesystem;

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ScenarioReport {
  std::string name;
  int criterion = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;
  std::string error;  // set when the scenario aborted

  bool pass() const;
  nlohmann::json to_json() const;
  /// "PASS  4  title: check=..., check=..."
  std::string line() const;
};

/// golden_table, semigroup_eig, kernel_decay, dipole_d1, critical_d2, irrelevant_d3, manifold,
/// cross_frame, solver_properties (criteria 1-9 in order).
const std::vector<std::string>& scenario_names();
fs::path scenario_config(const std::string& name);

/// Runs one scenario, writing sub-runs and report.json under `out_dir`.
/// Validation and numerical errors inside a scenario are caught and reported
/// as a failed scenario; unknown names are a ValidationError.
ScenarioReport run_scenario(const std::string& name, const fs::path& out_dir, const fs::path& config = {});

}  // namespace chasym
