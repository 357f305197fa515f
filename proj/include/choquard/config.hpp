#pragma once

#include <optional>
#include <string>
#include <vector>

#include "choquard/grid.hpp"
#include "choquard/minimizer.hpp"

namespace choquard {

struct InitSpec {
  std::string kind = "gaussian";  ///< "gaussian" or "random"
  double width = 1.0;
  IndexArray shift_cells{};
};

struct PhaseSpec {
  double p_min = 0.0, p_max = 0.0;
  int p_count = 0;
  double q_min = 0.0, q_max = 0.0;
  int q_count = 0;
};

struct BlSpec {
  std::vector<IndexArray> shifts;
  double bump_radius = 1.5;
  double bump_amplitude = 1.0;
};

struct VanishSpec {
  std::vector<double> lambdas;
  double sigma = 0.55;
  double support_radius = 0.0;  ///< 0 means 5 sigma
};

/// Parsed and validated run configuration. Unknown keys anywhere in the
/// config file are rejected.
struct RunConfig {
  std::string command;
  std::optional<Params> params;
  int n = 0;
  double L = 0.0;
  bool has_grid = false;
  SolveConfig solver;
  std::string output_dir = ".";
  InitSpec init;
  std::optional<PhaseSpec> phase;
  std::optional<BlSpec> bltest;
  std::optional<VanishSpec> vanish;
  std::optional<std::string> input;
};

/// Loads the JSON config for `command`, enforcing the per-command key sets
/// and all Params/Grid invariants. Throws Error(invalid_config) with a
/// line/field message on any violation.
RunConfig load_run_config(const std::string& path, const std::string& command);

}  // namespace choquard
