#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "onsum/quadrature.hpp"
#include "onsum/report.hpp"

namespace onsum {

/// Shared configuration for the sweep subcommands.  `enforce` turns the
/// committed thresholds into hard checks for the systems that have them;
/// systems without committed constants always run exploratory (rows only).
struct SweepConfig {
  std::string system = "cosine";
  std::vector<double> alphas{1.0};
  std::vector<int> n_values;
  std::vector<double> xs;
  std::vector<std::string> functions;  // sigma sweep only
  QuadratureSpec quad;
  std::uint64_t seed = 12345;
  bool enforce = true;
};

/// Throws std::invalid_argument on an empty or non-increasing n schedule,
/// alpha <= 0, x outside [0,1], or a bad quadrature spec.
void validate_sweep_config(const SweepConfig& c, bool needs_functions = false);

/// Closed uniform grid with m points: 0, 1/(m-1), ..., 1.
std::vector<double> uniform_grid(int m);

struct SweepOutcome {
  RunManifest manifest;
  ReportTable table;
  bool ok = true;
  std::string violation;  // names the first failed check
};

/// Kernel diagnostics per (n, alpha, x): h_value, phi_sq_ratio,
/// cell_mass_slack, prefix_at_1.
SweepOutcome run_hn_sweep(const SweepConfig& c);

/// Extremal rows per (n, alpha, x): h_value, |U_n(r_n)|, their gap c_n, the
/// Lipschitz norm of r_n, and the sign-change count.
SweepOutcome run_extremal_sweep(const SweepConfig& c);

/// Cesaro-mean growth per catalog function: sigma and its running sup over
/// the n schedule.  Every function must carry a derivative handle.
SweepOutcome run_sigma_sweep(const SweepConfig& c);

}  // namespace onsum
