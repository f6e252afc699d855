#pragma once

#include <memory>
#include <vector>

#include "onsum/function_handle.hpp"

namespace onsum {

/// Piecewise polynomial on [0,1]: cell c covers [knots[c], knots[c+1]) and
/// holds coefficients in the local coordinate t = u - knots[c].  Evaluation is
/// right-continuous with the left limit at u = 1.  Exact antiderivatives stay
/// in the class, which is what makes the kernel prefix sums closed-form for
/// the step-function systems.
class PiecewisePoly {
 public:
  PiecewisePoly() = default;

  /// knots.size() == cells.size() + 1, knots strictly increasing with
  /// knots.front() == 0, knots.back() == 1.
  PiecewisePoly(std::vector<double> knots, std::vector<std::vector<double>> cells);

  /// Step function: values[c] on cell c.
  static PiecewisePoly steps(std::vector<double> knots, std::vector<double> values);

  /// Uniform m-cell step function (enables O(1) cell lookup).
  static PiecewisePoly uniform_steps(std::vector<double> values);

  double value(double u) const;

  /// Exact u -> int_0^u p, continuous, one degree higher.
  PiecewisePoly antiderivative() const;

  /// Smallest interval outside which the poly vanishes identically.
  void support(double* lo, double* hi) const;

  /// Largest |value| over cell-edge and cell-midpoint samples (exact for the
  /// step and linear cases that arise from the step systems).
  double sample_sup() const;

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<std::vector<double>>& cells() const { return cells_; }
  int cell_count() const { return static_cast<int>(cells_.size()); }

  /// Wraps into a FunctionHandle; antiderivative_levels controls how many
  /// exact antiderivative handles are chained on (0, 1, or 2).
  FunctionHandle to_handle(int antiderivative_levels = 1) const;

  int cell_index(double u) const;

 private:
  std::vector<double> knots_;
  std::vector<std::vector<double>> cells_;  // local coefficients, low order first
  bool uniform_ = false;                    // knots are c/m, enables direct indexing
};

}  // namespace onsum
