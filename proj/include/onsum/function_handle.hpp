#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace onsum {

/// A real-valued function on [0,1] together with the metadata the quadrature
/// and kernel layers need: jump/kink locations, an oscillation budget, and
/// optional exact antiderivative / derivative companions.
///
/// Conventions: evaluators are right-continuous at interior jumps and take the
/// left limit at u = 1.  `antiderivative`, when present, is u -> int_0^u f and
/// is trusted as exact (it is only ever attached from closed forms).
struct FunctionHandle {
  std::function<double(double)> evaluator;

  /// Sorted, strictly increasing, all in (0,1): points where f may jump or kink.
  std::vector<double> breakpoints;

  /// Cycles per unit length; 0 for non-oscillatory functions.  Drives panel
  /// subdivision (at least `oscillation_panels_per_period` panels per period).
  double max_frequency = 0.0;

  /// f vanishes outside [support_lo, support_hi].  Default: no claim.
  double support_lo = 0.0;
  double support_hi = 1.0;

  std::shared_ptr<const FunctionHandle> antiderivative;
  std::shared_ptr<const FunctionHandle> derivative;

  bool valid() const { return static_cast<bool>(evaluator); }

  /// Domain-checked evaluation.
  double operator()(double u) const {
    if (!(u >= 0.0 && u <= 1.0))
      throw std::domain_error("FunctionHandle: argument outside [0,1]");
    return evaluator(u);
  }
};

inline double eval(const FunctionHandle& f, double u) { return f(u); }

/// sup |f|, the worst adjacent-pair difference quotient, and their sum,
/// measured on the uniform m-point closed grid merged with f's breakpoints.
struct LipschitzProfile {
  double sup_norm = 0.0;
  double lip_seminorm = 0.0;
  double lip1_norm = 0.0;  // sup_norm + lip_seminorm
};

LipschitzProfile lip_profile(const FunctionHandle& f, int grid_size);

/// Catalog lookup.  Known names: "one", "identity", "cos4pi_shifted",
/// "gamma_compressed", "poly:c0,c1,...".  Throws std::invalid_argument on
/// unknown names or malformed coefficient lists.
FunctionHandle make_named(const std::string& name);

/// Polynomial c0 + c1 u + ... with exact antiderivative and derivative attached.
FunctionHandle polynomial(const std::vector<double>& coeffs);

/// v(u) = f(2u) on [0,1/2), 0 on [1/2,1].  Metadata, antiderivative and
/// derivative transform along.
FunctionHandle compress_to_half(const FunctionHandle& f);

/// Sorts, deduplicates, and drops endpoints; helper for handle constructors.
std::vector<double> normalize_breakpoints(std::vector<double> pts);

}  // namespace onsum
