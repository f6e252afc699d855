#pragma once

#include <vector>

#include "onsum/function_handle.hpp"

namespace onsum {

/// Kahan compensated accumulator.  Used for every sum whose length depends on
/// n or the panel count, so results do not drift with summation order tweaks.
class KahanSum {
 public:
  void add(double v) {
    double y = v - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

struct QuadratureSpec {
  int order = 8;        // Gauss-Legendre nodes per panel
  int min_panels = 4;   // per piece between breakpoints
  int osc_panels = 4;   // panels per oscillation period
};

/// Nodes and weights for q-point Gauss-Legendre on [-1,1]; cached per order.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

/// int_a^b f, composite Gauss-Legendre.  Panels never straddle a breakpoint
/// of f, each piece gets at least min_panels panels, and panel width is capped
/// at 1/(osc_panels * max_frequency).  Pure quadrature: attached
/// antiderivatives are never consulted, so this is always an independent route
/// against closed forms.  Throws std::domain_error unless 0 <= a <= b <= 1.
double integrate(const FunctionHandle& f, double a, double b,
                 const QuadratureSpec& spec = {});

/// int_a^b f*g with breakpoints merged, frequencies added, supports intersected.
double integrate_product(const FunctionHandle& f, const FunctionHandle& g,
                         double a, double b, const QuadratureSpec& spec = {});

/// int_a^b |f|.  Sign changes are bracketed on the panel-edge/midpoint grid
/// and refined by bisection so panels never straddle a zero crossing.
double integrate_abs(const FunctionHandle& f, double a, double b,
                     const QuadratureSpec& spec = {});

/// u -> int_0^u f as a FunctionHandle.  Uses the attached closed-form
/// antiderivative when present (with `derivative` pointing back at f);
/// otherwise builds a cached cumulative panel table and finishes each query
/// with a partial panel, which keeps repeated prefix queries cheap and
/// deterministic.
FunctionHandle prefix_integral(const FunctionHandle& f,
                               const QuadratureSpec& spec = {});

}  // namespace onsum
