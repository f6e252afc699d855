#pragma once

#include <string>
#include <vector>

#include "onsum/kernel.hpp"
#include "onsum/quadrature.hpp"
#include "onsum/systems.hpp"

namespace onsum {

/// Result of checking one identity: both sides, the right side's individual
/// terms exactly as accumulated, and the absolute gap.
struct IdentityLedger {
  std::string identity;
  std::string parameters;
  double lhs = 0.0;
  double rhs = 0.0;
  std::vector<double> rhs_terms;
  double abs_gap = 0.0;
};

/// Summation by parts of int_0^1 g F du over the uniform n-cell grid, middle
/// terms anchored at cell means of g:
///   int g F = n sum_{i<n} [int_cell (g(u) - g(u+1/n)) du] P(i/n)
///           + sum_{i<=n} int_cell (g(u) - mean_i(g)) F(u) du
///           + n [int_{1-1/n}^1 g] P(1),        P(y) = int_0^y F.
/// Exact for integrable g, F.  `as_printed` drops the i = n middle term, the
/// truncated variant whose nonzero gap the tests pin down.
IdentityLedger parts_identity_mean(const FunctionHandle& g, const FunctionHandle& F,
                                   int n, const QuadratureSpec& spec = {},
                                   bool as_printed = false);

/// Same skeleton anchored at right-endpoint values of f:
///   int f G = sum_{i<n} (f(i/n) - f((i+1)/n)) P(i/n)
///           + sum_{i<=n} int_cell (f(u) - f(i/n)) G(u) du
///           + f(1) P(1).
IdentityLedger parts_identity_endpoint(const FunctionHandle& f, const FunctionHandle& G,
                                       int n, const QuadratureSpec& spec = {},
                                       bool as_printed = false);

/// Boundary form of the Cesaro mean for differentiable f (f must carry its
/// derivative handle):  sigma_n(x, f) = f(1) sigma_n(x, 1) - int_0^1 f' Q_n.
IdentityLedger sigma_boundary_identity(const FunctionHandle& f,
                                       const OrthonormalSystem& S, int n,
                                       double alpha, double x,
                                       const QuadratureSpec& spec = {});

/// Coefficient-level boundary form:  C_k(f) = f(1) C_k(1) - int_0^1 f' g_k.
IdentityLedger coefficient_boundary_identity(const FunctionHandle& f,
                                             const OrthonormalSystem& S, int k,
                                             const QuadratureSpec& spec = {});

}  // namespace onsum
