#pragma once

#include <string>
#include <vector>

#include "onsum/quadrature.hpp"
#include "onsum/systems.hpp"

namespace onsum {

/// A_n^alpha by the stable product recurrence A_m = A_{m-1} (m + alpha) / m,
/// A_0 = 1.  Requires n >= 0 and alpha > -1; throws std::overflow_error when
/// the value leaves the double range.
double cesaro_a(int n, double alpha);

/// Weight table w_{n,k} = A_{n-k}^alpha / A_n^alpha for k = 1..n.  The oldest
/// coefficient gets the largest weight w_{n,1} = n/(n+alpha); the newest gets
/// 1/A_n^alpha.  All weights lie in (0,1] and decrease in k for alpha > 0.
struct CesaroWeights {
  int n = 0;
  double alpha = 0.0;
  std::vector<double> a;        // A_0^alpha .. A_n^alpha
  std::vector<double> weights;  // w_{n,1} .. w_{n,n}
};
CesaroWeights cesaro_weights(int n, double alpha);

/// C_k(f) = int_0^1 f phi_k by pure quadrature.
double fourier_coefficient(const FunctionHandle& f, const OrthonormalSystem& S,
                           int k, const QuadratureSpec& spec = {});

/// Named coefficient run, the payload of the coeffs subcommand.
struct CoefficientVector {
  std::string system;
  std::string function;
  std::vector<double> values;  // C_1 .. C_N
};
CoefficientVector coefficient_vector(const FunctionHandle& f, const std::string& fname,
                                     const OrthonormalSystem& S, int N,
                                     const QuadratureSpec& spec = {});

/// Coefficients and element handles for one (f, S) pair, grown on demand so
/// sums at many (n, alpha, x) share the same quadrature work.
class CoefficientTable {
 public:
  CoefficientTable(FunctionHandle f, OrthonormalSystem S, QuadratureSpec spec = {});

  void ensure(int n);
  double coefficient(int k);
  double partial_sum(int n, double x);
  double cesaro_mean(int n, double alpha, double x);

  const OrthonormalSystem& system() const { return sys_; }

 private:
  FunctionHandle f_;
  OrthonormalSystem sys_;
  QuadratureSpec spec_;
  std::vector<double> coeffs_;
  std::vector<FunctionHandle> elements_;
};

/// One-shot conveniences over a temporary table.
double partial_sum(const FunctionHandle& f, const OrthonormalSystem& S, int n,
                   double x, const QuadratureSpec& spec = {});
double cesaro_mean(const FunctionHandle& f, const OrthonormalSystem& S, int n,
                   double alpha, double x, const QuadratureSpec& spec = {});

}  // namespace onsum
