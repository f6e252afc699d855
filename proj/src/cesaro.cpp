#include "onsum/cesaro.hpp"

#include <cmath>
#include <stdexcept>

namespace onsum {

double cesaro_a(int n, double alpha) {
  if (n < 0) throw std::invalid_argument("cesaro_a: n < 0");
  if (!(alpha > -1.0)) throw std::invalid_argument("cesaro_a: alpha <= -1");
  double a = 1.0;
  for (int m = 1; m <= n; ++m) {
    // multiply before dividing: for integer alpha the product is an exact
    // integer below 2^53, so A_n^1 == n + 1 holds bit for bit
    a = a * (m + alpha) / m;
    if (!std::isfinite(a))
      throw std::overflow_error("cesaro_a: overflow at n=" + std::to_string(m));
  }
  return a;
}

CesaroWeights cesaro_weights(int n, double alpha) {
  if (n < 1) throw std::invalid_argument("cesaro_weights: n < 1");
  if (!(alpha > -1.0)) throw std::invalid_argument("cesaro_weights: alpha <= -1");
  CesaroWeights t;
  t.n = n;
  t.alpha = alpha;
  t.a.resize(n + 1);
  t.a[0] = 1.0;
  for (int m = 1; m <= n; ++m) {
    t.a[m] = t.a[m - 1] * (m + alpha) / m;
    if (!std::isfinite(t.a[m]))
      throw std::overflow_error("cesaro_weights: overflow at n=" + std::to_string(m));
  }
  t.weights.resize(n);
  for (int k = 1; k <= n; ++k) t.weights[k - 1] = t.a[n - k] / t.a[n];
  return t;
}

double fourier_coefficient(const FunctionHandle& f, const OrthonormalSystem& S,
                           int k, const QuadratureSpec& spec) {
  return integrate_product(f, S.element(k), 0.0, 1.0, spec);
}

CoefficientVector coefficient_vector(const FunctionHandle& f, const std::string& fname,
                                     const OrthonormalSystem& S, int N,
                                     const QuadratureSpec& spec) {
  if (N < 1 || N > S.max_index())
    throw std::out_of_range("coefficient_vector: N outside 1..max_index");
  CoefficientVector cv;
  cv.system = S.name();
  cv.function = fname;
  CoefficientTable table(f, S, spec);
  table.ensure(N);
  cv.values.resize(N);
  for (int k = 1; k <= N; ++k) cv.values[k - 1] = table.coefficient(k);
  return cv;
}

CoefficientTable::CoefficientTable(FunctionHandle f, OrthonormalSystem S,
                                   QuadratureSpec spec)
    : f_(std::move(f)), sys_(std::move(S)), spec_(spec) {
  if (!f_.valid()) throw std::invalid_argument("CoefficientTable: empty function");
}

void CoefficientTable::ensure(int n) {
  if (n < 0 || n > sys_.max_index())
    throw std::out_of_range("CoefficientTable: n outside 0..max_index");
  while (static_cast<int>(coeffs_.size()) < n) {
    const int k = static_cast<int>(coeffs_.size()) + 1;
    elements_.push_back(sys_.element(k));
    coeffs_.push_back(integrate_product(f_, elements_.back(), 0.0, 1.0, spec_));
  }
}

double CoefficientTable::coefficient(int k) {
  if (k < 1) throw std::out_of_range("CoefficientTable: k < 1");
  ensure(k);
  return coeffs_[k - 1];
}

double CoefficientTable::partial_sum(int n, double x) {
  if (n < 1) throw std::out_of_range("CoefficientTable: n < 1");
  ensure(n);
  KahanSum s;
  for (int k = 1; k <= n; ++k) s.add(coeffs_[k - 1] * elements_[k - 1](x));
  return s.value();
}

double CoefficientTable::cesaro_mean(int n, double alpha, double x) {
  if (n < 1) throw std::out_of_range("CoefficientTable: n < 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("cesaro_mean: alpha must be > 0");
  ensure(n);
  const CesaroWeights w = cesaro_weights(n, alpha);
  KahanSum s;
  for (int k = 1; k <= n; ++k)
    s.add(w.weights[k - 1] * coeffs_[k - 1] * elements_[k - 1](x));
  return s.value();
}

double partial_sum(const FunctionHandle& f, const OrthonormalSystem& S, int n,
                   double x, const QuadratureSpec& spec) {
  CoefficientTable t(f, S, spec);
  return t.partial_sum(n, x);
}

double cesaro_mean(const FunctionHandle& f, const OrthonormalSystem& S, int n,
                   double alpha, double x, const QuadratureSpec& spec) {
  CoefficientTable t(f, S, spec);
  return t.cesaro_mean(n, alpha, x);
}

}  // namespace onsum
