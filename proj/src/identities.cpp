#include "onsum/identities.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "onsum/cesaro.hpp"
#include "onsum/function_handle.hpp"

namespace onsum {

namespace {

// Cumulative cell integrals P(i/n) = int_0^{i/n} F, i = 0..n, accumulated so
// each cell is integrated once.
std::vector<double> prefix_on_grid(const FunctionHandle& F, int n,
                                   const QuadratureSpec& spec) {
  std::vector<double> P(n + 1, 0.0);
  KahanSum run;
  for (int i = 1; i <= n; ++i) {
    run.add(integrate(F, (i - 1.0) / n, static_cast<double>(i) / n, spec));
    P[i] = run.value();
  }
  return P;
}

FunctionHandle shifted_difference(const FunctionHandle& g, double h) {
  FunctionHandle diff;
  auto ge = g.evaluator;
  diff.evaluator = [ge, h](double u) { return ge(u) - ge(std::min(u + h, 1.0)); };
  diff.breakpoints = g.breakpoints;
  for (double b : g.breakpoints) diff.breakpoints.push_back(b - h);
  diff.breakpoints = normalize_breakpoints(std::move(diff.breakpoints));
  diff.max_frequency = g.max_frequency;
  return diff;
}

void finish(IdentityLedger* led) {
  KahanSum s;
  for (double t : led->rhs_terms) s.add(t);
  led->rhs = s.value();
  led->abs_gap = std::abs(led->lhs - led->rhs);
}

}  // namespace

IdentityLedger parts_identity_mean(const FunctionHandle& g, const FunctionHandle& F,
                                   int n, const QuadratureSpec& spec,
                                   bool as_printed) {
  if (!g.valid() || !F.valid())
    throw std::invalid_argument("parts_identity_mean: empty function");
  if (n < 1) throw std::invalid_argument("parts_identity_mean: n < 1");

  IdentityLedger led;
  led.identity = "parts-mean";
  {
    std::ostringstream p;
    p << "n=" << n;
    if (as_printed) p << " variant=printed";
    led.parameters = p.str();
  }
  led.lhs = integrate_product(g, F, 0.0, 1.0, spec);

  const std::vector<double> P = prefix_on_grid(F, n, spec);
  const FunctionHandle diff = shifted_difference(g, 1.0 / n);

  KahanSum shift;
  for (int i = 1; i <= n - 1; ++i)
    shift.add(n * integrate(diff, (i - 1.0) / n, static_cast<double>(i) / n, spec) *
              P[i]);

  const int mid_end = as_printed ? n - 1 : n;
  KahanSum mid;
  for (int i = 1; i <= mid_end; ++i) {
    const double a = (i - 1.0) / n, b = static_cast<double>(i) / n;
    const double mean = n * integrate(g, a, b, spec);
    FunctionHandle centered;
    auto ge = g.evaluator;
    centered.evaluator = [ge, mean](double u) { return ge(u) - mean; };
    centered.breakpoints = g.breakpoints;
    centered.max_frequency = g.max_frequency;
    mid.add(integrate_product(centered, F, a, b, spec));
  }

  const double boundary = n * integrate(g, (n - 1.0) / n, 1.0, spec) * P[n];
  led.rhs_terms = {shift.value(), mid.value(), boundary};
  finish(&led);
  return led;
}

IdentityLedger parts_identity_endpoint(const FunctionHandle& f,
                                       const FunctionHandle& G, int n,
                                       const QuadratureSpec& spec, bool as_printed) {
  if (!f.valid() || !G.valid())
    throw std::invalid_argument("parts_identity_endpoint: empty function");
  if (n < 1) throw std::invalid_argument("parts_identity_endpoint: n < 1");

  IdentityLedger led;
  led.identity = "parts-endpoint";
  {
    std::ostringstream p;
    p << "n=" << n;
    if (as_printed) p << " variant=printed";
    led.parameters = p.str();
  }
  led.lhs = integrate_product(f, G, 0.0, 1.0, spec);

  const std::vector<double> P = prefix_on_grid(G, n, spec);

  KahanSum shift;
  for (int i = 1; i <= n - 1; ++i)
    shift.add((f(static_cast<double>(i) / n) - f((i + 1.0) / n)) * P[i]);

  const int mid_end = as_printed ? n - 1 : n;
  KahanSum mid;
  for (int i = 1; i <= mid_end; ++i) {
    const double a = (i - 1.0) / n, b = static_cast<double>(i) / n;
    const double fi = f(b);
    FunctionHandle centered;
    auto fe = f.evaluator;
    centered.evaluator = [fe, fi](double u) { return fe(u) - fi; };
    centered.breakpoints = f.breakpoints;
    centered.max_frequency = f.max_frequency;
    mid.add(integrate_product(centered, G, a, b, spec));
  }

  led.rhs_terms = {shift.value(), mid.value(), f(1.0) * P[n]};
  finish(&led);
  return led;
}

IdentityLedger sigma_boundary_identity(const FunctionHandle& f,
                                       const OrthonormalSystem& S, int n,
                                       double alpha, double x,
                                       const QuadratureSpec& spec) {
  if (!f.valid()) throw std::invalid_argument("sigma_boundary_identity: empty function");
  if (!f.derivative || !f.derivative->valid())
    throw std::invalid_argument("sigma_boundary_identity: f needs a derivative handle");

  IdentityLedger led;
  led.identity = "sigma-boundary";
  {
    std::ostringstream p;
    p << "system=" << S.name() << " n=" << n << " alpha=" << alpha << " x=" << x;
    led.parameters = p.str();
  }
  led.lhs = cesaro_mean(f, S, n, alpha, x, spec);

  const FunctionHandle one = make_named("one");
  const KernelSlice slice = kernel_slice(S, n, alpha, x, spec);
  const double sigma_one = cesaro_mean(one, S, n, alpha, x, spec);
  led.rhs_terms = {f(1.0) * sigma_one, -u_functional(*f.derivative, slice, spec)};
  finish(&led);
  return led;
}

IdentityLedger coefficient_boundary_identity(const FunctionHandle& f,
                                             const OrthonormalSystem& S, int k,
                                             const QuadratureSpec& spec) {
  if (!f.valid())
    throw std::invalid_argument("coefficient_boundary_identity: empty function");
  if (!f.derivative || !f.derivative->valid())
    throw std::invalid_argument(
        "coefficient_boundary_identity: f needs a derivative handle");

  IdentityLedger led;
  led.identity = "coeff-boundary";
  {
    std::ostringstream p;
    p << "system=" << S.name() << " k=" << k;
    led.parameters = p.str();
  }
  led.lhs = fourier_coefficient(f, S, k, spec);

  const FunctionHandle one = make_named("one");
  const FunctionHandle g_k = prefix_integral(S.element(k), spec);
  led.rhs_terms = {f(1.0) * fourier_coefficient(one, S, k, spec),
                   -integrate_product(*f.derivative, g_k, 0.0, 1.0, spec)};
  finish(&led);
  return led;
}

}  // namespace onsum
