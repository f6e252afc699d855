#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "onsum/cesaro.hpp"
#include "onsum/identities.hpp"
#include "onsum/kernel.hpp"
#include "onsum/quadrature.hpp"
#include "onsum/systems.hpp"

#include "test_util.hpp"

using namespace onsum;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kRoot2 = std::sqrt(2.0);

// per-term libm evaluation of the closed trig forms, an independent route
// against the angle-addition recurrence inside the slice
double trig_q_direct(const KernelSlice& sl, double u) {
  double s = 0.0;
  for (int k = 1; k <= sl.n; ++k) {
    const double w = 2.0 * kPi * k;
    s += sl.weights[k - 1] * (kRoot2 * std::sin(w * u) / w) * sl.phi_at_x[k - 1];
  }
  return s;
}

double trig_prefix_direct(const KernelSlice& sl, double y) {
  double s = 0.0;
  for (int k = 1; k <= sl.n; ++k) {
    const double w = 2.0 * kPi * k;
    s += sl.weights[k - 1] * (kRoot2 * (1.0 - std::cos(w * y)) / (w * w)) *
         sl.phi_at_x[k - 1];
  }
  return s;
}

// sum of w_k g_k(u) phi_k(x) with every factor recomputed by pure quadrature
double generic_q_direct(const OrthonormalSystem& S, const KernelSlice& sl, double u) {
  double s = 0.0;
  for (int k = 1; k <= sl.n; ++k) {
    const FunctionHandle phi = S.element(k);
    s += sl.weights[k - 1] * integrate(phi, 0.0, u) * phi(sl.x);
  }
  return s;
}

}  // namespace

TEST_CASE("slice metadata mirrors its inputs") {
  OrthonormalSystem S = system_cosine();
  KernelSlice sl = kernel_slice(S, 4, 0.5, 0.3);
  CHECK(sl.system == "cosine");
  CHECK(sl.n == 4);
  CHECK(sl.alpha == 0.5);
  CHECK(sl.x == 0.3);
  CesaroWeights w = cesaro_weights(4, 0.5);
  REQUIRE(sl.weights.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(sl.weights[k] == w.weights[k]);
  REQUIRE(sl.phi_at_x.size() == 4);
  double sq = 0.0;
  for (double v : sl.phi_at_x) sq += v * v;
  CHECK(std::abs(sl.phi_sq_sum - sq) < 1e-12);
}

TEST_CASE("a single-mode slice is a closed-form sine arch") {
  // w_{1,1} = 1/2 at alpha = 1, so Q_1(u, 0) = sin(2 pi u) / (2 pi)
  KernelSlice sl = kernel_slice(system_cosine(), 1, 1.0, 0.0);
  for (double u : {0.1, 0.37, 0.5, 0.9}) {
    CHECK(std::abs(sl.q(u) - std::sin(2.0 * kPi * u) / (2.0 * kPi)) < 1e-14);
    CHECK(std::abs(sl.prefix(u) -
                   (1.0 - std::cos(2.0 * kPi * u)) / (4.0 * kPi * kPi)) < 1e-14);
  }
  CHECK(h_diagnostic(sl) == 0.0);  // no interior grid points at n = 1
}

TEST_CASE("trig fast path agrees with per-term libm evaluation") {
  KernelSlice sl = kernel_slice(system_cosine(), 64, 1.0, 0.3);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const double u = unit_draw(rng);
    CHECK(std::abs(sl.q(u) - trig_q_direct(sl, u)) < 1e-10);
    CHECK(std::abs(sl.prefix(u) - trig_prefix_direct(sl, u)) < 1e-10);
  }
}

TEST_CASE("step-system slices agree with pure quadrature") {
  for (const OrthonormalSystem& S :
       {system_haar(), system_walsh(), compress_reflect(system_haar())}) {
    KernelSlice sl = kernel_slice(S, 8, 0.5, 0.37);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 10; ++t) {
      const double u = unit_draw(rng);
      CHECK(std::abs(sl.q(u) - generic_q_direct(S, sl, u)) < 1e-10);
    }
    for (double y : {0.2, 0.5, 0.77, 1.0})
      CHECK(std::abs(sl.prefix(y) - integrate(sl.q, 0.0, y)) < 1e-10);
  }
}

TEST_CASE("generic slices agree with pure quadrature") {
  OrthonormalSystem S = compress_reflect(system_cosine());
  KernelSlice sl = kernel_slice(S, 4, 1.0, 0.6);
  std::mt19937_64 rng(13);
  for (int t = 0; t < 6; ++t) {
    const double u = unit_draw(rng);
    CHECK(std::abs(sl.q(u) - generic_q_direct(S, sl, u)) < 1e-10);
  }
  for (double y : {0.3, 0.7, 1.0})
    CHECK(std::abs(sl.prefix(y) - integrate(sl.q, 0.0, y)) < 1e-10);
}

TEST_CASE("workspace slices match one-shot slices") {
  OrthonormalSystem S = system_haar();
  KernelWorkspace ws(S, 8);
  KernelSlice a = ws.slice(5, 1.0, 0.3);
  KernelSlice b = kernel_slice(S, 5, 1.0, 0.3);
  for (double u : {0.12, 0.5, 0.81}) {
    CHECK(a.q(u) == b.q(u));
    CHECK(a.prefix(u) == b.prefix(u));
  }
  CHECK(ws.n_max() == 8);
  CHECK_THROWS_AS(ws.slice(9, 1.0, 0.3), std::out_of_range);
  CHECK_THROWS_AS(ws.slice(0, 1.0, 0.3), std::out_of_range);
  CHECK_THROWS_AS(ws.slice(5, 1.0, -0.1), std::domain_error);
  CHECK_THROWS_AS(KernelWorkspace(S, 0), std::out_of_range);
}

TEST_CASE("two-mode slice reproduces the frozen h value") {
  KernelSlice sl = kernel_slice(system_cosine(), 2, 1.0, 0.0);
  // prefix(1/2) = 2/(3 pi^2); halving it gives the diagnostic
  CHECK(std::abs(sl.prefix(0.5) - 2.0 / (3.0 * kPi * kPi)) < 1e-13);
  CHECK(std::abs(h_diagnostic(sl) - 1.0 / (3.0 * kPi * kPi)) < 1e-12);
}

TEST_CASE("phi_sq_ratio has closed forms for flat-magnitude systems") {
  OrthonormalSystem cosine = system_cosine();
  for (int n : {1, 4, 16}) {
    // at x = 0 every cosine element hits sqrt(2), so the ratio is 2/n
    CHECK(std::abs(phi_sq_ratio(cosine, n, 0.0) - 2.0 / n) < 1e-14);
  }
  OrthonormalSystem walsh = system_walsh();
  for (int n : {1, 3, 8})
    CHECK(std::abs(phi_sq_ratio(walsh, n, 0.4) - 1.0 / n) < 1e-15);
  KernelSlice sl = kernel_slice(cosine, 4, 1.0, 0.0);
  CHECK(std::abs(phi_sq_ratio(sl) - phi_sq_ratio(cosine, 4, 0.0)) < 1e-14);
  CHECK_THROWS_AS(phi_sq_ratio(cosine, 0, 0.0), std::out_of_range);
}

TEST_CASE("per-cell kernel mass stays under the ratio bound") {
  for (const OrthonormalSystem& S : {system_cosine(), system_haar()}) {
    KernelSlice sl = kernel_slice(S, 8, 1.0, 0.3);
    const double slack = cell_mass_slack(sl);
    CHECK(slack >= -1e-9);
    CHECK(slack <= std::sqrt(phi_sq_ratio(sl)) + 1e-15);
  }
}

TEST_CASE("a sign-free prefix yields the identity ramp") {
  KernelSlice sl = kernel_slice(system_cosine(), 1, 1.0, 0.0);
  ExtremalFunction ex = extremal_function(sl);
  CHECK(ex.zeros.empty());
  REQUIRE(ex.slopes.size() == 1);
  CHECK(ex.slopes[0] == 1);
  CHECK(std::abs(ex.r(0.7) - 0.7) < 1e-12);
  CHECK(std::abs(ex.r(1.0) - 1.0) < 1e-12);
}

TEST_CASE("extremal witnesses alternate slopes across located zeros") {
  KernelSlice sl = kernel_slice(system_cosine(), 6, 1.0, 0.15);
  ExtremalFunction ex = extremal_function(sl);
  REQUIRE(ex.slopes.size() == ex.zeros.size() + 1);
  for (size_t s = 0; s + 1 < ex.slopes.size(); ++s)
    CHECK(ex.slopes[s] == -ex.slopes[s + 1]);
  // slopes really are the prefix sign between zeros
  std::vector<double> knots{0.0};
  knots.insert(knots.end(), ex.zeros.begin(), ex.zeros.end());
  knots.push_back(1.0);
  for (size_t s = 0; s + 1 < knots.size(); ++s) {
    const double mid = 0.5 * (knots[s] + knots[s + 1]);
    const double pv = sl.prefix(mid);
    CHECK((pv >= 0.0 ? 1 : -1) == ex.slopes[s]);
  }
  // unit slopes move by exactly 1/n over zero-free cells
  const int n = sl.n;
  for (int i = 0; i < n; ++i) {
    const double a = static_cast<double>(i) / n, b = (i + 1.0) / n;
    bool has_zero = false;
    for (double z : ex.zeros) has_zero |= (z > a && z < b);
    if (!has_zero)
      CHECK(std::abs(std::abs(ex.r(b) - ex.r(a)) - 1.0 / n) < 1e-9);
  }
}

TEST_CASE("extremal witnesses stay 1-Lipschitz with sup at most 1") {
  for (double x : {0.15, 0.6}) {
    KernelSlice sl = kernel_slice(system_haar(), 8, 0.5, x);
    ExtremalFunction ex = extremal_function(sl);
    LipschitzProfile p = lip_profile(ex.r, 1001);
    CHECK(p.sup_norm <= 1.0 + 1e-9);
    CHECK(p.lip_seminorm <= 1.0 + 1e-9);
  }
}

TEST_CASE("the witness functional equals its boundary-minus-mass form") {
  // r' = sign(prefix), so int r q = r(1) prefix(1) - int |prefix|
  for (const OrthonormalSystem& S : {system_cosine(), system_haar()}) {
    KernelSlice sl = kernel_slice(S, 6, 1.0, 0.15);
    ExtremalFunction ex = extremal_function(sl);
    const double lhs = u_functional(ex.r, sl);
    const double rhs = ex.r(1.0) * sl.prefix(1.0) - integrate_abs(sl.prefix, 0.0, 1.0);
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("sign_change_set maps zeros onto interior grid cells") {
  KernelSlice sl = kernel_slice(system_cosine(), 6, 1.0, 0.15);
  ExtremalFunction ex = extremal_function(sl);
  std::vector<int> want;
  for (double z : ex.zeros) {
    const int i = static_cast<int>(std::floor(z * sl.n));
    if (i >= 1 && i <= sl.n - 1 && (want.empty() || want.back() != i))
      want.push_back(i);
  }
  CHECK(sign_change_set(sl) == want);
}

TEST_CASE("kernel_terms decomposes like the grid identity, term by term") {
  KernelSlice sl = kernel_slice(system_cosine(), 4, 1.0, 0.3);
  FunctionHandle fprime = polynomial({0.0, 2.0});  // derivative of u^2
  KernelTerms t = kernel_terms(fprime, sl);
  IdentityLedger led = parts_identity_mean(fprime, sl.q, sl.n);
  REQUIRE(led.rhs_terms.size() == 3);
  CHECK(std::abs(t.shift_term - led.rhs_terms[0]) < 1e-9);
  CHECK(std::abs(t.cellmean_term - led.rhs_terms[1]) < 1e-9);
  CHECK(std::abs(t.boundary_term - led.rhs_terms[2]) < 1e-9);
  CHECK(std::abs(t.total() - u_functional(fprime, sl)) < 1e-9);
  CHECK_THROWS_AS(kernel_terms(FunctionHandle{}, sl), std::invalid_argument);
}

TEST_CASE("diagnostic rows bundle the slice measurements") {
  KernelSlice sl = kernel_slice(system_haar(), 4, 2.0, 0.6);
  DiagnosticRow row = diagnostic_row(sl);
  CHECK(row.n == 4);
  CHECK(row.alpha == 2.0);
  CHECK(row.x == 0.6);
  CHECK(row.h_value == h_diagnostic(sl));
  CHECK(row.phi_sq_ratio == phi_sq_ratio(sl));
  CHECK(row.prefix_at_1 == sl.prefix(1.0));
  CHECK(row.cell_mass_slack == cell_mass_slack(sl));
}
