// Acceptance gate: every committed release criterion, each at its pinned
// tolerance, one PASS/FAIL line per criterion.  Exit code is the number of
// failed criteria, so a green run exits 0.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "onsum/cesaro.hpp"
#include "onsum/function_handle.hpp"
#include "onsum/identities.hpp"
#include "onsum/kernel.hpp"
#include "onsum/quadrature.hpp"
#include "onsum/report.hpp"
#include "onsum/selectors.hpp"
#include "onsum/sweep.hpp"
#include "onsum/systems.hpp"
#include "onsum/thresholds.hpp"

namespace {

using namespace onsum;
using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// same fixed-width draw the unit tests use, so sampled points are stable
// across platforms
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> random_points(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> pts(count);
  for (double& p : pts) p = unit_draw(rng);
  return pts;
}

FunctionHandle random_poly(std::mt19937_64& rng) {
  const int degree = static_cast<int>(rng() % 4);
  std::vector<double> coeffs(degree + 1);
  for (double& c : coeffs) c = 2.0 * unit_draw(rng) - 1.0;
  return polynomial(coeffs);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Gate {
  int failures = 0;
  void line(int idx, const char* label, bool ok, const std::string& detail,
            double secs) {
    std::printf("%s  %2d  %-24s  %s  (%.1fs)\n", ok ? "PASS" : "FAIL", idx, label,
                detail.c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

// 1. the built-in systems really are orthonormal, measured by pure quadrature
void criterion_orthonormality(Gate& gate) {
  const auto t0 = Clock::now();
  struct Case {
    const char* system;
    int horizon;
  };
  const Case cases[] = {{"cosine", 64}, {"haar", 128}, {"walsh", 64}};
  bool ok = true;
  std::ostringstream d;
  for (const Case& c : cases) {
    const auto s0 = Clock::now();
    const MomentReport rep = validate(parse_system(c.system), c.horizon, 1e-9);
    const double secs = elapsed(s0);
    const bool this_ok =
        rep.passed() && rep.worst_orthonormality <= 1e-9 && secs < 10.0;
    ok = ok && this_ok;
    d << c.system << "=" << sci(rep.worst_orthonormality)
      << (this_ok ? "" : " BAD") << "  ";
  }
  gate.line(1, "orthonormality", ok, d.str(), elapsed(t0));
}

// 2. element antiderivatives obey the Bessel-type mass bound
//    sum_{k<=256} g_k(u)^2 <= u
void criterion_antiderivative_mass(Gate& gate) {
  const auto t0 = Clock::now();
  const std::vector<double> us = random_points(50, 20260818);
  double worst = -1e300;  // max over (system, u) of sum - u
  for (const char* name : {"cosine", "haar", "walsh"}) {
    const OrthonormalSystem S = parse_system(name);
    std::vector<FunctionHandle> g;
    g.reserve(256);
    for (int k = 1; k <= 256; ++k) {
      const FunctionHandle phi = S.element(k);
      g.push_back(phi.antiderivative ? *phi.antiderivative : prefix_integral(phi));
    }
    for (double u : us) {
      KahanSum s;
      for (const FunctionHandle& gk : g) {
        const double v = gk(u);
        s.add(v * v);
      }
      worst = std::max(worst, s.value() - u);
    }
  }
  gate.line(2, "antiderivative mass", worst <= 1e-8,
            "max(sum-u)=" + sci(worst), elapsed(t0));
}

// 3. Cesaro arithmetic: exact integer line, weight shape, growth envelope
void criterion_cesaro_arithmetic(Gate& gate) {
  const auto t0 = Clock::now();
  bool exact_ok = true;
  for (int n = 0; n <= 1000 && exact_ok; ++n)
    exact_ok = cesaro_a(n, 1.0) == static_cast<double>(n + 1);

  bool weights_ok = true;
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (int n = 1; n <= 4096 && weights_ok; ++n) {
      const CesaroWeights w = cesaro_weights(n, alpha);
      for (size_t i = 0; i < w.weights.size(); ++i) {
        const double wk = w.weights[i];
        if (!(wk > 0.0 && wk < 1.0) || (i > 0 && !(wk < w.weights[i - 1]))) {
          weights_ok = false;
          break;
        }
      }
    }
  }

  bool range_ok = true;
  std::ostringstream d;
  for (const thresholds::AlphaRange& r : thresholds::kCesaroRanges) {
    const CesaroWeights w = cesaro_weights(10000, r.alpha);
    double lo = 1e300, hi = -1e300;
    for (int n = 1; n <= 10000; ++n) {
      const double ratio = w.a[n] / std::pow(static_cast<double>(n), r.alpha);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    if (!(lo >= r.lo && hi <= r.hi)) range_ok = false;
    d << "a=" << format_double(r.alpha) << ":[" << sci(lo) << "," << sci(hi)
      << "] ";
  }
  d << (exact_ok ? "exact" : "EXACT-BAD") << " "
    << (weights_ok ? "monotone" : "MONOTONE-BAD");
  gate.line(3, "cesaro arithmetic", exact_ok && weights_ok && range_ok, d.str(),
            elapsed(t0));
}

// 4. summation-by-parts identities: hand-derived values exactly, then a
//    randomized polynomial suite
void criterion_parts_suite(Gate& gate) {
  const auto t0 = Clock::now();
  const FunctionHandle u = polynomial({0.0, 1.0});
  const FunctionHandle u2 = polynomial({0.0, 0.0, 1.0});
  const FunctionHandle one = make_named("one");
  const FunctionHandle c25 = polynomial({2.5});
  const FunctionHandle wave = make_named("cos4pi_shifted");

  double worst_hand = 0.0;
  auto hand = [&worst_hand](const IdentityLedger& led, double expected_lhs) {
    worst_hand = std::max(worst_hand, std::abs(led.lhs - expected_lhs));
    worst_hand = std::max(worst_hand, led.abs_gap);
  };
  hand(parts_identity_mean(u, one, 2), 0.5);
  hand(parts_identity_mean(u2, one, 2), 1.0 / 3.0);
  hand(parts_identity_mean(u, u, 2), 1.0 / 3.0);
  hand(parts_identity_endpoint(u, one, 3), 0.5);
  hand(parts_identity_endpoint(u, u, 2), 1.0 / 3.0);
  hand(parts_identity_endpoint(c25, wave, 4), 2.5);  // constant case

  std::mt19937_64 rng(20260404);
  double worst_gap = 0.0;
  for (int pair = 0; pair < 200; ++pair) {
    const FunctionHandle g = random_poly(rng);
    const FunctionHandle F = random_poly(rng);
    for (int n : {2, 3, 5, 8, 16, 64}) {
      worst_gap = std::max(worst_gap, parts_identity_mean(g, F, n).abs_gap);
      worst_gap = std::max(worst_gap, parts_identity_endpoint(g, F, n).abs_gap);
    }
  }
  const double secs = elapsed(t0);
  const bool ok = worst_hand <= 1e-12 && worst_gap <= 1e-9 && secs < 60.0;
  gate.line(4, "parts identity suite", ok,
            "hand=" + sci(worst_hand) + " fuzz=" + sci(worst_gap), secs);
}

// 5. boundary identities for the mean and the coefficients, plus the exact
//    finite-n relation sigma(id) = sigma(1) - int_0^1 Q_n
void criterion_boundary_identities(Gate& gate) {
  const auto t0 = Clock::now();
  const std::vector<double> xs = random_points(10, 20260505);
  const double alphas[] = {0.5, 1.0, 2.0};
  const FunctionHandle f = polynomial({0.0, 0.0, 1.0});
  const FunctionHandle id = make_named("identity");
  const FunctionHandle one = make_named("one");
  double worst_sigma = 0.0, worst_coeff = 0.0, worst_relation = 0.0;
  for (const char* name : {"cosine", "haar", "walsh"}) {
    const OrthonormalSystem S = parse_system(name);
    for (int k = 1; k <= 64; ++k)
      worst_coeff =
          std::max(worst_coeff, coefficient_boundary_identity(f, S, k).abs_gap);
    const KernelWorkspace ws(S, 64);
    CoefficientTable t_id(id, S);
    CoefficientTable t_one(one, S);
    for (int n = 1; n <= 64; ++n) {
      for (double alpha : alphas) {
        for (double x : xs) {
          worst_sigma = std::max(
              worst_sigma, sigma_boundary_identity(f, S, n, alpha, x).abs_gap);
          const KernelSlice slice = ws.slice(n, alpha, x);
          const double lhs = t_id.cesaro_mean(n, alpha, x);
          const double rhs = t_one.cesaro_mean(n, alpha, x) - slice.prefix(1.0);
          worst_relation = std::max(worst_relation, std::abs(lhs - rhs));
        }
      }
    }
  }
  const bool ok =
      worst_sigma <= 1e-9 && worst_coeff <= 1e-9 && worst_relation <= 1e-9;
  gate.line(5, "boundary identities", ok,
            "sigma=" + sci(worst_sigma) + " coeff=" + sci(worst_coeff) +
                " relation=" + sci(worst_relation),
            elapsed(t0));
}

// 6. kernel mass bounds: sqrt(phi_sq_ratio) decays like n^{-1/2} with the
//    committed coefficients, and the per-cell mass slack stays nonnegative
void criterion_kernel_mass(Gate& gate) {
  const auto t0 = Clock::now();
  const std::vector<double> rx = random_points(20, 20260606);
  struct Sys {
    const char* name;
    double coef;
    bool dense_grid;
  };
  const Sys systems[] = {{"cosine", thresholds::kPhiSqRatioCoefCosine, true},
                         {"haar", thresholds::kPhiSqRatioCoefHaar, false},
                         {"walsh", thresholds::kPhiSqRatioCoefWalsh, false}};
  double worst_margin = -1e300;  // max of sqrt(ratio*n) - coef
  double worst_slack = 1e300;
  for (const Sys& sys : systems) {
    const OrthonormalSystem S = parse_system(sys.name);
    std::vector<double> xs = rx;
    if (sys.dense_grid) {
      const std::vector<double> grid = uniform_grid(201);
      xs.insert(xs.end(), grid.begin(), grid.end());
    }
    for (int n = 1; n <= 128; ++n)
      for (double x : xs)
        worst_margin =
            std::max(worst_margin, std::sqrt(phi_sq_ratio(S, n, x) * n) - sys.coef);
    const KernelWorkspace ws(S, 128);
    for (int n : {1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128})
      for (double alpha : {0.5, 1.0, 2.0})
        for (double x : rx)
          worst_slack = std::min(worst_slack, cell_mass_slack(ws.slice(n, alpha, x)));
  }
  const bool ok = worst_margin <= 1e-12 && worst_slack >= thresholds::kSlackFloor;
  gate.line(6, "kernel mass bounds", ok,
            "margin=" + sci(worst_margin) + " slack=" + sci(worst_slack),
            elapsed(t0));
}

// 7. the summability diagnostic stays O(1): capped and trend-free through
//    n = 512 on the 11-point grid
void criterion_diagnostic_bounded(Gate& gate) {
  const auto t0 = Clock::now();
  const std::vector<double> grid = uniform_grid(11);
  const double alphas[] = {0.5, 1.0, 2.0};
  struct Sys {
    const char* name;
    double cap;
  };
  bool ok = true;
  std::ostringstream d;
  for (const Sys& sys :
       {Sys{"cosine", thresholds::kHnCapCosine}, Sys{"haar", thresholds::kHnCapHaar}}) {
    const OrthonormalSystem S = parse_system(sys.name);
    const KernelWorkspace ws(S, 512);
    double overall = 0.0, low_band = 0.0, high_band = 0.0;
    for (int n = 2; n <= 512; ++n) {
      double n_max_h = 0.0;
      for (double alpha : alphas)
        for (double x : grid)
          n_max_h = std::max(n_max_h, h_diagnostic(ws.slice(n, alpha, x)));
      overall = std::max(overall, n_max_h);
      if (n >= 32 && n <= 64) low_band = std::max(low_band, n_max_h);
      if (n >= 256) high_band = std::max(high_band, n_max_h);
    }
    const bool this_ok = overall <= sys.cap && high_band <= 1.1 * low_band;
    ok = ok && this_ok;
    d << sys.name << " max=" << sci(overall) << " bands=" << sci(low_band) << "/"
      << sci(high_band) << (this_ok ? "  " : " BAD  ");
  }
  const double secs = elapsed(t0);
  ok = ok && secs < 300.0;
  gate.line(7, "diagnostic boundedness", ok, d.str(), secs);
}

// 8. Cesaro means of the smooth catalog stay under the committed sup caps
void criterion_mean_growth(Gate& gate) {
  const auto t0 = Clock::now();
  SweepConfig c;
  c.alphas = {0.5, 1.0, 2.0};
  c.n_values.resize(512);
  for (int i = 0; i < 512; ++i) c.n_values[i] = i + 1;
  c.xs = uniform_grid(11);
  c.functions = {"poly:0,0,0.5", "antideriv:cos4pi_shifted",
                 "poly:0.25,-0.5,0.125,1"};
  bool ok = true;
  std::ostringstream d;
  for (const char* name : {"cosine", "haar"}) {
    c.system = name;
    const SweepOutcome out = run_sigma_sweep(c);
    double sup = 0.0;
    for (const auto& row : out.table.rows)
      sup = std::max(sup, std::abs(row[4].get<double>()));
    ok = ok && out.ok;
    d << name << " sup=" << sci(sup) << (out.ok ? "  " : " " + out.violation + "  ");
  }
  gate.line(8, "mean growth caps", ok, d.str(), elapsed(t0));
}

// 9. the extremal witness: 1-Lipschitz with |r| <= 1, and its functional gap
//    c_n stays under the committed cap on every system including seeded
//    random ones
void criterion_extremal_witness(Gate& gate) {
  const auto t0 = Clock::now();
  const char* names[] = {"cosine", "haar", "rand:101:256:256", "rand:202:256:256",
                         "rand:303:256:256"};
  double worst_lip = 0.0, worst_cn = -1e300;
  for (const char* name : names) {
    const OrthonormalSystem S = parse_system(name);
    const KernelWorkspace ws(S, 256);
    for (double x : {0.1, 0.3, 0.7}) {
      for (int n = 1; n <= 256; ++n) {
        const KernelSlice slice = ws.slice(n, 1.0, x);
        const ExtremalFunction ex = extremal_function(slice);
        worst_lip = std::max(worst_lip, lip_profile(ex.r, 8 * n + 1).lip1_norm);
        const double c_n =
            h_diagnostic(slice) - std::abs(u_functional(ex.r, slice));
        worst_cn = std::max(worst_cn, c_n);
      }
    }
  }
  const bool ok = worst_lip <= 2.0 + 1e-9 && worst_cn <= thresholds::kCnCap;
  gate.line(9, "extremal witness", ok,
            "max_lip=" + sci(worst_lip) + " max_cn=" + sci(worst_cn), elapsed(t0));
}

// 10. compress-reflect construction: moment guarantees validate, paired
//     transforms halve coefficients, and the compressed catalog function has
//     a continuous value and a Lipschitz derivative across the seam
void criterion_compress_reflect(Gate& gate) {
  const auto t0 = Clock::now();
  bool validate_ok = true;
  double worst_moment = 0.0;
  for (const char* name : {"cr:cosine", "cr:haar"}) {
    const MomentReport rep = validate(parse_system(name), 16, 1e-9);
    validate_ok = validate_ok && rep.passed();
    worst_moment = std::max({worst_moment, rep.worst_mean, rep.worst_first_moment});
  }

  const OrthonormalSystem base = parse_system("cosine");
  const OrthonormalSystem folded = parse_system("cr:cosine");
  double worst_halving = 0.0;
  for (const char* fname : {"cos4pi_shifted", "identity"}) {
    const FunctionHandle f = make_named(fname);
    const FunctionHandle v = compress_to_half(f);
    for (int k = 1; k <= 32; ++k) {
      const double lhs = integrate_product(v, folded.element(k), 0.0, 1.0);
      const double rhs = 0.5 * fourier_coefficient(f, base, k);
      worst_halving = std::max(worst_halving, std::abs(lhs - rhs));
    }
  }

  const FunctionHandle gamma = make_named("gamma_compressed");
  const FunctionHandle& dgamma = *gamma.derivative;
  const double seam_value = std::abs(gamma(0.5 - 1e-6));
  const double seam_slope = std::abs(dgamma(0.5 - 1e-6));
  const LipschitzProfile prof = lip_profile(dgamma, 4097);
  const bool gamma_ok = gamma(0.5) == 0.0 && seam_value <= 1e-8 &&
                        seam_slope <= 1e-2 &&
                        prof.lip_seminorm <= thresholds::kGammaPrimeLip;

  const bool ok = validate_ok && worst_moment <= 1e-9 && worst_halving <= 1e-9 &&
                  gamma_ok;
  gate.line(10, "compress-reflect", ok,
            "moments=" + sci(worst_moment) + " halving=" + sci(worst_halving) +
                " dlip=" + sci(prof.lip_seminorm),
            elapsed(t0));
}

// 11. identical configurations and seeds serialize byte-identically
void criterion_determinism(Gate& gate) {
  const auto t0 = Clock::now();
  auto bytes = [](const SweepOutcome& o) {
    std::ostringstream c, j;
    write_csv(c, o.manifest, o.table);
    write_json(j, o.manifest, o.table);
    return c.str() + "\x1f" + j.str();
  };
  SweepConfig hc;
  hc.system = "rand:7:32:64";
  hc.alphas = {0.5, 1.0};
  hc.n_values = {1, 2, 4, 8, 16, 32};
  hc.xs = uniform_grid(5);
  const bool hn_same = bytes(run_hn_sweep(hc)) == bytes(run_hn_sweep(hc));

  SweepConfig ec;
  ec.system = "haar";
  ec.n_values = {1, 2, 4, 8, 16};
  ec.xs = {0.3, 0.7};
  const bool ex_same = bytes(run_extremal_sweep(ec)) == bytes(run_extremal_sweep(ec));

  SweepConfig sc;
  sc.system = "cosine";
  sc.functions = {"gamma_compressed", "poly:0.25,-0.5,0.125,1"};
  sc.n_values = {1, 2, 4, 8, 16, 32, 64};
  sc.xs = uniform_grid(5);
  const bool sg_same = bytes(run_sigma_sweep(sc)) == bytes(run_sigma_sweep(sc));

  const bool ok = hn_same && ex_same && sg_same;
  std::ostringstream d;
  d << "hn=" << (hn_same ? "same" : "DIFF") << " extremal="
    << (ex_same ? "same" : "DIFF") << " sigma=" << (sg_same ? "same" : "DIFF");
  gate.line(11, "determinism", ok, d.str(), elapsed(t0));
}

}  // namespace

int main() {
  Gate gate;
  struct Criterion {
    int idx;
    const char* label;
    void (*fn)(Gate&);
  };
  const Criterion criteria[] = {
      {1, "orthonormality", criterion_orthonormality},
      {2, "antiderivative mass", criterion_antiderivative_mass},
      {3, "cesaro arithmetic", criterion_cesaro_arithmetic},
      {4, "parts identity suite", criterion_parts_suite},
      {5, "boundary identities", criterion_boundary_identities},
      {6, "kernel mass bounds", criterion_kernel_mass},
      {7, "diagnostic boundedness", criterion_diagnostic_bounded},
      {8, "mean growth caps", criterion_mean_growth},
      {9, "extremal witness", criterion_extremal_witness},
      {10, "compress-reflect", criterion_compress_reflect},
      {11, "determinism", criterion_determinism},
  };
  for (const Criterion& c : criteria) {
    try {
      c.fn(gate);
    } catch (const std::exception& e) {
      gate.line(c.idx, c.label, false, std::string("exception: ") + e.what(), 0.0);
    }
  }
  std::printf("%d/11 criteria passed\n",
              11 - gate.failures);
  return gate.failures;
}
