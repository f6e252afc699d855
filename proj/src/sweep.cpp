#include "onsum/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "onsum/cesaro.hpp"
#include "onsum/kernel.hpp"
#include "onsum/selectors.hpp"
#include "onsum/thresholds.hpp"

namespace onsum {

namespace {

std::string join_doubles(const std::vector<double>& v) {
  std::ostringstream s;
  for (size_t i = 0; i < v.size(); ++i) s << (i ? ";" : "") << format_double(v[i]);
  return s.str();
}

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream s;
  for (size_t i = 0; i < v.size(); ++i) s << (i ? ";" : "") << v[i];
  return s.str();
}

std::string join_strings(const std::vector<std::string>& v) {
  std::ostringstream s;
  for (size_t i = 0; i < v.size(); ++i) s << (i ? ";" : "") << v[i];
  return s.str();
}

RunManifest base_manifest(const SweepConfig& c, const std::string& subcommand) {
  RunManifest m;
  m.config["subcommand"] = subcommand;
  m.config["system"] = c.system;
  m.config["alphas"] = join_doubles(c.alphas);
  m.config["n_values"] = join_ints(c.n_values);
  m.config["xs"] = join_doubles(c.xs);
  if (!c.functions.empty()) m.config["functions"] = join_strings(c.functions);
  m.config["quad_order"] = std::to_string(c.quad.order);
  m.config["quad_min_panels"] = std::to_string(c.quad.min_panels);
  m.config["quad_osc_panels"] = std::to_string(c.quad.osc_panels);
  m.config["seed"] = std::to_string(c.seed);
  m.config["enforce"] = c.enforce ? "true" : "false";
  return m;
}

bool is_builtin(const std::string& system) {
  return system == "cosine" || system == "haar" || system == "walsh";
}

// committed H_n cap, or 0 when the system runs exploratory
double hn_cap_for(const std::string& system) {
  if (system == "cosine") return thresholds::kHnCapCosine;
  if (system == "haar") return thresholds::kHnCapHaar;
  return 0.0;
}

double sigma_cap_for(const std::string& system) {
  if (system == "cosine") return thresholds::kSigmaSupCosine;
  if (system == "haar") return thresholds::kSigmaSupHaar;
  return 0.0;
}

}  // namespace

void validate_sweep_config(const SweepConfig& c, bool needs_functions) {
  if (c.n_values.empty())
    throw std::invalid_argument("sweep config: empty n schedule");
  for (size_t i = 0; i < c.n_values.size(); ++i) {
    if (c.n_values[i] < 1)
      throw std::invalid_argument("sweep config: n must be positive");
    if (i > 0 && c.n_values[i] <= c.n_values[i - 1])
      throw std::invalid_argument("sweep config: n schedule must increase strictly");
  }
  if (c.alphas.empty()) throw std::invalid_argument("sweep config: no alphas");
  for (double a : c.alphas)
    if (!(a > 0.0)) throw std::invalid_argument("sweep config: alpha must be > 0");
  if (c.xs.empty()) throw std::invalid_argument("sweep config: no x values");
  for (double x : c.xs)
    if (!(x >= 0.0 && x <= 1.0))
      throw std::invalid_argument("sweep config: x outside [0,1]");
  if (c.quad.order < 2 || c.quad.order > 32)
    throw std::invalid_argument("sweep config: quadrature order outside 2..32");
  if (c.quad.min_panels < 1 || c.quad.osc_panels < 1)
    throw std::invalid_argument("sweep config: panel counts must be positive");
  if (needs_functions && c.functions.empty())
    throw std::invalid_argument("sweep config: no functions given");
}

std::vector<double> uniform_grid(int m) {
  if (m < 2) throw std::invalid_argument("uniform_grid: need at least 2 points");
  std::vector<double> xs(m);
  for (int i = 0; i < m; ++i) xs[i] = static_cast<double>(i) / (m - 1);
  return xs;
}

SweepOutcome run_hn_sweep(const SweepConfig& c) {
  validate_sweep_config(c);
  SweepOutcome out;
  out.manifest = base_manifest(c, "hn-sweep");
  out.table.columns = {"n",           "alpha",          "x",          "h_value",
                       "phi_sq_ratio", "cell_mass_slack", "prefix_at_1"};

  const OrthonormalSystem S = parse_system(c.system);
  const int n_max = c.n_values.back();
  const KernelWorkspace ws(S, n_max, c.quad);

  const double cap = hn_cap_for(c.system);
  const bool check_slack = c.enforce && is_builtin(c.system);
  if (c.enforce && cap > 0.0) out.manifest.thresholds["hn_cap"] = cap;
  if (check_slack) out.manifest.thresholds["slack_floor"] = thresholds::kSlackFloor;

  for (int n : c.n_values) {
    for (double alpha : c.alphas) {
      for (double x : c.xs) {
        const KernelSlice slice = ws.slice(n, alpha, x);
        const DiagnosticRow row = diagnostic_row(slice, c.quad);
        out.table.rows.push_back({row.n, row.alpha, row.x, row.h_value,
                                  row.phi_sq_ratio, row.cell_mass_slack,
                                  row.prefix_at_1});
        if (out.ok && c.enforce && cap > 0.0 && row.h_value > cap) {
          out.ok = false;
          std::ostringstream v;
          v << "h_value " << format_double(row.h_value) << " above cap "
            << format_double(cap) << " at n=" << n << " alpha=" << alpha
            << " x=" << x;
          out.violation = v.str();
        }
        if (out.ok && check_slack && row.cell_mass_slack < thresholds::kSlackFloor) {
          out.ok = false;
          std::ostringstream v;
          v << "cell_mass_slack " << format_double(row.cell_mass_slack)
            << " below floor at n=" << n << " alpha=" << alpha << " x=" << x;
          out.violation = v.str();
        }
      }
    }
  }
  return out;
}

SweepOutcome run_extremal_sweep(const SweepConfig& c) {
  validate_sweep_config(c);
  SweepOutcome out;
  out.manifest = base_manifest(c, "extremal");
  out.table.columns = {"n",   "alpha",     "x",           "h_value",
                       "u_abs", "c_n",       "lip1_norm",   "sign_changes"};

  const OrthonormalSystem S = parse_system(c.system);
  const KernelWorkspace ws(S, c.n_values.back(), c.quad);

  const bool check_cn = c.enforce && (c.system == "cosine" || c.system == "haar");
  out.manifest.thresholds["lip_norm_cap"] = thresholds::kLipNormCap;
  if (check_cn) out.manifest.thresholds["c_n_cap"] = thresholds::kCnCap;

  for (int n : c.n_values) {
    for (double alpha : c.alphas) {
      for (double x : c.xs) {
        const KernelSlice slice = ws.slice(n, alpha, x);
        const double h = h_diagnostic(slice);
        const ExtremalFunction ex = extremal_function(slice);
        const double u_abs = std::abs(u_functional(ex.r, slice, c.quad));
        const double c_n = h - u_abs;
        const LipschitzProfile prof = lip_profile(ex.r, 8 * n + 1);
        const int changes = static_cast<int>(sign_change_set(slice).size());
        out.table.rows.push_back(
            {n, alpha, x, h, u_abs, c_n, prof.lip1_norm, changes});
        if (out.ok && prof.lip1_norm > thresholds::kLipNormCap + 1e-9) {
          out.ok = false;
          std::ostringstream v;
          v << "lip1_norm " << format_double(prof.lip1_norm)
            << " above cap at n=" << n << " alpha=" << alpha << " x=" << x;
          out.violation = v.str();
        }
        if (out.ok && check_cn && c_n > thresholds::kCnCap) {
          out.ok = false;
          std::ostringstream v;
          v << "c_n " << format_double(c_n) << " above cap at n=" << n
            << " alpha=" << alpha << " x=" << x;
          out.violation = v.str();
        }
      }
    }
  }
  return out;
}

SweepOutcome run_sigma_sweep(const SweepConfig& c) {
  validate_sweep_config(c, /*needs_functions=*/true);
  SweepOutcome out;
  out.manifest = base_manifest(c, "sigma-sweep");
  out.table.columns = {"function", "alpha", "x", "n", "sigma", "running_sup"};

  const OrthonormalSystem S = parse_system(c.system);
  const double cap = sigma_cap_for(c.system);
  if (c.enforce && cap > 0.0) out.manifest.thresholds["sigma_sup_cap"] = cap;

  for (const std::string& fname : c.functions) {
    FunctionHandle f = parse_function(fname);
    if (!f.derivative || !f.derivative->valid())
      throw std::invalid_argument("sigma sweep: function '" + fname +
                                  "' has no derivative handle");
    CoefficientTable table(f, S, c.quad);
    table.ensure(c.n_values.back());
    for (double alpha : c.alphas) {
      for (double x : c.xs) {
        double sup = 0.0;
        for (int n : c.n_values) {
          const double sigma = table.cesaro_mean(n, alpha, x);
          sup = std::max(sup, std::abs(sigma));
          out.table.rows.push_back({fname, alpha, x, n, sigma, sup});
        }
        if (out.ok && c.enforce && cap > 0.0 && sup > cap) {
          out.ok = false;
          std::ostringstream v;
          v << "sigma sup " << format_double(sup) << " above cap "
            << format_double(cap) << " for " << fname << " alpha=" << alpha
            << " x=" << x;
          out.violation = v.str();
        }
      }
    }
  }
  return out;
}

}  // namespace onsum
