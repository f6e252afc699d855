// onsum: kernels, Cesaro means, and diagnostics for orthonormal systems on [0,1].
//
// Exit codes: 0 success, 1 violated invariant or threshold, 2 configuration
// error.  Reports are CSV or JSON on --out (default stdout); timings go to
// stderr so identical configurations produce byte-identical report files.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "onsum/cesaro.hpp"
#include "onsum/identities.hpp"
#include "onsum/kernel.hpp"
#include "onsum/report.hpp"
#include "onsum/selectors.hpp"
#include "onsum/sweep.hpp"
#include "onsum/systems.hpp"
#include "onsum/thresholds.hpp"

namespace {

using namespace onsum;

struct GlobalOpts {
  int quad_order = 8;
  int quad_min_panels = 4;
  int quad_osc_panels = 4;
  std::uint64_t seed = 12345;
  std::string format = "csv";
  std::string out = "-";

  QuadratureSpec quad() const {
    QuadratureSpec s;
    s.order = quad_order;
    s.min_panels = quad_min_panels;
    s.osc_panels = quad_osc_panels;
    return s;
  }
};

void emit(const GlobalOpts& g, const RunManifest& m, const ReportTable& t) {
  if (g.out == "-") {
    write_report(std::cout, g.format, m, t);
    return;
  }
  std::ofstream out(g.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + g.out);
  write_report(out, g.format, m, t);
}

void echo_quad(const GlobalOpts& g, RunManifest* m) {
  m->config["quad_order"] = std::to_string(g.quad_order);
  m->config["quad_min_panels"] = std::to_string(g.quad_min_panels);
  m->config["quad_osc_panels"] = std::to_string(g.quad_osc_panels);
  m->config["seed"] = std::to_string(g.seed);
}

std::vector<int> expand_schedule(std::vector<int> ns, const std::string& range,
                                 int n_max) {
  if (!range.empty()) {
    const size_t cut = range.find(':');
    if (cut == std::string::npos)
      throw std::invalid_argument("--n-range wants lo:hi");
    const int lo = std::stoi(range.substr(0, cut));
    const int hi = std::stoi(range.substr(cut + 1));
    if (lo < 1 || hi < lo) throw std::invalid_argument("--n-range wants 1 <= lo <= hi");
    for (int n = lo; n <= hi; ++n) ns.push_back(n);
  }
  if (n_max > 0) {
    if (!ns.empty())
      throw std::invalid_argument("--n-max excludes --n and --n-range");
    for (int n = 1; n <= n_max; ++n) ns.push_back(n);
  }
  return ns;
}

std::vector<double> expand_xs(std::vector<double> xs, int grid) {
  if (grid > 0) {
    std::vector<double> g = uniform_grid(grid);
    xs.insert(xs.end(), g.begin(), g.end());
  }
  return xs;
}

int sweep_epilogue(const GlobalOpts& g, const SweepOutcome& out,
                   std::chrono::steady_clock::time_point t0) {
  emit(g, out.manifest, out.table);
  const auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - t0);
  std::cerr << "elapsed_ms=" << dt.count() << "\n";
  if (!out.ok) {
    std::cerr << "violation: " << out.violation << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orthonormal-system summability laboratory"};
  app.require_subcommand(1);
  // subcommands inherit this flag at creation, so --format and friends may
  // appear after the subcommand name as well as before it
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--quad-order", g.quad_order, "Gauss-Legendre points per panel")
      ->capture_default_str();
  app.add_option("--quad-min-panels", g.quad_min_panels, "panels per smooth piece")
      ->capture_default_str();
  app.add_option("--quad-osc-panels", g.quad_osc_panels,
                 "panels per oscillation period")
      ->capture_default_str();
  app.add_option("--seed", g.seed, "seed echoed into manifests")
      ->capture_default_str();
  app.add_option("--format", g.format, "csv or json")->capture_default_str();
  app.add_option("--out", g.out, "output path, - for stdout")->capture_default_str();

  // ---- coeffs ----
  std::string co_function = "one", co_system = "cosine";
  int co_count = 16;
  CLI::App* coeffs = app.add_subcommand("coeffs", "Fourier coefficients C_1..C_N");
  coeffs->add_option("--function,--f", co_function, "function selector")->required();
  coeffs->add_option("--system", co_system, "system selector")->required();
  coeffs->add_option("--count", co_count, "number of coefficients")->required();

  // ---- partial-sum ----
  std::string ps_function = "one", ps_system = "cosine";
  int ps_n = 8, ps_grid = 0;
  std::vector<double> ps_xs;
  CLI::App* psum = app.add_subcommand("partial-sum", "partial sums at grid points");
  psum->add_option("--function,--f", ps_function)->required();
  psum->add_option("--system", ps_system)->required();
  psum->add_option("--n", ps_n, "number of terms")->required();
  psum->add_option("--x", ps_xs, "explicit x values");
  psum->add_option("--x-grid", ps_grid, "closed uniform grid size");

  // ---- cesaro ----
  std::string cm_function = "one", cm_system = "cosine";
  int cm_n = 8, cm_grid = 0;
  double cm_alpha = 1.0;
  std::vector<double> cm_xs;
  CLI::App* cesaro = app.add_subcommand("cesaro", "Cesaro means at grid points");
  cesaro->add_option("--function,--f", cm_function)->required();
  cesaro->add_option("--system", cm_system)->required();
  cesaro->add_option("--n", cm_n)->required();
  cesaro->add_option("--alpha", cm_alpha)->required();
  cesaro->add_option("--x", cm_xs);
  cesaro->add_option("--x-grid", cm_grid);

  // ---- kernel ----
  std::string kn_system = "cosine";
  int kn_n = 8, kn_samples = 129;
  double kn_alpha = 1.0, kn_x = 0.0;
  CLI::App* kernel = app.add_subcommand("kernel", "kernel slice samples");
  kernel->add_option("--system", kn_system)->required();
  kernel->add_option("--n", kn_n)->required();
  kernel->add_option("--alpha", kn_alpha)->required();
  kernel->add_option("--x", kn_x)->required();
  kernel->add_option("--samples", kn_samples, "uniform sample count")
      ->capture_default_str();

  // ---- hn-sweep ----
  SweepConfig hn_cfg;
  std::vector<int> hn_ns;
  std::string hn_range;
  int hn_nmax = 0;
  int hn_grid = 0;
  std::vector<double> hn_xs;
  bool hn_noenforce = false;
  CLI::App* hsweep = app.add_subcommand("hn-sweep", "kernel diagnostics sweep");
  hsweep->add_option("--system", hn_cfg.system)->required();
  hsweep->add_option("--alphas,--alpha", hn_cfg.alphas, "alpha list")->required();
  hsweep->add_option("--n", hn_ns, "explicit n schedule");
  hsweep->add_option("--n-range", hn_range, "inclusive lo:hi, every integer");
  hsweep->add_option("--n-max", hn_nmax, "shorthand for every n in 1..N");
  hsweep->add_option("--x", hn_xs);
  hsweep->add_option("--x-grid", hn_grid);
  hsweep->add_flag("--no-enforce", hn_noenforce, "report only, skip thresholds");

  // ---- extremal ----
  SweepConfig ex_cfg;
  std::vector<int> ex_ns;
  std::string ex_range;
  int ex_nmax = 0;
  int ex_grid = 0;
  std::vector<double> ex_xs;
  bool ex_noenforce = false;
  CLI::App* extremal = app.add_subcommand("extremal", "extremal witness sweep");
  extremal->add_option("--system", ex_cfg.system)->required();
  extremal->add_option("--alphas,--alpha", ex_cfg.alphas)->required();
  extremal->add_option("--n", ex_ns);
  extremal->add_option("--n-range", ex_range);
  extremal->add_option("--n-max", ex_nmax);
  extremal->add_option("--x", ex_xs);
  extremal->add_option("--x-grid", ex_grid);
  extremal->add_flag("--no-enforce", ex_noenforce);

  // ---- sigma-sweep ----
  SweepConfig sg_cfg;
  std::vector<int> sg_ns;
  std::string sg_range;
  int sg_nmax = 0;
  int sg_grid = 0;
  std::vector<double> sg_xs;
  bool sg_noenforce = false;
  CLI::App* ssweep =
      app.add_subcommand("sigma-sweep", "Cesaro mean growth for smooth functions");
  ssweep->add_option("--system", sg_cfg.system)->required();
  ssweep->add_option("--functions,--f", sg_cfg.functions, "function selectors")
      ->required();
  ssweep->add_option("--alphas,--alpha", sg_cfg.alphas)->required();
  ssweep->add_option("--n", sg_ns);
  ssweep->add_option("--n-range", sg_range);
  ssweep->add_option("--n-max", sg_nmax);
  ssweep->add_option("--x", sg_xs);
  ssweep->add_option("--x-grid", sg_grid);
  ssweep->add_flag("--no-enforce", sg_noenforce);

  // ---- verify-identity ----
  std::string vi_name, vi_f = "identity", vi_second = "one";
  std::string vi_system = "cosine";
  int vi_n = 8, vi_k = 1;
  double vi_alpha = 1.0, vi_x = 0.0, vi_tol = 1e-9;
  bool vi_printed = false;
  CLI::App* vident = app.add_subcommand("verify-identity", "check one identity");
  vident
      ->add_option("--identity", vi_name,
                   "parts-mean | parts-endpoint | sigma-boundary | coeff-boundary")
      ->required();
  vident->add_option("--function,--f", vi_f, "f (or g for parts-mean)");
  vident->add_option("--second", vi_second, "F or G partner for parts identities");
  vident->add_option("--system", vi_system);
  vident->add_option("--n", vi_n);
  vident->add_option("--k", vi_k);
  vident->add_option("--alpha", vi_alpha);
  vident->add_option("--x", vi_x);
  vident->add_option("--tol", vi_tol)->capture_default_str();
  vident->add_flag("--as-printed", vi_printed, "truncated middle-sum variant");

  // ---- verify-ons ----
  std::string vo_system = "cosine";
  int vo_horizon = 16;
  double vo_tol = 1e-9;
  CLI::App* vons = app.add_subcommand("verify-ons", "moment/orthonormality report");
  vons->add_option("--system", vo_system)->required();
  vons->add_option("--horizon", vo_horizon)->required();
  vons->add_option("--tol", vo_tol)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (*coeffs) {
      const OrthonormalSystem S = parse_system(co_system);
      const FunctionHandle f = parse_function(co_function);
      const CoefficientVector cv =
          coefficient_vector(f, co_function, S, co_count, g.quad());
      RunManifest m;
      m.config["subcommand"] = "coeffs";
      m.config["system"] = cv.system;
      m.config["function"] = cv.function;
      m.config["count"] = std::to_string(co_count);
      echo_quad(g, &m);
      ReportTable t;
      t.columns = {"k", "coefficient"};
      for (size_t k = 0; k < cv.values.size(); ++k)
        t.rows.push_back({static_cast<int>(k + 1), cv.values[k]});
      emit(g, m, t);
      return 0;
    }

    if (*psum) {
      const OrthonormalSystem S = parse_system(ps_system);
      const FunctionHandle f = parse_function(ps_function);
      std::vector<double> xs = expand_xs(ps_xs, ps_grid);
      if (xs.empty()) throw std::invalid_argument("partial-sum: no x values");
      CoefficientTable table(f, S, g.quad());
      RunManifest m;
      m.config["subcommand"] = "partial-sum";
      m.config["system"] = S.name();
      m.config["function"] = ps_function;
      m.config["n"] = std::to_string(ps_n);
      echo_quad(g, &m);
      ReportTable t;
      t.columns = {"n", "x", "value"};
      for (double x : xs) t.rows.push_back({ps_n, x, table.partial_sum(ps_n, x)});
      emit(g, m, t);
      return 0;
    }

    if (*cesaro) {
      const OrthonormalSystem S = parse_system(cm_system);
      const FunctionHandle f = parse_function(cm_function);
      std::vector<double> xs = expand_xs(cm_xs, cm_grid);
      if (xs.empty()) throw std::invalid_argument("cesaro: no x values");
      CoefficientTable table(f, S, g.quad());
      RunManifest m;
      m.config["subcommand"] = "cesaro";
      m.config["system"] = S.name();
      m.config["function"] = cm_function;
      m.config["n"] = std::to_string(cm_n);
      m.config["alpha"] = format_double(cm_alpha);
      echo_quad(g, &m);
      ReportTable t;
      t.columns = {"n", "alpha", "x", "sigma"};
      for (double x : xs)
        t.rows.push_back({cm_n, cm_alpha, x, table.cesaro_mean(cm_n, cm_alpha, x)});
      emit(g, m, t);
      return 0;
    }

    if (*kernel) {
      if (kn_samples < 2) throw std::invalid_argument("kernel: --samples < 2");
      const OrthonormalSystem S = parse_system(kn_system);
      const KernelSlice slice = kernel_slice(S, kn_n, kn_alpha, kn_x, g.quad());
      RunManifest m;
      m.config["subcommand"] = "kernel";
      m.config["system"] = S.name();
      m.config["n"] = std::to_string(kn_n);
      m.config["alpha"] = format_double(kn_alpha);
      m.config["x"] = format_double(kn_x);
      m.config["samples"] = std::to_string(kn_samples);
      echo_quad(g, &m);
      ReportTable t;
      t.columns = {"u", "q", "prefix"};
      for (int i = 0; i < kn_samples; ++i) {
        const double u = static_cast<double>(i) / (kn_samples - 1);
        t.rows.push_back({u, slice.q(u), slice.prefix(u)});
      }
      emit(g, m, t);
      return 0;
    }

    if (*hsweep) {
      hn_cfg.n_values = expand_schedule(hn_ns, hn_range, hn_nmax);
      hn_cfg.xs = expand_xs(hn_xs, hn_grid);
      hn_cfg.quad = g.quad();
      hn_cfg.seed = g.seed;
      hn_cfg.enforce = !hn_noenforce;
      return sweep_epilogue(g, run_hn_sweep(hn_cfg), t0);
    }

    if (*extremal) {
      ex_cfg.n_values = expand_schedule(ex_ns, ex_range, ex_nmax);
      ex_cfg.xs = expand_xs(ex_xs, ex_grid);
      ex_cfg.quad = g.quad();
      ex_cfg.seed = g.seed;
      ex_cfg.enforce = !ex_noenforce;
      return sweep_epilogue(g, run_extremal_sweep(ex_cfg), t0);
    }

    if (*ssweep) {
      sg_cfg.n_values = expand_schedule(sg_ns, sg_range, sg_nmax);
      sg_cfg.xs = expand_xs(sg_xs, sg_grid);
      sg_cfg.quad = g.quad();
      sg_cfg.seed = g.seed;
      sg_cfg.enforce = !sg_noenforce;
      return sweep_epilogue(g, run_sigma_sweep(sg_cfg), t0);
    }

    if (*vident) {
      IdentityLedger led;
      if (vi_name == "parts-mean") {
        led = parts_identity_mean(parse_function(vi_f), parse_function(vi_second),
                                  vi_n, g.quad(), vi_printed);
      } else if (vi_name == "parts-endpoint") {
        led = parts_identity_endpoint(parse_function(vi_f), parse_function(vi_second),
                                      vi_n, g.quad(), vi_printed);
      } else if (vi_name == "sigma-boundary") {
        led = sigma_boundary_identity(parse_function(vi_f), parse_system(vi_system),
                                      vi_n, vi_alpha, vi_x, g.quad());
      } else if (vi_name == "coeff-boundary") {
        led = coefficient_boundary_identity(parse_function(vi_f),
                                            parse_system(vi_system), vi_k, g.quad());
      } else {
        throw std::invalid_argument("verify-identity: unknown identity '" + vi_name +
                                    "'");
      }
      RunManifest m;
      m.config["subcommand"] = "verify-identity";
      m.config["identity"] = led.identity;
      m.config["function"] = vi_f;
      if (vi_name.rfind("parts-", 0) == 0) m.config["second"] = vi_second;
      m.config["tol"] = format_double(vi_tol);
      echo_quad(g, &m);
      ReportTable t;
      t.columns = {"identity", "parameters", "lhs", "rhs", "abs_gap"};
      std::vector<nlohmann::json> row{led.identity, led.parameters, led.lhs, led.rhs,
                                      led.abs_gap};
      for (size_t i = 0; i < led.rhs_terms.size(); ++i) {
        t.columns.push_back("term" + std::to_string(i + 1));
        row.push_back(led.rhs_terms[i]);
      }
      t.rows.push_back(std::move(row));
      emit(g, m, t);
      return led.abs_gap <= vi_tol ? 0 : 1;
    }

    if (*vons) {
      const OrthonormalSystem S = parse_system(vo_system);
      const MomentReport rep = validate(S, vo_horizon, vo_tol, g.quad());
      RunManifest m;
      m.config["subcommand"] = "verify-ons";
      m.config["system"] = rep.system;
      m.config["horizon"] = std::to_string(rep.horizon);
      m.config["tol"] = format_double(rep.tol);
      echo_quad(g, &m);
      ReportTable t;
      t.columns = {"k", "mean", "first_moment", "max_pair_deviation"};
      for (const MomentRow& r : rep.rows)
        t.rows.push_back({r.k, r.mean, r.first_moment, r.max_pair_deviation});
      // trailing aggregate row: worst values across the table
      t.rows.push_back(
          {"worst", rep.worst_mean, rep.worst_first_moment, rep.worst_orthonormality});
      emit(g, m, t);
      if (!rep.passed()) {
        std::cerr << "violation: declared guarantees exceeded tol "
                  << format_double(rep.tol) << "\n";
        return 1;
      }
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;  // no subcommand matched; require_subcommand makes this unreachable
}
