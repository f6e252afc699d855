#include "onsum/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace onsum {

namespace {

GaussRule compute_gauss_legendre(int q) {
  if (q < 1 || q > 64)
    throw std::invalid_argument("gauss_legendre: order out of range");
  GaussRule r;
  r.nodes.resize(q);
  r.weights.resize(q);
  // Newton from the Chebyshev-angle initial guess; P_q via the three-term
  // recurrence.  Converges in 3-4 steps well past double precision.
  for (int i = 0; i < (q + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (q + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = q * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // one clean-up iteration for the weight
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = q * (x * p1 - p0) / (x * x - 1.0);
    }
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.nodes[i] = -x;
    r.nodes[q - 1 - i] = x;
    r.weights[i] = w;
    r.weights[q - 1 - i] = w;
  }
  if (q % 2 == 1) r.nodes[q / 2] = 0.0;
  return r;
}

const GaussRule& cached_rule(int order) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussRule>(compute_gauss_legendre(order));
  return *slot;
}

void check_range(double a, double b) {
  if (!(a >= 0.0 && b <= 1.0 && a <= b))
    throw std::domain_error("integrate: bad interval, need 0 <= a <= b <= 1");
}

int panels_for(double width, double max_freq, const QuadratureSpec& spec) {
  int m = std::max(1, spec.min_panels);
  if (max_freq > 0.0) {
    double cap = std::ceil(width * spec.osc_panels * max_freq);
    if (cap > 1e7) throw std::invalid_argument("integrate: panel count blow-up");
    m = std::max(m, static_cast<int>(cap));
  }
  return m;
}

// Piece boundaries: a, b, and every breakpoint / support edge strictly between.
std::vector<double> piece_edges(const FunctionHandle& f, double a, double b) {
  std::vector<double> e;
  e.push_back(a);
  for (double bp : f.breakpoints)
    if (bp > a && bp < b) e.push_back(bp);
  for (double s : {f.support_lo, f.support_hi})
    if (s > a && s < b) e.push_back(s);
  e.push_back(b);
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

double integrate_on_edges(const FunctionHandle& f, const std::vector<double>& edges,
                          const QuadratureSpec& spec) {
  const GaussRule& rule = gauss_legendre(spec.order);
  KahanSum total;
  for (size_t p = 0; p + 1 < edges.size(); ++p) {
    const double lo = edges[p], hi = edges[p + 1];
    if (hi <= f.support_lo || lo >= f.support_hi) continue;  // f vanishes here
    const int m = panels_for(hi - lo, f.max_frequency, spec);
    const double h = (hi - lo) / m;
    for (int j = 0; j < m; ++j) {
      const double c = lo + (j + 0.5) * h;
      KahanSum panel;
      for (int i = 0; i < spec.order; ++i)
        panel.add(rule.weights[i] * f.evaluator(c + 0.5 * h * rule.nodes[i]));
      total.add(0.5 * h * panel.value());
    }
  }
  return total.value();
}

// Locates a sign change of f in [lo,hi] (f(lo), f(hi) straddling zero under
// the sign(0)=+1 convention) by bisection on that convention.
double bisect_sign_change(const FunctionHandle& f, double lo, double hi) {
  auto sgn = [](double v) { return v >= 0.0 ? 1 : -1; };
  int slo = sgn(f.evaluator(lo));
  for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
    double mid = 0.5 * (lo + hi);
    if (sgn(f.evaluator(mid)) == slo)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

const GaussRule& gauss_legendre(int order) { return cached_rule(order); }

double integrate(const FunctionHandle& f, double a, double b,
                 const QuadratureSpec& spec) {
  if (!f.valid()) throw std::invalid_argument("integrate: empty function");
  check_range(a, b);
  if (a == b) return 0.0;
  return integrate_on_edges(f, piece_edges(f, a, b), spec);
}

double integrate_product(const FunctionHandle& f, const FunctionHandle& g,
                         double a, double b, const QuadratureSpec& spec) {
  if (!f.valid() || !g.valid())
    throw std::invalid_argument("integrate_product: empty function");
  check_range(a, b);
  if (a == b) return 0.0;
  FunctionHandle prod;
  const auto& fe = f.evaluator;
  const auto& ge = g.evaluator;
  prod.evaluator = [fe, ge](double u) { return fe(u) * ge(u); };
  prod.breakpoints = f.breakpoints;
  prod.breakpoints.insert(prod.breakpoints.end(), g.breakpoints.begin(),
                          g.breakpoints.end());
  prod.breakpoints = normalize_breakpoints(std::move(prod.breakpoints));
  prod.max_frequency = f.max_frequency + g.max_frequency;
  prod.support_lo = std::max(f.support_lo, g.support_lo);
  prod.support_hi = std::min(f.support_hi, g.support_hi);
  if (prod.support_lo >= prod.support_hi) return 0.0;
  return integrate(prod, a, b, spec);
}

double integrate_abs(const FunctionHandle& f, double a, double b,
                     const QuadratureSpec& spec) {
  if (!f.valid()) throw std::invalid_argument("integrate_abs: empty function");
  check_range(a, b);
  if (a == b) return 0.0;

  // Scan panel edges and midpoints for sign changes, refine each crossing,
  // then integrate |f| on panels aligned to the crossings.
  std::vector<double> edges = piece_edges(f, a, b);
  std::vector<double> scan;
  for (size_t p = 0; p + 1 < edges.size(); ++p) {
    const int m = panels_for(edges[p + 1] - edges[p], f.max_frequency, spec);
    const double h = (edges[p + 1] - edges[p]) / m;
    for (int j = 0; j < 2 * m; ++j) scan.push_back(edges[p] + 0.5 * j * h);
  }
  scan.push_back(b);

  std::vector<double> zeros;
  auto sgn = [](double v) { return v >= 0.0 ? 1 : -1; };
  int prev = sgn(f.evaluator(scan[0]));
  for (size_t i = 1; i < scan.size(); ++i) {
    int cur = sgn(f.evaluator(scan[i]));
    if (cur != prev) zeros.push_back(bisect_sign_change(f, scan[i - 1], scan[i]));
    prev = cur;
  }

  FunctionHandle af;
  const auto& fe = f.evaluator;
  af.evaluator = [fe](double u) { return std::abs(fe(u)); };
  af.breakpoints = f.breakpoints;
  af.breakpoints.insert(af.breakpoints.end(), zeros.begin(), zeros.end());
  af.breakpoints = normalize_breakpoints(std::move(af.breakpoints));
  af.max_frequency = f.max_frequency;
  af.support_lo = f.support_lo;
  af.support_hi = f.support_hi;
  return integrate(af, a, b, spec);
}

FunctionHandle prefix_integral(const FunctionHandle& f, const QuadratureSpec& spec) {
  if (!f.valid()) throw std::invalid_argument("prefix_integral: empty function");
  if (f.antiderivative && f.antiderivative->valid()) {
    FunctionHandle out = *f.antiderivative;
    out.derivative = std::make_shared<const FunctionHandle>(f);
    return out;
  }

  // Cumulative panel table over all of [0,1]; queries finish with a partial
  // panel so the cost of a prefix evaluation stays independent of history.
  struct Table {
    std::vector<double> edges;
    std::vector<double> cum;  // cum[i] = int_0^{edges[i]} f
    FunctionHandle f;
    QuadratureSpec spec;
  };
  auto tbl = std::make_shared<Table>();
  tbl->f = f;
  tbl->spec = spec;
  std::vector<double> pieces = piece_edges(f, 0.0, 1.0);
  for (size_t p = 0; p + 1 < pieces.size(); ++p) {
    const int m = panels_for(pieces[p + 1] - pieces[p], f.max_frequency, spec);
    const double h = (pieces[p + 1] - pieces[p]) / m;
    for (int j = 0; j < m; ++j) tbl->edges.push_back(pieces[p] + j * h);
  }
  tbl->edges.push_back(1.0);
  tbl->cum.resize(tbl->edges.size());
  KahanSum run;
  tbl->cum[0] = 0.0;
  const GaussRule& rule = gauss_legendre(spec.order);
  for (size_t i = 0; i + 1 < tbl->edges.size(); ++i) {
    const double lo = tbl->edges[i], hi = tbl->edges[i + 1];
    if (hi <= f.support_lo || lo >= f.support_hi) {
      tbl->cum[i + 1] = run.value();
      continue;
    }
    const double c = 0.5 * (lo + hi), h = hi - lo;
    KahanSum panel;
    for (int k = 0; k < spec.order; ++k)
      panel.add(rule.weights[k] * f.evaluator(c + 0.5 * h * rule.nodes[k]));
    run.add(0.5 * h * panel.value());
    tbl->cum[i + 1] = run.value();
  }

  FunctionHandle out;
  out.evaluator = [tbl](double u) {
    if (!(u >= 0.0 && u <= 1.0))
      throw std::domain_error("prefix: argument outside [0,1]");
    const auto& e = tbl->edges;
    auto it = std::upper_bound(e.begin(), e.end(), u);
    size_t i = static_cast<size_t>(it - e.begin());
    if (i == 0) return 0.0;
    --i;
    if (i + 1 >= e.size()) return tbl->cum.back();
    double base = tbl->cum[i];
    if (u == e[i]) return base;
    const GaussRule& rule = gauss_legendre(tbl->spec.order);
    const double c = 0.5 * (e[i] + u), h = u - e[i];
    KahanSum panel;
    for (int k = 0; k < tbl->spec.order; ++k)
      panel.add(rule.weights[k] * tbl->f.evaluator(c + 0.5 * h * rule.nodes[k]));
    return base + 0.5 * h * panel.value();
  };
  out.breakpoints = f.breakpoints;
  out.max_frequency = f.max_frequency;
  out.derivative = std::make_shared<const FunctionHandle>(f);
  return out;
}

}  // namespace onsum
