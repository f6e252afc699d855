#include "onsum/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace onsum {

namespace {

// Per-element cache entries.  For the closed-form cosine family only the
// index is needed; for piecewise systems we keep the exact integrated polys;
// generic systems fall back to FunctionHandle evaluators.
struct PiecewiseEntry {
  std::shared_ptr<const PiecewisePoly> g;   // int_0^u phi_k
  std::shared_ptr<const PiecewisePoly> G;   // int_0^y g
  double g_lo = 0.0, g_hi = 1.0;            // support of g
  bool g_tail_zero = false;                 // g == 0 on [g_hi, 1]
  double G_tail = 0.0;                      // G(y) for y >= g_hi when tail is zero
};

struct GenericEntry {
  std::function<double(double)> g;
  std::function<double(double)> G;  // empty when no closed form exists
};

}  // namespace

struct KernelWorkspace::Cache {
  ElementForm form = ElementForm::generic;
  std::vector<FunctionHandle> phi;          // 1-based at index k-1
  std::vector<PiecewiseEntry> pw;
  std::vector<GenericEntry> gen;
  bool all_closed_prefix = true;            // every k has G in closed form
  std::vector<std::vector<double>> g_bps;   // per-k breakpoints of g
  std::vector<double> g_freq;
};

KernelWorkspace::KernelWorkspace(OrthonormalSystem S, int n_max, QuadratureSpec spec)
    : sys_(std::move(S)), n_max_(n_max), spec_(spec) {
  if (n_max_ < 1 || n_max_ > sys_.max_index())
    throw std::out_of_range("KernelWorkspace: n_max outside 1..max_index");
  auto cache = std::make_shared<Cache>();
  cache->form = sys_.form();
  cache->phi.resize(n_max_);
  cache->g_bps.resize(n_max_);
  cache->g_freq.assign(n_max_, 0.0);
  for (int k = 1; k <= n_max_; ++k) cache->phi[k - 1] = sys_.element(k);

  switch (cache->form) {
    case ElementForm::trig_cosine:
      // g_k(u) = sqrt(2) sin(2 pi k u) / (2 pi k), G_k from 1 - cos; no
      // per-element storage beyond phi handles.
      for (int k = 1; k <= n_max_; ++k) cache->g_freq[k - 1] = k;
      break;
    case ElementForm::piecewise: {
      cache->pw.resize(n_max_);
      for (int k = 1; k <= n_max_; ++k) {
        PiecewisePoly phi_poly = sys_.element_poly(k);
        auto g = std::make_shared<const PiecewisePoly>(phi_poly.antiderivative());
        auto G = std::make_shared<const PiecewisePoly>(g->antiderivative());
        PiecewiseEntry e;
        e.g = g;
        e.G = G;
        g->support(&e.g_lo, &e.g_hi);
        // trailing zero cells mean g vanishes identically past g_hi, so the
        // prefix is constant there; otherwise no tail shortcut
        e.g_tail_zero = e.g_hi < 1.0;
        e.G_tail = G->value(1.0);
        const auto& kn = g->knots();
        cache->g_bps[k - 1].assign(kn.begin() + 1, kn.end() - 1);
        cache->pw[k - 1] = std::move(e);
      }
      break;
    }
    case ElementForm::generic: {
      cache->gen.resize(n_max_);
      for (int k = 1; k <= n_max_; ++k) {
        FunctionHandle g = prefix_integral(cache->phi[k - 1], spec_);
        cache->gen[k - 1].g = g.evaluator;
        cache->g_bps[k - 1] = g.breakpoints;
        cache->g_freq[k - 1] = g.max_frequency;
        if (g.antiderivative && g.antiderivative->valid())
          cache->gen[k - 1].G = g.antiderivative->evaluator;
        else
          cache->all_closed_prefix = false;
      }
      break;
    }
  }
  cache_ = std::move(cache);
}

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// q and prefix evaluators share this bundle; FunctionHandle closures keep it
// alive via shared_ptr.
struct SliceData {
  ElementForm form = ElementForm::generic;
  int n = 0;
  std::shared_ptr<const KernelWorkspace::Cache> cache;
  std::vector<double> wphi;  // w_{n,k} phi_k(x)
  // trig: a_q[k] = wphi_k sqrt(2)/(2 pi k); a_p[k] = a_q[k]/(2 pi k)
  std::vector<double> a_q, a_p;

  // Hot loops below use plain fixed-order sums: the rounding error grows
  // like n*eps (~1e-13 at n = 512), far below any tolerance applied to
  // these values, and the fixed order keeps outputs deterministic.
  double q_at(double u) const {
    switch (form) {
      case ElementForm::trig_cosine: {
        // sum a_q[k] sin(2 pi k u) via the angle-addition recurrence
        const double s1 = std::sin(kTwoPi * u), c1 = std::cos(kTwoPi * u);
        double sk = s1, ck = c1;
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
          s += a_q[k] * sk;
          const double sn = sk * c1 + ck * s1;
          ck = ck * c1 - sk * s1;
          sk = sn;
        }
        return s;
      }
      case ElementForm::piecewise: {
        const auto& pw = cache->pw;
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
          const double w = wphi[k];
          if (w == 0.0) continue;
          const auto& e = pw[k];
          if (u <= e.g_lo || (e.g_tail_zero && u >= e.g_hi)) continue;
          s += w * e.g->value(u);
        }
        return s;
      }
      case ElementForm::generic:
      default: {
        const auto& gen = cache->gen;
        double s = 0.0;
        for (int k = 0; k < n; ++k)
          if (wphi[k] != 0.0) s += wphi[k] * gen[k].g(u);
        return s;
      }
    }
  }

  double prefix_at(double y) const {
    switch (form) {
      case ElementForm::trig_cosine: {
        // sum a_p[k] (1 - cos(2 pi k y))
        const double s1 = std::sin(kTwoPi * y), c1 = std::cos(kTwoPi * y);
        double sk = s1, ck = c1;
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
          s += a_p[k] * (1.0 - ck);
          const double sn = sk * c1 + ck * s1;
          ck = ck * c1 - sk * s1;
          sk = sn;
        }
        return s;
      }
      case ElementForm::piecewise: {
        const auto& pw = cache->pw;
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
          const double w = wphi[k];
          if (w == 0.0) continue;
          const auto& e = pw[k];
          if (y <= e.g_lo) continue;
          if (e.g_tail_zero && y >= e.g_hi)
            s += w * e.G_tail;
          else
            s += w * e.G->value(y);
        }
        return s;
      }
      case ElementForm::generic:
      default: {
        const auto& gen = cache->gen;
        double s = 0.0;
        for (int k = 0; k < n; ++k)
          if (wphi[k] != 0.0) s += wphi[k] * gen[k].G(y);
        return s;
      }
    }
  }
};

}  // namespace

KernelSlice KernelWorkspace::slice(int n, double alpha, double x) const {
  if (n < 1 || n > n_max_)
    throw std::out_of_range("KernelWorkspace: n outside 1..n_max");
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("KernelWorkspace: x outside [0,1]");

  KernelSlice sl;
  sl.system = sys_.name();
  sl.n = n;
  sl.alpha = alpha;
  sl.x = x;
  sl.weights = cesaro_weights(n, alpha).weights;
  sl.phi_at_x.resize(n);
  KahanSum sq;
  for (int k = 1; k <= n; ++k) {
    sl.phi_at_x[k - 1] = cache_->phi[k - 1](x);
    sq.add(sl.phi_at_x[k - 1] * sl.phi_at_x[k - 1]);
  }
  sl.phi_sq_sum = sq.value();

  auto data = std::make_shared<SliceData>();
  data->form = cache_->form;
  data->n = n;
  data->cache = cache_;
  data->wphi.resize(n);
  for (int k = 0; k < n; ++k) data->wphi[k] = sl.weights[k] * sl.phi_at_x[k];
  if (data->form == ElementForm::trig_cosine) {
    data->a_q.resize(n);
    data->a_p.resize(n);
    const double r2 = std::sqrt(2.0);
    for (int k = 0; k < n; ++k) {
      const double w = kTwoPi * (k + 1);
      data->a_q[k] = data->wphi[k] * r2 / w;
      data->a_p[k] = data->a_q[k] / w;
    }
  }

  // merged metadata for the quadrature layer
  std::vector<double> bps;
  double freq = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto& b = cache_->g_bps[k];
    bps.insert(bps.end(), b.begin(), b.end());
    freq = std::max(freq, cache_->g_freq[k]);
  }
  bps = normalize_breakpoints(std::move(bps));

  sl.q.evaluator = [data](double u) { return data->q_at(u); };
  sl.q.breakpoints = bps;
  sl.q.max_frequency = freq;

  bool closed = data->form == ElementForm::trig_cosine ||
                data->form == ElementForm::piecewise || cache_->all_closed_prefix;
  if (closed) {
    sl.prefix.evaluator = [data](double y) { return data->prefix_at(y); };
    sl.prefix.breakpoints = bps;
    sl.prefix.max_frequency = freq;
    sl.prefix.derivative = std::make_shared<const FunctionHandle>(sl.q);
  } else {
    sl.prefix = prefix_integral(sl.q, spec_);
  }
  return sl;
}

KernelSlice kernel_slice(const OrthonormalSystem& S, int n, double alpha, double x,
                         const QuadratureSpec& spec) {
  return KernelWorkspace(S, n, spec).slice(n, alpha, x);
}

double h_diagnostic(const KernelSlice& slice) {
  const int n = slice.n;
  KahanSum s;
  for (int i = 1; i < n; ++i)
    s.add(std::abs(slice.prefix(static_cast<double>(i) / n)));
  return s.value() / n;
}

double phi_sq_ratio(const OrthonormalSystem& S, int n, double x) {
  if (n < 1 || n > S.max_index())
    throw std::out_of_range("phi_sq_ratio: n outside 1..max_index");
  KahanSum s;
  for (int k = 1; k <= n; ++k) {
    const double v = S.element(k)(x);
    s.add(v * v);
  }
  return s.value() / (static_cast<double>(n) * n);
}

double phi_sq_ratio(const KernelSlice& slice) {
  return slice.phi_sq_sum / (static_cast<double>(slice.n) * slice.n);
}

double cell_mass_slack(const KernelSlice& slice, const QuadratureSpec& spec) {
  const int n = slice.n;
  const double bound = std::sqrt(phi_sq_ratio(slice));
  double worst = bound;  // slack of an empty integral can't exceed the bound
  for (int i = 1; i <= n; ++i) {
    const double a = static_cast<double>(i - 1) / n;
    const double b = static_cast<double>(i) / n;
    const double mass = integrate_abs(slice.q, a, b, spec);
    worst = std::min(worst, bound - mass);
  }
  return worst;
}

namespace {

int sign_plus(double v) { return v >= 0.0 ? 1 : -1; }

// Bisection on the sign(0)=+1 convention; [lo,hi] must straddle a change.
double refine_zero(const FunctionHandle& f, double lo, double hi) {
  const int slo = sign_plus(f.evaluator(lo));
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sign_plus(f.evaluator(mid)) == slo)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> prefix_sign_changes(const KernelSlice& slice) {
  const int m = 8 * slice.n;
  std::vector<double> zeros;
  int prev = sign_plus(slice.prefix.evaluator(0.0));
  for (int j = 1; j <= m; ++j) {
    const double u = static_cast<double>(j) / m;
    const int cur = sign_plus(slice.prefix.evaluator(u));
    if (cur != prev)
      zeros.push_back(refine_zero(slice.prefix, static_cast<double>(j - 1) / m, u));
    prev = cur;
  }
  return zeros;
}

}  // namespace

ExtremalFunction extremal_function(const KernelSlice& slice) {
  ExtremalFunction ex;
  ex.zeros = prefix_sign_changes(slice);

  // slopes: prefix sign on each segment between consecutive zeros
  std::vector<double> knots{0.0};
  for (double z : ex.zeros)
    if (z > 0.0 && z < 1.0) knots.push_back(z);
  knots.push_back(1.0);
  ex.slopes.resize(knots.size() - 1);
  for (size_t s = 0; s + 1 < knots.size(); ++s) {
    const double mid = 0.5 * (knots[s] + knots[s + 1]);
    ex.slopes[s] = sign_plus(slice.prefix.evaluator(mid));
  }

  std::vector<std::vector<double>> cells(ex.slopes.size());
  double level = 0.0;
  for (size_t s = 0; s < ex.slopes.size(); ++s) {
    cells[s] = {level, static_cast<double>(ex.slopes[s])};
    level += ex.slopes[s] * (knots[s + 1] - knots[s]);
  }
  PiecewisePoly poly(std::move(knots), std::move(cells));
  ex.r = poly.to_handle(1);
  ex.r.support_lo = 0.0;  // levels make the poly nonzero almost everywhere
  ex.r.support_hi = 1.0;
  return ex;
}

std::vector<int> sign_change_set(const KernelSlice& slice) {
  const std::vector<double> zeros = prefix_sign_changes(slice);
  std::vector<int> out;
  for (double z : zeros) {
    const int i = static_cast<int>(std::floor(z * slice.n));
    if (i >= 1 && i <= slice.n - 1 && (out.empty() || out.back() != i))
      out.push_back(i);
  }
  return out;
}

double u_functional(const FunctionHandle& f, const KernelSlice& slice,
                    const QuadratureSpec& spec) {
  return integrate_product(f, slice.q, 0.0, 1.0, spec);
}

KernelTerms kernel_terms(const FunctionHandle& fprime, const KernelSlice& slice,
                         const QuadratureSpec& spec) {
  if (!fprime.valid()) throw std::invalid_argument("kernel_terms: empty function");
  const int n = slice.n;
  KernelTerms t;

  // shifted-difference handle f'(u) - f'(u + 1/n) on [0, 1 - 1/n]
  FunctionHandle diff;
  {
    auto fe = fprime.evaluator;
    const double h = 1.0 / n;
    diff.evaluator = [fe, h](double u) {
      return fe(u) - fe(std::min(u + h, 1.0));
    };
    diff.breakpoints = fprime.breakpoints;
    for (double b : fprime.breakpoints) diff.breakpoints.push_back(b - h);
    diff.breakpoints = normalize_breakpoints(std::move(diff.breakpoints));
    diff.max_frequency = fprime.max_frequency;
  }

  KahanSum shift;
  for (int i = 1; i <= n - 1; ++i) {
    const double a = static_cast<double>(i - 1) / n;
    const double b = static_cast<double>(i) / n;
    const double cell = integrate(diff, a, b, spec);
    shift.add(n * cell * slice.prefix(b));
  }
  t.shift_term = shift.value();

  KahanSum mid;
  for (int i = 1; i <= n; ++i) {
    const double a = static_cast<double>(i - 1) / n;
    const double b = static_cast<double>(i) / n;
    const double mean = n * integrate(fprime, a, b, spec);
    FunctionHandle centered;
    auto fe = fprime.evaluator;
    centered.evaluator = [fe, mean](double u) { return fe(u) - mean; };
    centered.breakpoints = fprime.breakpoints;
    centered.max_frequency = fprime.max_frequency;
    mid.add(integrate_product(centered, slice.q, a, b, spec));
  }
  t.cellmean_term = mid.value();

  t.boundary_term =
      n * integrate(fprime, (n - 1.0) / n, 1.0, spec) * slice.prefix(1.0);
  return t;
}

DiagnosticRow diagnostic_row(const KernelSlice& slice, const QuadratureSpec& spec) {
  DiagnosticRow row;
  row.n = slice.n;
  row.alpha = slice.alpha;
  row.x = slice.x;
  row.h_value = h_diagnostic(slice);
  row.phi_sq_ratio = phi_sq_ratio(slice);
  row.cell_mass_slack = cell_mass_slack(slice, spec);
  row.prefix_at_1 = slice.prefix(1.0);
  return row;
}

}  // namespace onsum
