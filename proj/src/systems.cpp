#include "onsum/systems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

namespace onsum {

OrthonormalSystem::OrthonormalSystem(std::string name, int max_index, Guarantees g,
                                     ElementForm form,
                                     std::function<FunctionHandle(int)> gen,
                                     std::function<PiecewisePoly(int)> poly_gen)
    : name_(std::move(name)),
      max_index_(max_index),
      guarantees_(g),
      form_(form),
      gen_(std::move(gen)),
      poly_gen_(std::move(poly_gen)) {
  if (max_index_ < 1) throw std::invalid_argument("OrthonormalSystem: max_index < 1");
  if (!gen_) throw std::invalid_argument("OrthonormalSystem: no generator");
  if (form_ == ElementForm::piecewise && !poly_gen_)
    throw std::invalid_argument("OrthonormalSystem: piecewise form needs poly_gen");
}

FunctionHandle OrthonormalSystem::element(int k) const {
  if (k < 1 || k > max_index_)
    throw std::out_of_range("OrthonormalSystem: element index " + std::to_string(k) +
                            " outside 1.." + std::to_string(max_index_));
  return gen_(k);
}

PiecewisePoly OrthonormalSystem::element_poly(int k) const {
  if (form_ != ElementForm::piecewise)
    throw std::logic_error("OrthonormalSystem: no piecewise representation");
  if (k < 1 || k > max_index_)
    throw std::out_of_range("OrthonormalSystem: element index out of range");
  return poly_gen_(k);
}

OrthonormalSystem system_cosine() {
  auto gen = [](int k) {
    const double w = 2.0 * M_PI * k;
    const double r2 = std::sqrt(2.0);
    FunctionHandle phi;
    phi.evaluator = [w, r2](double u) { return r2 * std::cos(w * u); };
    phi.max_frequency = static_cast<double>(k);

    FunctionHandle g;  // int_0^u phi
    g.evaluator = [w, r2](double u) { return r2 * std::sin(w * u) / w; };
    g.max_frequency = static_cast<double>(k);
    FunctionHandle G;  // int_0^y g
    G.evaluator = [w, r2](double y) { return r2 * (1.0 - std::cos(w * y)) / (w * w); };
    G.max_frequency = static_cast<double>(k);
    g.antiderivative = std::make_shared<const FunctionHandle>(std::move(G));
    phi.antiderivative = std::make_shared<const FunctionHandle>(std::move(g));
    return phi;
  };
  Guarantees g;
  g.orthonormal = true;
  g.zero_mean_from = 1;
  g.zero_first_moment_from = 0;  // int u phi_k = 0 holds, but is not a claim we rely on
  return OrthonormalSystem("cosine", OrthonormalSystem::kUnbounded, g,
                           ElementForm::trig_cosine, gen);
}

namespace {

PiecewisePoly haar_poly(int m) {
  if (m == 1) return PiecewisePoly::steps({0.0, 1.0}, {1.0});
  int s = 0;
  while ((1 << (s + 1)) <= m - 1) ++s;  // 2^s <= m-1 < 2^{s+1}
  const int j = m - (1 << s);           // 1..2^s
  const double scale = std::pow(2.0, 0.5 * s);
  const double denom = static_cast<double>(1 << s);
  const double L = (j - 1) / denom, M = (j - 0.5) / denom, R = j / denom;
  std::vector<double> knots{0.0};
  std::vector<double> vals;
  if (L > 0.0) {
    knots.push_back(L);
    vals.push_back(0.0);
  }
  knots.push_back(M);
  vals.push_back(scale);
  knots.push_back(R);
  vals.push_back(-scale);
  if (R < 1.0) {
    knots.push_back(1.0);
    vals.push_back(0.0);
  } else {
    knots.back() = 1.0;
  }
  return PiecewisePoly::steps(std::move(knots), std::move(vals));
}

PiecewisePoly walsh_poly(int k) {
  if (k == 1) return PiecewisePoly::steps({0.0, 1.0}, {1.0});
  const unsigned bits = static_cast<unsigned>(k - 1);
  int B = 0;
  while ((1u << B) <= bits) ++B;  // highest Rademacher index is B-1
  const int M = 1 << B;
  std::vector<double> vals(M);
  for (int c = 0; c < M; ++c) {
    int parity = 0;
    for (int i = 0; i < B; ++i)
      if (bits & (1u << i)) parity ^= (c >> (B - 1 - i)) & 1;
    vals[c] = parity ? -1.0 : 1.0;
  }
  return PiecewisePoly::uniform_steps(std::move(vals));
}

}  // namespace

OrthonormalSystem system_haar() {
  Guarantees g;
  g.orthonormal = true;
  g.zero_mean_from = 2;
  auto poly_gen = [](int k) { return haar_poly(k); };
  auto gen = [](int k) { return haar_poly(k).to_handle(2); };
  return OrthonormalSystem("haar", OrthonormalSystem::kUnbounded, g,
                           ElementForm::piecewise, gen, poly_gen);
}

OrthonormalSystem system_walsh() {
  Guarantees g;
  g.orthonormal = true;
  g.zero_mean_from = 2;
  auto poly_gen = [](int k) { return walsh_poly(k); };
  auto gen = [](int k) { return walsh_poly(k).to_handle(2); };
  return OrthonormalSystem("walsh", OrthonormalSystem::kUnbounded, g,
                           ElementForm::piecewise, gen, poly_gen);
}

namespace {

PiecewisePoly compress_reflect_poly(const PiecewisePoly& base) {
  const auto& kn = base.knots();
  const auto& cells = base.cells();
  std::vector<double> knots;
  std::vector<std::vector<double>> out;
  // left half: phi(2u); local coefficient a_i picks up 2^i
  for (size_t c = 0; c < cells.size(); ++c) {
    knots.push_back(0.5 * kn[c]);
    std::vector<double> q(cells[c].size());
    double pw = 1.0;
    for (size_t i = 0; i < q.size(); ++i) {
      q[i] = cells[c][i] * pw;
      pw *= 2.0;
    }
    out.push_back(std::move(q));
  }
  // right half: -phi(2(u-1/2))
  for (size_t c = 0; c < cells.size(); ++c) {
    knots.push_back(0.5 + 0.5 * kn[c]);
    std::vector<double> q(cells[c].size());
    double pw = 1.0;
    for (size_t i = 0; i < q.size(); ++i) {
      q[i] = -cells[c][i] * pw;
      pw *= 2.0;
    }
    out.push_back(std::move(q));
  }
  knots.push_back(1.0);
  return PiecewisePoly(std::move(knots), std::move(out));
}

FunctionHandle compress_reflect_handle(const FunctionHandle& f) {
  FunctionHandle v;
  {
    auto fe = f.evaluator;
    v.evaluator = [fe](double u) {
      return u < 0.5 ? fe(2.0 * u) : -fe(2.0 * (u - 0.5));
    };
  }
  for (double b : f.breakpoints) {
    v.breakpoints.push_back(0.5 * b);
    v.breakpoints.push_back(0.5 + 0.5 * b);
  }
  v.breakpoints.push_back(0.5);
  v.breakpoints = normalize_breakpoints(std::move(v.breakpoints));
  v.max_frequency = 2.0 * f.max_frequency;
  v.support_lo = 0.5 * f.support_lo;
  v.support_hi = 0.5 + 0.5 * f.support_hi;

  if (f.antiderivative && f.antiderivative->valid()) {
    const auto A = f.antiderivative;
    const double a1 = A->evaluator(1.0);
    FunctionHandle va;
    {
      auto ae = A->evaluator;
      va.evaluator = [ae, a1](double u) {
        return u < 0.5 ? 0.5 * ae(2.0 * u) : 0.5 * a1 - 0.5 * ae(2.0 * (u - 0.5));
      };
    }
    va.breakpoints = v.breakpoints;
    va.max_frequency = v.max_frequency;
    if (A->antiderivative && A->antiderivative->valid()) {
      const auto AA = A->antiderivative;
      const double aa1 = AA->evaluator(1.0);
      FunctionHandle vg;
      auto aae = AA->evaluator;
      vg.evaluator = [aae, aa1, a1](double y) {
        if (y < 0.5) return 0.25 * aae(2.0 * y);
        return 0.25 * aa1 + 0.5 * a1 * (y - 0.5) - 0.25 * aae(2.0 * (y - 0.5));
      };
      vg.breakpoints = va.breakpoints;
      vg.max_frequency = va.max_frequency;
      va.antiderivative = std::make_shared<const FunctionHandle>(std::move(vg));
    }
    v.antiderivative = std::make_shared<const FunctionHandle>(std::move(va));
  }
  return v;
}

}  // namespace

OrthonormalSystem compress_reflect(const OrthonormalSystem& base) {
  Guarantees g;
  g.orthonormal = base.guarantees().orthonormal;
  g.zero_mean_from = 1;  // reflection cancels the mean for every element
  g.zero_first_moment_from = base.guarantees().zero_mean_from;
  const std::string name = "cr:" + base.name();
  if (base.form() == ElementForm::piecewise) {
    OrthonormalSystem b = base;
    auto poly_gen = [b](int k) { return compress_reflect_poly(b.element_poly(k)); };
    auto gen = [poly_gen](int k) { return poly_gen(k).to_handle(2); };
    return OrthonormalSystem(name, base.max_index(), g, ElementForm::piecewise, gen,
                             poly_gen);
  }
  OrthonormalSystem b = base;
  auto gen = [b](int k) { return compress_reflect_handle(b.element(k)); };
  return OrthonormalSystem(name, base.max_index(), g, ElementForm::generic, gen);
}

OrthonormalSystem gram_schmidt_random(std::uint64_t seed, int count, int granularity) {
  if (granularity < 1 || (granularity & (granularity - 1)) != 0)
    throw std::invalid_argument("gram_schmidt_random: granularity must be a power of two");
  if (count < 1 || count > granularity)
    throw std::invalid_argument("gram_schmidt_random: need 1 <= count <= granularity");

  const int G = granularity;
  std::mt19937_64 rng(seed);
  auto draw_uniform = [&rng]() {
    // fixed mapping, not std::uniform_real_distribution, so streams are
    // identical across standard libraries
    return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
  };
  auto dot = [G](const std::vector<double>& a, const std::vector<double>& b) {
    KahanSum s;
    for (int i = 0; i < G; ++i) s.add(a[i] * b[i]);
    return s.value() / G;  // matches int_0^1 for step functions on this grid
  };

  std::vector<std::vector<double>> basis;
  basis.reserve(count);
  for (int k = 0; k < count; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < 16 && !placed; ++attempt) {
      std::vector<double> v(G);
      for (int i = 0; i < G; ++i) v[i] = draw_uniform();
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& e : basis) {
          const double c = dot(v, e);
          for (int i = 0; i < G; ++i) v[i] -= c * e[i];
        }
      }
      const double nrm = std::sqrt(dot(v, v));
      if (nrm < 1e-8) continue;  // degenerate draw
      for (int i = 0; i < G; ++i) v[i] /= nrm;
      basis.push_back(std::move(v));
      placed = true;
    }
    if (!placed)
      throw std::runtime_error("gram_schmidt_random: degenerate draws exhausted");
  }

  auto rows = std::make_shared<const std::vector<std::vector<double>>>(std::move(basis));
  auto poly_gen = [rows](int k) {
    return PiecewisePoly::uniform_steps((*rows)[static_cast<size_t>(k) - 1]);
  };
  auto gen = [poly_gen](int k) { return poly_gen(k).to_handle(2); };
  Guarantees g;
  g.orthonormal = true;
  std::ostringstream name;
  name << "rand:" << seed << ":" << count << ":" << granularity;
  return OrthonormalSystem(name.str(), count, g, ElementForm::piecewise, gen, poly_gen);
}

OrthonormalSystem load_system_csv(const std::string& path, Guarantees declared) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_system_csv: cannot open " + path);
  std::map<int, std::vector<std::pair<double, double>>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tk, tu, tv;
    if (!std::getline(ls, tk, ',') || !std::getline(ls, tu, ',') ||
        !std::getline(ls, tv))
      throw std::runtime_error("load_system_csv: bad row at line " +
                               std::to_string(lineno));
    char* end = nullptr;
    const long k = std::strtol(tk.c_str(), &end, 10);
    if (end == tk.c_str() || k < 1)
      throw std::runtime_error("load_system_csv: bad index at line " +
                               std::to_string(lineno));
    const double u = std::strtod(tu.c_str(), nullptr);
    const double v = std::strtod(tv.c_str(), nullptr);
    rows[static_cast<int>(k)].emplace_back(u, v);
  }
  if (rows.empty()) throw std::runtime_error("load_system_csv: no data in " + path);
  const int K = rows.rbegin()->first;
  auto polys = std::make_shared<std::vector<PiecewisePoly>>();
  polys->reserve(K);
  for (int k = 1; k <= K; ++k) {
    auto it = rows.find(k);
    if (it == rows.end())
      throw std::runtime_error("load_system_csv: missing element " + std::to_string(k));
    auto& pts = it->second;
    std::sort(pts.begin(), pts.end());
    if (pts.front().first != 0.0)
      throw std::runtime_error("load_system_csv: element " + std::to_string(k) +
                               " must start at u=0");
    std::vector<double> knots, vals;
    for (size_t i = 0; i < pts.size(); ++i) {
      if (i > 0 && pts[i].first <= pts[i - 1].first)
        throw std::runtime_error("load_system_csv: non-increasing cells in element " +
                                 std::to_string(k));
      if (pts[i].first >= 1.0)
        throw std::runtime_error("load_system_csv: cell start past 1 in element " +
                                 std::to_string(k));
      knots.push_back(pts[i].first);
      vals.push_back(pts[i].second);
    }
    knots.push_back(1.0);
    polys->push_back(PiecewisePoly::steps(std::move(knots), std::move(vals)));
  }
  auto poly_gen = [polys](int k) { return (*polys)[static_cast<size_t>(k) - 1]; };
  auto gen = [poly_gen](int k) { return poly_gen(k).to_handle(2); };
  return OrthonormalSystem("csv:" + path, K, declared, ElementForm::piecewise, gen,
                           poly_gen);
}

MomentReport validate(const OrthonormalSystem& S, int horizon, double tol,
                      const QuadratureSpec& spec) {
  if (horizon < 1 || horizon > S.max_index())
    throw std::invalid_argument("validate: horizon outside 1..max_index");
  if (!(tol > 0.0)) throw std::invalid_argument("validate: tol must be positive");

  MomentReport rep;
  rep.system = S.name();
  rep.horizon = horizon;
  rep.tol = tol;
  rep.rows.resize(horizon);

  std::vector<FunctionHandle> phi(horizon);
  for (int k = 1; k <= horizon; ++k) phi[k - 1] = S.element(k);
  const FunctionHandle ident = make_named("identity");

  for (int k = 1; k <= horizon; ++k) {
    auto& row = rep.rows[k - 1];
    row.k = k;
    row.mean = integrate(phi[k - 1], 0.0, 1.0, spec);
    row.first_moment = integrate_product(ident, phi[k - 1], 0.0, 1.0, spec);
  }
  for (int j = 1; j <= horizon; ++j) {
    for (int k = j; k <= horizon; ++k) {
      const double ip = integrate_product(phi[j - 1], phi[k - 1], 0.0, 1.0, spec);
      const double dev = std::abs(ip - (j == k ? 1.0 : 0.0));
      rep.rows[j - 1].max_pair_deviation =
          std::max(rep.rows[j - 1].max_pair_deviation, dev);
      rep.rows[k - 1].max_pair_deviation =
          std::max(rep.rows[k - 1].max_pair_deviation, dev);
      rep.worst_orthonormality = std::max(rep.worst_orthonormality, dev);
    }
  }

  const Guarantees& g = S.guarantees();
  if (g.orthonormal) rep.orthonormal_ok = rep.worst_orthonormality <= tol;
  if (g.zero_mean_from >= 1) {
    for (int k = g.zero_mean_from; k <= horizon; ++k)
      rep.worst_mean = std::max(rep.worst_mean, std::abs(rep.rows[k - 1].mean));
    rep.zero_mean_ok = rep.worst_mean <= tol;
  }
  if (g.zero_first_moment_from >= 1) {
    for (int k = g.zero_first_moment_from; k <= horizon; ++k)
      rep.worst_first_moment =
          std::max(rep.worst_first_moment, std::abs(rep.rows[k - 1].first_moment));
    rep.zero_first_moment_ok = rep.worst_first_moment <= tol;
  }
  return rep;
}

}  // namespace onsum
