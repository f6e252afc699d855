#include "onsum/function_handle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace onsum {

std::vector<double> normalize_breakpoints(std::vector<double> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  // drop endpoints and anything outside the domain
  pts.erase(std::remove_if(pts.begin(), pts.end(),
                           [](double p) { return p <= 0.0 || p >= 1.0; }),
            pts.end());
  return pts;
}

LipschitzProfile lip_profile(const FunctionHandle& f, int grid_size) {
  if (grid_size < 2) throw std::invalid_argument("lip_profile: grid_size < 2");
  std::vector<double> grid;
  grid.reserve(grid_size + f.breakpoints.size());
  for (int i = 0; i < grid_size; ++i)
    grid.push_back(static_cast<double>(i) / (grid_size - 1));
  grid.insert(grid.end(), f.breakpoints.begin(), f.breakpoints.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  LipschitzProfile prof;
  double prev_u = grid[0], prev_v = f(grid[0]);
  prof.sup_norm = std::abs(prev_v);
  for (size_t i = 1; i < grid.size(); ++i) {
    const double u = grid[i], v = f(u);
    prof.sup_norm = std::max(prof.sup_norm, std::abs(v));
    const double du = u - prev_u;
    if (du > 0.0)
      prof.lip_seminorm = std::max(prof.lip_seminorm, std::abs(v - prev_v) / du);
    prev_u = u;
    prev_v = v;
  }
  prof.lip1_norm = prof.sup_norm + prof.lip_seminorm;
  return prof;
}

FunctionHandle polynomial(const std::vector<double>& coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("polynomial: no coefficients");

  // handle chain with two exact antiderivative levels and one derivative
  struct Builder {
    static FunctionHandle plain(std::vector<double> c) {
      FunctionHandle h;
      h.evaluator = [c](double u) {
        double v = 0.0;
        for (size_t i = c.size(); i-- > 0;) v = v * u + c[i];
        return v;
      };
      return h;
    }
    static std::vector<double> integrated(const std::vector<double>& c) {
      std::vector<double> q(c.size() + 1, 0.0);
      for (size_t i = 0; i < c.size(); ++i) q[i + 1] = c[i] / static_cast<double>(i + 1);
      return q;
    }
    static std::vector<double> differentiated(const std::vector<double>& c) {
      if (c.size() <= 1) return {0.0};
      std::vector<double> d(c.size() - 1);
      for (size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
      return d;
    }
  };

  FunctionHandle h = Builder::plain(coeffs);
  auto a1c = Builder::integrated(coeffs);
  FunctionHandle a1 = Builder::plain(a1c);
  a1.antiderivative =
      std::make_shared<const FunctionHandle>(Builder::plain(Builder::integrated(a1c)));
  h.antiderivative = std::make_shared<const FunctionHandle>(std::move(a1));
  h.derivative =
      std::make_shared<const FunctionHandle>(Builder::plain(Builder::differentiated(coeffs)));
  return h;
}

FunctionHandle compress_to_half(const FunctionHandle& f) {
  if (!f.valid()) throw std::invalid_argument("compress_to_half: empty function");
  FunctionHandle v;
  {
    auto fe = f.evaluator;
    v.evaluator = [fe](double u) { return u < 0.5 ? fe(2.0 * u) : 0.0; };
  }
  for (double b : f.breakpoints) v.breakpoints.push_back(0.5 * b);
  v.breakpoints.push_back(0.5);
  v.breakpoints = normalize_breakpoints(std::move(v.breakpoints));
  v.max_frequency = 2.0 * f.max_frequency;
  v.support_lo = 0.5 * f.support_lo;
  v.support_hi = 0.5 * f.support_hi;

  if (f.antiderivative && f.antiderivative->valid()) {
    const auto A = f.antiderivative;  // A(u) = int_0^u f
    FunctionHandle va;
    const double a1 = A->evaluator(1.0);
    {
      auto ae = A->evaluator;
      va.evaluator = [ae, a1](double u) {
        return u < 0.5 ? 0.5 * ae(2.0 * u) : 0.5 * a1;
      };
    }
    va.breakpoints = v.breakpoints;
    va.max_frequency = v.max_frequency;
    v.antiderivative = std::make_shared<const FunctionHandle>(std::move(va));
  }
  if (f.derivative && f.derivative->valid()) {
    const auto D = f.derivative;
    FunctionHandle vd;
    {
      auto de = D->evaluator;
      vd.evaluator = [de](double u) { return u < 0.5 ? 2.0 * de(2.0 * u) : 0.0; };
    }
    vd.breakpoints = v.breakpoints;
    vd.max_frequency = v.max_frequency;
    vd.support_lo = v.support_lo;
    vd.support_hi = v.support_hi;
    v.derivative = std::make_shared<const FunctionHandle>(std::move(vd));
  }
  return v;
}

namespace {

FunctionHandle make_one() {
  FunctionHandle h = polynomial({1.0});
  return h;
}

FunctionHandle make_identity() { return polynomial({0.0, 1.0}); }

// f(u) = 1 - cos(4 pi (u - 1/2)); smooth, f(0) = f(1) = 0, mean 1.
FunctionHandle make_cos4pi_shifted() {
  const double w = 4.0 * M_PI;
  FunctionHandle h;
  h.evaluator = [w](double u) { return 1.0 - std::cos(w * (u - 0.5)); };
  h.max_frequency = 2.0;

  FunctionHandle a;  // int_0^u f = u - (sin(w(u-1/2)) + sin(w/2)) / w
  a.evaluator = [w](double u) {
    return u - (std::sin(w * (u - 0.5)) - std::sin(-0.5 * w)) / w;
  };
  a.max_frequency = 2.0;
  FunctionHandle a2;  // second antiderivative, for prefix-of-prefix chains
  a2.evaluator = [w](double u) {
    return 0.5 * u * u +
           (std::cos(w * (u - 0.5)) - std::cos(-0.5 * w)) / (w * w) +
           u * std::sin(-0.5 * w) / w;
  };
  a2.max_frequency = 2.0;
  a.antiderivative = std::make_shared<const FunctionHandle>(std::move(a2));
  h.antiderivative = std::make_shared<const FunctionHandle>(std::move(a));

  FunctionHandle d;
  d.evaluator = [w](double u) { return w * std::sin(w * (u - 0.5)); };
  d.max_frequency = 2.0;
  h.derivative = std::make_shared<const FunctionHandle>(std::move(d));
  return h;
}

std::vector<double> parse_coeff_list(const std::string& body) {
  std::vector<double> c;
  size_t pos = 0;
  while (pos <= body.size()) {
    size_t comma = body.find(',', pos);
    std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos
                                                                  : comma - pos);
    if (tok.empty()) throw std::invalid_argument("make_named: empty coefficient");
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw std::invalid_argument("make_named: bad coefficient '" + tok + "'");
    c.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (c.empty()) throw std::invalid_argument("make_named: no coefficients");
  return c;
}

}  // namespace

FunctionHandle make_named(const std::string& name) {
  if (name == "one") return make_one();
  if (name == "identity") return make_identity();
  if (name == "cos4pi_shifted") return make_cos4pi_shifted();
  if (name == "gamma_compressed") return compress_to_half(make_cos4pi_shifted());
  if (name.rfind("poly:", 0) == 0) return polynomial(parse_coeff_list(name.substr(5)));
  if (name.rfind("polynomial:", 0) == 0)
    return polynomial(parse_coeff_list(name.substr(11)));
  throw std::invalid_argument("make_named: unknown function '" + name + "'");
}

}  // namespace onsum
