#include "onsum/piecewise_poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "onsum/quadrature.hpp"

namespace onsum {

namespace {

double poly_eval(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (size_t i = c.size(); i-- > 0;) v = v * t + c[i];
  return v;
}

bool poly_is_zero(const std::vector<double>& c) {
  for (double a : c)
    if (a != 0.0) return false;
  return true;
}

}  // namespace

PiecewisePoly::PiecewisePoly(std::vector<double> knots,
                             std::vector<std::vector<double>> cells)
    : knots_(std::move(knots)), cells_(std::move(cells)) {
  if (knots_.size() != cells_.size() + 1 || cells_.empty())
    throw std::invalid_argument("PiecewisePoly: knot/cell count mismatch");
  if (knots_.front() != 0.0 || knots_.back() != 1.0)
    throw std::invalid_argument("PiecewisePoly: knots must span [0,1]");
  for (size_t i = 0; i + 1 < knots_.size(); ++i)
    if (!(knots_[i] < knots_[i + 1]))
      throw std::invalid_argument("PiecewisePoly: knots not increasing");
  const int m = cell_count();
  uniform_ = true;
  for (int c = 0; c <= m; ++c) {
    if (knots_[c] != static_cast<double>(c) / m) {
      uniform_ = false;
      break;
    }
  }
}

PiecewisePoly PiecewisePoly::steps(std::vector<double> knots,
                                   std::vector<double> values) {
  std::vector<std::vector<double>> cells(values.size());
  for (size_t i = 0; i < values.size(); ++i) cells[i] = {values[i]};
  return PiecewisePoly(std::move(knots), std::move(cells));
}

PiecewisePoly PiecewisePoly::uniform_steps(std::vector<double> values) {
  const int m = static_cast<int>(values.size());
  std::vector<double> knots(m + 1);
  for (int c = 0; c <= m; ++c) knots[c] = static_cast<double>(c) / m;
  return steps(std::move(knots), std::move(values));
}

int PiecewisePoly::cell_index(double u) const {
  const int m = cell_count();
  if (u >= 1.0) return m - 1;  // left limit at 1
  if (u <= 0.0) return 0;
  if (uniform_) {
    int c = static_cast<int>(u * m);
    if (c >= m) c = m - 1;
    // guard against u*m rounding across a knot for non-dyadic m
    if (u < knots_[c]) --c;
    if (u >= knots_[c + 1]) ++c;
    return c;
  }
  auto it = std::upper_bound(knots_.begin(), knots_.end(), u);
  return static_cast<int>(it - knots_.begin()) - 1;
}

double PiecewisePoly::value(double u) const {
  const int c = cell_index(u);
  return poly_eval(cells_[c], u - knots_[c]);
}

PiecewisePoly PiecewisePoly::antiderivative() const {
  std::vector<std::vector<double>> out(cells_.size());
  KahanSum offset;
  for (size_t c = 0; c < cells_.size(); ++c) {
    const auto& p = cells_[c];
    std::vector<double> q(p.size() + 1);
    q[0] = offset.value();
    for (size_t i = 0; i < p.size(); ++i) q[i + 1] = p[i] / static_cast<double>(i + 1);
    out[c] = std::move(q);
    const double w = knots_[c + 1] - knots_[c];
    // increment = int over this cell = q(w) - q(0)
    double inc = 0.0;
    for (size_t i = out[c].size(); i-- > 1;) inc = (inc + out[c][i]) * w;
    offset.add(inc);
  }
  return PiecewisePoly(knots_, std::move(out));
}

void PiecewisePoly::support(double* lo, double* hi) const {
  int first = -1, last = -1;
  for (int c = 0; c < cell_count(); ++c) {
    if (!poly_is_zero(cells_[c])) {
      if (first < 0) first = c;
      last = c;
    }
  }
  if (first < 0) {
    *lo = 0.0;
    *hi = 0.0;
  } else {
    *lo = knots_[first];
    *hi = knots_[last + 1];
  }
}

double PiecewisePoly::sample_sup() const {
  double s = 0.0;
  for (int c = 0; c < cell_count(); ++c) {
    const double w = knots_[c + 1] - knots_[c];
    for (double t : {0.0, 0.5 * w, w})
      s = std::max(s, std::abs(poly_eval(cells_[c], t)));
  }
  return s;
}

FunctionHandle PiecewisePoly::to_handle(int antiderivative_levels) const {
  auto pp = std::make_shared<const PiecewisePoly>(*this);
  FunctionHandle h;
  h.evaluator = [pp](double u) { return pp->value(u); };
  h.breakpoints.assign(knots_.begin() + 1, knots_.end() - 1);
  support(&h.support_lo, &h.support_hi);
  if (antiderivative_levels > 0) {
    auto anti = antiderivative().to_handle(antiderivative_levels - 1);
    h.antiderivative = std::make_shared<const FunctionHandle>(std::move(anti));
  }
  return h;
}

}  // namespace onsum
