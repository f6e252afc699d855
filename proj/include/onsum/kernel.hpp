#pragma once

#include <memory>
#include <string>
#include <vector>

#include "onsum/cesaro.hpp"
#include "onsum/quadrature.hpp"
#include "onsum/systems.hpp"

namespace onsum {

/// One (n, alpha, x) view of the Cesaro kernel Q_n(u, x) = sum_{k=1}^n
/// w_{n,k} g_k(u) phi_k(x), where g_k = int_0^u phi_k.  `q` evaluates the
/// kernel in u; `prefix` evaluates y -> int_0^y Q_n through the exact
/// antiderivatives G_k when the system provides them.
struct KernelSlice {
  std::string system;
  int n = 0;
  double alpha = 0.0;
  double x = 0.0;
  FunctionHandle q;
  FunctionHandle prefix;
  std::vector<double> weights;   // w_{n,1} .. w_{n,n}
  std::vector<double> phi_at_x;  // phi_1(x) .. phi_n(x)
  double phi_sq_sum = 0.0;       // sum_k phi_k(x)^2
};

/// Caches per-element data (phi_k, g_k, G_k in the cheapest available form)
/// for every k <= n_max so a sweep over many (n, alpha, x) does the element
/// work once.  Slices from one workspace share that cache.
class KernelWorkspace {
 public:
  KernelWorkspace(OrthonormalSystem S, int n_max, QuadratureSpec spec = {});
  KernelSlice slice(int n, double alpha, double x) const;
  const OrthonormalSystem& system() const { return sys_; }
  int n_max() const { return n_max_; }

  // per-element cache; defined in kernel.cpp and shared with the slice
  // evaluator closures, hence visible to them
  struct Cache;

 private:
  OrthonormalSystem sys_;
  int n_max_ = 0;
  QuadratureSpec spec_;
  std::shared_ptr<const Cache> cache_;
};

/// One-shot slice without a reusable workspace.
KernelSlice kernel_slice(const OrthonormalSystem& S, int n, double alpha, double x,
                         const QuadratureSpec& spec = {});

/// H_n(x) = (1/n) sum_{i=1}^{n-1} |prefix(i/n)|.  Zero for n = 1.
double h_diagnostic(const KernelSlice& slice);

/// (1/n^2) sum_{k<=n} phi_k(x)^2; decays like 1/n for uniformly bounded
/// systems and is the square of the per-cell kernel mass bound.
double phi_sq_ratio(const OrthonormalSystem& S, int n, double x);
double phi_sq_ratio(const KernelSlice& slice);

/// Worst slack, over cells i = 1..n, of the bound
///   int_{(i-1)/n}^{i/n} |Q_n| du  <=  sqrt(phi_sq_ratio) .
/// Nonnegative (up to quadrature noise) for any orthonormal system.
double cell_mass_slack(const KernelSlice& slice, const QuadratureSpec& spec = {});

/// Piecewise-linear r(u) = int_0^u sign(prefix(y)) dy with sign(0) = +1.
/// Zeros of the prefix are bracketed on an 8n-point grid and bisected to
/// 1e-12; slopes are the prefix sign between consecutive zeros.
struct ExtremalFunction {
  std::vector<double> zeros;  // sign-change abscissae in (0,1)
  std::vector<int> slopes;    // +-1 per segment, zeros.size()+1 entries
  FunctionHandle r;
};
ExtremalFunction extremal_function(const KernelSlice& slice);

/// Indices i in {1..n-1} whose cell [i/n, (i+1)/n) contains a prefix sign
/// change; derived from the same located abscissae as extremal_function.
std::vector<int> sign_change_set(const KernelSlice& slice);

/// U_n(f) = int_0^1 f Q_n du.
double u_functional(const FunctionHandle& f, const KernelSlice& slice,
                    const QuadratureSpec& spec = {});

/// The three prefix-based terms of int_0^1 fprime * Q_n du, evaluated through
/// the slice's exact prefix: the difference-in-fprime sum against prefix
/// values, the cell-mean residual term against q, and the last-cell boundary term.
/// Matches parts_identity_mean(fprime, q, n) term by term.
struct KernelTerms {
  double shift_term = 0.0;     // n sum_{i<n} int_cell (f'(u) - f'(u+1/n)) du * prefix(i/n)
  double cellmean_term = 0.0;  // sum_i int_cell (f'(u) - mean_i(f')) q(u) du
  double boundary_term = 0.0;  // n int_{1-1/n}^1 f' du * prefix(1)
  double total() const { return shift_term + cellmean_term + boundary_term; }
};
KernelTerms kernel_terms(const FunctionHandle& fprime, const KernelSlice& slice,
                         const QuadratureSpec& spec = {});

/// One row of a kernel sweep report.
struct DiagnosticRow {
  int n = 0;
  double alpha = 0.0;
  double x = 0.0;
  double h_value = 0.0;
  double phi_sq_ratio = 0.0;
  double cell_mass_slack = 0.0;
  double prefix_at_1 = 0.0;
};
DiagnosticRow diagnostic_row(const KernelSlice& slice, const QuadratureSpec& spec = {});

}  // namespace onsum
