#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "onsum/function_handle.hpp"
#include "onsum/piecewise_poly.hpp"
#include "onsum/quadrature.hpp"

namespace onsum {

/// What a system promises about its elements.  `*_from` fields give the first
/// index for which the property is claimed (0 = no claim); built-in step
/// systems have a constant first element, hence claims from k = 2.
struct Guarantees {
  bool orthonormal = false;
  int zero_mean_from = 0;
  int zero_first_moment_from = 0;
};

/// Structural tag the kernel layer keys its fast summation paths on.
/// trig_cosine means element k is exactly sqrt(2) cos(2 pi k u); piecewise
/// means element_poly(k) is authoritative.  generic systems only promise
/// element(k).
enum class ElementForm { generic, trig_cosine, piecewise };

class OrthonormalSystem {
 public:
  static constexpr int kUnbounded = std::numeric_limits<int>::max();

  OrthonormalSystem() = default;
  OrthonormalSystem(std::string name, int max_index, Guarantees g, ElementForm form,
                    std::function<FunctionHandle(int)> gen,
                    std::function<PiecewisePoly(int)> poly_gen = {});

  const std::string& name() const { return name_; }
  int max_index() const { return max_index_; }
  const Guarantees& guarantees() const { return guarantees_; }
  ElementForm form() const { return form_; }

  /// 1-based element access; throws std::out_of_range past max_index.
  FunctionHandle element(int k) const;

  /// Exact piecewise representation; only for form() == piecewise.
  PiecewisePoly element_poly(int k) const;

 private:
  std::string name_;
  int max_index_ = 0;
  Guarantees guarantees_;
  ElementForm form_ = ElementForm::generic;
  std::function<FunctionHandle(int)> gen_;
  std::function<PiecewisePoly(int)> poly_gen_;
};

/// sqrt(2) cos(2 pi k u), k = 1, 2, ...  Zero mean and zero first moment for
/// every k; elements carry two exact antiderivative levels.
OrthonormalSystem system_cosine();

/// Haar: constant first element, then dyadic steps +-2^{s/2} at scale s.
OrthonormalSystem system_haar();

/// Walsh (Paley order): products of Rademacher functions, values +-1.
OrthonormalSystem system_walsh();

/// T(phi)(u) = phi(2u) on [0,1/2), -phi(2(u-1/2)) on [1/2,1].  Preserves
/// orthonormality and always produces zero-mean elements; the first moment of
/// T(phi) is -(1/4) int phi, so the zero-first-moment claim is inherited from
/// the base's zero-mean claim.
OrthonormalSystem compress_reflect(const OrthonormalSystem& base);

/// Seeded Gram-Schmidt on random step vectors over a uniform dyadic grid.
/// granularity must be a power of two, 1 <= count <= granularity; degenerate
/// draws (projected norm < 1e-8) are redrawn at most 16 times.
OrthonormalSystem gram_schmidt_random(std::uint64_t seed, int count, int granularity);

/// Step system from CSV rows "k,u,value": value on the cell starting at u,
/// cells per k must start at 0 and be strictly increasing; last cell runs to 1.
OrthonormalSystem load_system_csv(const std::string& path, Guarantees declared = {});

struct MomentRow {
  int k = 0;
  double mean = 0.0;
  double first_moment = 0.0;
  double max_pair_deviation = 0.0;  // worst |<phi_j, phi_k> - delta_jk| over j <= horizon
};

struct MomentReport {
  std::string system;
  int horizon = 0;
  double tol = 0.0;
  std::vector<MomentRow> rows;
  double worst_orthonormality = 0.0;
  double worst_mean = 0.0;          // over indices covered by the claim
  double worst_first_moment = 0.0;
  bool orthonormal_ok = true;       // vacuously true when not claimed
  bool zero_mean_ok = true;
  bool zero_first_moment_ok = true;
  bool passed() const {
    return orthonormal_ok && zero_mean_ok && zero_first_moment_ok;
  }
};

/// Measures pairwise inner products and both moments up to `horizon` by pure
/// quadrature and checks them against the system's declared guarantees.
MomentReport validate(const OrthonormalSystem& S, int horizon, double tol,
                      const QuadratureSpec& spec = {});

}  // namespace onsum
