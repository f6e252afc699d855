#pragma once

namespace onsum {
namespace thresholds {

// Regression constants for the built-in systems, pinned from the committed
// pilot sweep (see tests for the exact configurations).  Sweeps with
// enforcement on check against these; exploratory systems only report.

// max_n H_n(x) caps, 11-point x grid, alpha in {0.5, 1, 2}, n <= 512.
inline constexpr double kHnCapCosine = 0.25;
inline constexpr double kHnCapHaar = 1.00;

// cap on c_n = H_n(x0) - |U_n(r_n)|, the gap between the diagnostic and the
// extremal witness, n <= 256.
inline constexpr double kCnCap = 1.50;

// The extremal function is 1-Lipschitz with |r| <= 1 by construction.
inline constexpr double kLipNormCap = 2.0;

// quadrature-noise floor for the per-cell kernel mass bound slack
inline constexpr double kSlackFloor = -1e-9;

// phi_sq_ratio <= coef * n^{-1/2}; cosine satisfies coef = 2 for every x
// (the ratio is at most 2/n), the step systems are checked at sampled x.
inline constexpr double kPhiSqRatioCoefCosine = 2.0;
inline constexpr double kPhiSqRatioCoefHaar = 2.2;
inline constexpr double kPhiSqRatioCoefWalsh = 1.1;

// sup_n |sigma_n^alpha(x, f)| caps over the smooth catalog functions used by
// the sigma sweep, n <= 512.
inline constexpr double kSigmaSupCosine = 2.5;
inline constexpr double kSigmaSupHaar = 2.5;

// finite-difference Lipschitz bound for the derivative of the compressed
// catalog function (true second-derivative sup is 64 pi^2 ~ 631.7)
inline constexpr double kGammaPrimeLip = 640.0;

// pinned envelope for A_n^alpha / n^alpha, n <= 1e4 (tends to 1/Gamma(1+alpha))
struct AlphaRange {
  double alpha;
  double lo;
  double hi;
};
inline constexpr AlphaRange kCesaroRanges[] = {
    {0.5, 1.10, 1.55},
    {1.0, 0.98, 2.05},
    {2.0, 0.49, 3.05},
};

}  // namespace thresholds
}  // namespace onsum
