#pragma once

#include "odlinbai/types.hpp"

#include <cstdint>

namespace odlinbai::hardness {

/// ceil(log2 n) for n >= 1.
std::size_t ceil_log2(std::size_t n);

/// Per-phase budget multiplier of OD-LinBAI:
///   m = (T - min(K, d(d+1)/2) - sum_{r=1}^{R-1} ceil(d / 2^r)) / R,  R = ceil(log2 d).
/// Kept as an exact real. Throws BudgetTooSmallError when m <= 0.
double compute_m(std::uint64_t budget, std::size_t num_arms, std::size_t dim);

struct HardnessProfile {
  double h1 = 0.0;      // sum_{1<=i<=K} Delta_i^-2
  double h2 = 0.0;      // max_{2<=i<=K} i Delta_i^-2
  double h1_lin = 0.0;  // sum_{1<=i<=d} Delta_i^-2
  double h2_lin = 0.0;  // max_{2<=i<=d} i Delta_i^-2
};

/// `gaps` must be rank-ordered with gaps[0] == gaps[1] (see odlinbai::gaps).
HardnessProfile hardness_profile(const Vector& gaps, std::size_t dim);

/// (4K/d + 3 log2 d) exp(-m / (32 H2_lin)). Values above one are returned as-is.
double theorem2_bound(std::uint64_t budget, std::size_t num_arms, std::size_t dim,
                      double h2_lin);

struct LowerBoundExponents {
  double known_complexity = 0.0;    // (1/6) exp(-240 T / a)
  double unknown_complexity = 0.0;  // (1/6) exp(-2700 T / (H1_lin log2 d))
  // Natural logs of the two values; finite even where the values underflow.
  double log_known_complexity = 0.0;
  double log_unknown_complexity = 0.0;
  bool budget_premise = false;      // T >= a^2 log(6 T d) / 900
  bool complexity_premise = false;  // a >= 15 d^2
};

/// Numeric evaluation of the minimax lower-bound expressions for the
/// instance class with H1_lin <= a.
LowerBoundExponents lower_bound_exponents(double budget, double a, double h1_lin,
                                          std::size_t dim);

}  // namespace odlinbai::hardness
