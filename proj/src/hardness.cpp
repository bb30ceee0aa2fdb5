#include "odlinbai/hardness.hpp"

#include <algorithm>
#include <cmath>

namespace odlinbai::hardness {

std::size_t ceil_log2(std::size_t n) {
  if (n == 0) throw Error("ceil_log2 of zero");
  std::size_t r = 0;
  std::size_t p = 1;
  while (p < n) {
    p <<= 1;
    ++r;
  }
  return r;
}

double compute_m(std::uint64_t budget, std::size_t num_arms, std::size_t dim) {
  if (budget == 0 || num_arms == 0 || dim == 0) {
    throw Error("budget, arm count and dimension must be positive");
  }
  if (dim < 2) throw Error("dimension must be at least 2");
  if (num_arms < dim) throw Error("arm count must be at least the dimension");

  const std::size_t phases = ceil_log2(dim);
  double spent = static_cast<double>(std::min(num_arms, dim * (dim + 1) / 2));
  for (std::size_t r = 1; r + 1 <= phases; ++r) {
    const std::size_t denom = std::size_t{1} << r;
    spent += static_cast<double>((dim + denom - 1) / denom);
  }
  const double m = (static_cast<double>(budget) - spent) / static_cast<double>(phases);
  if (!(m > 0.0)) {
    throw BudgetTooSmallError("budget too small: T = " + std::to_string(budget) +
                              " leaves m = " + std::to_string(m));
  }
  return m;
}

HardnessProfile hardness_profile(const Vector& gaps, std::size_t dim) {
  const auto k = static_cast<std::size_t>(gaps.size());
  if (k < 2) throw Error("need at least two gaps");
  if (dim < 1 || dim > k) throw Error("dimension must lie in [1, K]");
  for (std::size_t i = 0; i < k; ++i) {
    if (!(gaps(static_cast<Eigen::Index>(i)) > 0.0)) {
      throw Error("zero gap: best arm is not unique");
    }
  }
  for (std::size_t i = 2; i < k; ++i) {
    if (gaps(static_cast<Eigen::Index>(i)) < gaps(static_cast<Eigen::Index>(i - 1))) {
      throw Error("gaps must be sorted non-decreasingly");
    }
  }

  HardnessProfile h;
  for (std::size_t i = 1; i <= k; ++i) {
    const double inv_sq = 1.0 / std::pow(gaps(static_cast<Eigen::Index>(i - 1)), 2);
    h.h1 += inv_sq;
    if (i <= dim) h.h1_lin += inv_sq;
    if (i >= 2) {
      const double weighted = static_cast<double>(i) * inv_sq;
      h.h2 = std::max(h.h2, weighted);
      if (i <= dim) h.h2_lin = std::max(h.h2_lin, weighted);
    }
  }
  if (dim < 2) h.h2_lin = 0.0;
  return h;
}

double theorem2_bound(std::uint64_t budget, std::size_t num_arms, std::size_t dim,
                      double h2_lin) {
  if (!(h2_lin > 0.0)) throw Error("H2_lin must be positive");
  const double m = compute_m(budget, num_arms, dim);
  const double prefactor = 4.0 * static_cast<double>(num_arms) / static_cast<double>(dim) +
                           3.0 * std::log2(static_cast<double>(dim));
  return prefactor * std::exp(-m / (32.0 * h2_lin));
}

LowerBoundExponents lower_bound_exponents(double budget, double a, double h1_lin,
                                          std::size_t dim) {
  if (!(budget > 0.0) || !(a > 0.0) || !(h1_lin > 0.0) || dim < 2) {
    throw Error("lower-bound inputs must be positive with d >= 2");
  }
  const double d = static_cast<double>(dim);
  LowerBoundExponents out;
  out.log_known_complexity = -240.0 * budget / a - std::log(6.0);
  out.log_unknown_complexity = -2700.0 * budget / (h1_lin * std::log2(d)) - std::log(6.0);
  out.known_complexity = std::exp(out.log_known_complexity);
  out.unknown_complexity = std::exp(out.log_unknown_complexity);
  out.budget_premise = budget >= a * a * std::log(6.0 * budget * d) / 900.0;
  out.complexity_premise = a >= 15.0 * d * d;
  return out;
}

}  // namespace odlinbai::hardness
