#pragma once

#include "odlinbai/types.hpp"

#include <random>
#include <string>
#include <vector>

namespace odlinbai {

/// Per-trial random stream. Seeded once; never shared between trials.
using Rng = std::mt19937_64;

Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Arms, hidden parameter theta*, and Gaussian reward noise of scale noise_std.
/// Immutable after construction; the best arm must be unique.
class LinearBanditInstance {
 public:
  static constexpr double kTieTolerance = 1e-12;

  LinearBanditInstance(ArmSet arms, Vector theta, double noise_std = 1.0,
                       std::vector<std::string> labels = {});

  const ArmSet& arms() const { return arms_; }
  const Vector& theta() const { return theta_; }
  double noise_std() const { return noise_std_; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::size_t num_arms() const { return arms_.size(); }
  std::size_t dim() const { return arms_.dim(); }

  /// p(i) = <theta*, a(i)>.
  const Vector& expected_rewards() const { return rewards_; }
  ArmIndex best_arm() const { return best_; }

  LinearBanditInstance with_noise(double noise_std) const;

 private:
  ArmSet arms_;
  Vector theta_;
  double noise_std_;
  std::vector<std::string> labels_;
  Vector rewards_;
  ArmIndex best_ = 0;
};

struct PullLog {
  std::vector<ArmIndex> arm_indices;
  std::vector<double> rewards;

  std::size_t size() const { return arm_indices.size(); }
  void record(ArmIndex arm, double reward);
};

/// <theta*, a(arm)> + noise_std * Z with Z ~ N(0, 1) drawn from rng.
double pull(const LinearBanditInstance& instance, ArmIndex arm, Rng& rng);

/// theta_hat = V^-1 sum_t a(A_t) X_t with V = sum_t a(A_t) a(A_t)^T, where
/// log.arm_indices index rows of `arms`. Throws RankDeficientError
/// ("estimator underdetermined") if V is singular.
Vector ols_estimate(const ArmSet& arms, const PullLog& log);

/// Same estimator from per-arm pull counts and reward sums.
Vector ols_estimate(const ArmSet& arms, const std::vector<std::size_t>& counts,
                    const std::vector<double>& reward_sums);

/// Gaps indexed by reward rank: entry 0 is Delta_1 (set equal to Delta_2),
/// entry i >= 1 is p(best) - p(i-th best arm). Sorted non-decreasingly.
Vector gaps(const LinearBanditInstance& instance);

/// Arm indices sorted by expected reward, best first (ties: smaller index).
std::vector<ArmIndex> reward_order(const LinearBanditInstance& instance);

}  // namespace odlinbai
