#include "odlinbai/bandit.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace odlinbai {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

LinearBanditInstance::LinearBanditInstance(ArmSet arms, Vector theta, double noise_std,
                                           std::vector<std::string> labels)
    : arms_(std::move(arms)),
      theta_(std::move(theta)),
      noise_std_(noise_std),
      labels_(std::move(labels)) {
  if (arms_.empty()) throw Error("instance has no arms");
  if (static_cast<std::size_t>(theta_.size()) != arms_.dim()) {
    throw Error("theta has dimension " + std::to_string(theta_.size()) + " but arms have " +
                std::to_string(arms_.dim()));
  }
  if (!(noise_std_ >= 0.0) || !std::isfinite(noise_std_)) {
    throw Error("noise_std must be finite and nonnegative");
  }
  if (!labels_.empty() && labels_.size() != arms_.size()) {
    throw Error("label count does not match arm count");
  }
  rewards_ = arms_.matrix() * theta_;
  if (!rewards_.allFinite()) throw Error("expected rewards must be finite");

  Eigen::Index best = 0;
  const double top = rewards_.maxCoeff(&best);
  best_ = static_cast<ArmIndex>(best);
  for (Eigen::Index i = 0; i < rewards_.size(); ++i) {
    if (i != best && top - rewards_(i) <= kTieTolerance) {
      throw Error("best arm is not unique (arms " + std::to_string(best) + " and " +
                  std::to_string(i) + ")");
    }
  }
}

LinearBanditInstance LinearBanditInstance::with_noise(double noise_std) const {
  return LinearBanditInstance(arms_, theta_, noise_std, labels_);
}

void PullLog::record(ArmIndex arm, double reward) {
  arm_indices.push_back(arm);
  rewards.push_back(reward);
}

double pull(const LinearBanditInstance& instance, ArmIndex arm, Rng& rng) {
  if (arm >= instance.num_arms()) {
    throw Error("arm index " + std::to_string(arm) + " out of range");
  }
  const double mean = instance.expected_rewards()(static_cast<Eigen::Index>(arm));
  if (instance.noise_std() == 0.0) return mean;
  std::normal_distribution<double> normal(0.0, 1.0);
  return mean + instance.noise_std() * normal(rng);
}

Vector ols_estimate(const ArmSet& arms, const std::vector<std::size_t>& counts,
                    const std::vector<double>& reward_sums) {
  if (counts.size() != arms.size() || reward_sums.size() != arms.size()) {
    throw Error("counts and reward sums must have one entry per arm");
  }
  const auto d = static_cast<Eigen::Index>(arms.dim());
  Matrix v = Matrix::Zero(d, d);
  Vector b = Vector::Zero(d);
  for (std::size_t i = 0; i < arms.size(); ++i) {
    if (counts[i] == 0) continue;
    const Vector a = arms.arm(i);
    v.noalias() += static_cast<double>(counts[i]) * a * a.transpose();
    b.noalias() += reward_sums[i] * a;
  }
  Eigen::LLT<Matrix> llt(v);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-13)) {
    throw RankDeficientError("estimator underdetermined");
  }
  return llt.solve(b);
}

Vector ols_estimate(const ArmSet& arms, const PullLog& log) {
  if (log.arm_indices.size() != log.rewards.size()) {
    throw Error("pull log has mismatched lengths");
  }
  std::vector<std::size_t> counts(arms.size(), 0);
  std::vector<double> sums(arms.size(), 0.0);
  for (std::size_t t = 0; t < log.size(); ++t) {
    const ArmIndex i = log.arm_indices[t];
    if (i >= arms.size()) throw Error("pull log references arm " + std::to_string(i));
    if (!std::isfinite(log.rewards[t])) throw Error("pull log has a non-finite reward");
    ++counts[i];
    sums[i] += log.rewards[t];
  }
  return ols_estimate(arms, counts, sums);
}

std::vector<ArmIndex> reward_order(const LinearBanditInstance& instance) {
  const Vector& p = instance.expected_rewards();
  std::vector<ArmIndex> order(instance.num_arms());
  std::iota(order.begin(), order.end(), ArmIndex{0});
  std::stable_sort(order.begin(), order.end(), [&](ArmIndex a, ArmIndex b) {
    return p(static_cast<Eigen::Index>(a)) > p(static_cast<Eigen::Index>(b));
  });
  return order;
}

Vector gaps(const LinearBanditInstance& instance) {
  const auto k = instance.num_arms();
  if (k < 2) throw Error("gaps need at least two arms");
  const Vector& p = instance.expected_rewards();
  const auto order = reward_order(instance);
  const double top = p(static_cast<Eigen::Index>(order[0]));
  Vector out(static_cast<Eigen::Index>(k));
  for (std::size_t r = 1; r < k; ++r) {
    out(static_cast<Eigen::Index>(r)) = top - p(static_cast<Eigen::Index>(order[r]));
  }
  out(0) = out(1);
  return out;
}

}  // namespace odlinbai
