#pragma once

#include "odlinbai/bandit.hpp"
#include "odlinbai/design.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace odlinbai {

/// One elimination phase. Per-arm vectors are aligned with `active`.
struct PhaseRecord {
  std::size_t phase = 0;               // 1-based
  std::vector<ArmIndex> active;        // arms alive when the phase starts
  std::size_t reduced_dim = 0;         // d_r
  Vector weights;                      // design (or uniform) weights
  std::vector<std::size_t> counts;     // pulls per active arm
  Vector estimate;                     // OLS / posterior parameter estimate
  Vector estimated_rewards;            // p_hat per active arm
  std::vector<bool> eliminated;
  std::size_t start_time = 0;          // 0-based index of the phase's first pull
  std::size_t pulls = 0;
  PullLog log;                         // rewards observed in this phase only
};

struct RunTrace {
  std::string algorithm;
  std::vector<PhaseRecord> phases;
  ArmIndex output_arm = 0;
  std::size_t total_pulls = 0;
  double m = 0.0;                      // OD-LinBAI phase budget
  std::size_t dim = 0;                 // effective dimension at the start
  std::optional<double> h1_used;       // BayesGap oracle hardness
  std::vector<double> exploration;     // BayesGap beta per adaptive step
};

struct RunResult {
  ArmIndex output_arm = 0;
  RunTrace trace;
};

struct AllocationPlan {
  std::vector<std::size_t> counts;
  std::size_t total = 0;
};

/// counts_i = ceil(weight_i * m) for weight_i > 0, else 0. Products within
/// 1e-9 above an integer are treated as that integer.
AllocationPlan allocation_from_design(const Vector& weights, double m);

struct OdLinBaiOptions {
  double eps = design::kDefaultEps;
  bool record_pulls = true;
};

/// Optimal-design phased elimination: ceil(log2 d) phases, each solving a
/// G-optimal design on the dimensionality-reduced active arms, pulling
/// ceil(pi(a) m) times, and keeping the ceil(d/2^r) arms with the largest
/// phase-local OLS estimates.
RunResult run_od_linbai(const LinearBanditInstance& instance, std::uint64_t budget, Rng& rng,
                        const OdLinBaiOptions& options = {});

/// Sequential Halving treating arms as independent: ceil(log2 K) phases, each
/// surviving arm pulled floor(T / (|S_r| ceil(log2 K))) times, top half kept
/// by phase-local means. When that count is 0 each arm is pulled once while the
/// remaining budget allows, after which survivors are ranked by their means
/// over all earlier pulls. Throws BudgetTooSmallError when T < K.
RunResult run_sequential_halving(const LinearBanditInstance& instance, std::uint64_t budget,
                                 Rng& rng, bool record_pulls = true);

enum class BayesGapMode { Oracle, Adaptive };

struct BayesGapOptions {
  BayesGapMode mode = BayesGapMode::Adaptive;
  double prior_scale = 1e6;           // eta: prior theta ~ N(0, eta^2 I)
  std::optional<double> noise_std;    // defaults to the instance's noise level
  std::optional<double> h1;           // oracle hardness; defaults to the instance's H1
  double tolerance = 0.0;             // epsilon of the gap indices
  bool record_pulls = true;
};

/// BayesGap gap-based exploration. After one pull per arm, at each step t:
///   posterior   Sigma = sigma^2 (X^T X + (sigma/eta)^2 I)^-1, mu_k = a_k^T theta_hat,
///               s_k = sqrt(a_k^T Sigma a_k)
///   bounds      U_k = mu_k + beta s_k,  L_k = mu_k - beta s_k
///   gap index   B_k = max_{j != k} U_j - L_k
///   candidates  J = argmin_k B_k,  j = argmax_{k != J} U_k; pull the one with larger s
///   beta        sqrt((T - K) / (4 H_eps)),  H_eps = sum_k max((Delta_k + eps)/2, eps)^-2
/// Oracle mode takes Delta_k from the instance. Adaptive mode re-estimates
/// them every step by the three-sigma rule
///   Delta_k ~ |max_{j != k}(mu_j + 3 s_j) - (mu_k - 3 s_k)|.
/// The recommendation is J at the step with the smallest B_J.
RunResult run_bayesgap(const LinearBanditInstance& instance, std::uint64_t budget,
                       const BayesGapOptions& options, Rng& rng);

enum class Algorithm { OdLinBai, SequentialHalving, BayesGapOracle, BayesGapAdaptive };

std::string_view algorithm_name(Algorithm algo);
Algorithm parse_algorithm(std::string_view name);
const std::vector<Algorithm>& all_algorithms();

RunResult run_algorithm(Algorithm algo, const LinearBanditInstance& instance,
                        std::uint64_t budget, Rng& rng, double eps = design::kDefaultEps,
                        bool record_pulls = true);

}  // namespace odlinbai
