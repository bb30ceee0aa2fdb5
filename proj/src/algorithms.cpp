#include "odlinbai/algorithms.hpp"

#include "odlinbai/geometry.hpp"
#include "odlinbai/hardness.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace odlinbai {
namespace {

// Positions (into `values`) of the `keep` largest values; ties go to the
// smaller arm index. Returned in increasing position order.
std::vector<std::size_t> top_positions(const Vector& values, const std::vector<ArmIndex>& arms,
                                       std::size_t keep) {
  std::vector<std::size_t> pos(arms.size());
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  std::sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) {
    const double va = values(static_cast<Eigen::Index>(a));
    const double vb = values(static_cast<Eigen::Index>(b));
    if (va != vb) return va > vb;
    return arms[a] < arms[b];
  });
  pos.resize(std::min(keep, pos.size()));
  std::sort(pos.begin(), pos.end());
  return pos;
}

std::vector<bool> eliminated_flags(std::size_t n, const std::vector<std::size_t>& kept) {
  std::vector<bool> out(n, true);
  for (std::size_t p : kept) out[p] = false;
  return out;
}

// Pulls each active arm counts[i] times, in index order, consecutively.
void pull_block(const LinearBanditInstance& instance, const std::vector<ArmIndex>& active,
                const std::vector<std::size_t>& counts, Rng& rng, bool record,
                std::vector<double>& sums, PullLog& log) {
  sums.assign(active.size(), 0.0);
  for (std::size_t i = 0; i < active.size(); ++i) {
    for (std::size_t n = 0; n < counts[i]; ++n) {
      const double x = pull(instance, active[i], rng);
      sums[i] += x;
      if (record) log.record(active[i], x);
    }
  }
}

std::size_t ceil_div_pow2(std::size_t d, std::size_t r) {
  const std::size_t denom = std::size_t{1} << r;
  return (d + denom - 1) / denom;
}

}  // namespace

AllocationPlan allocation_from_design(const Vector& weights, double m) {
  if (!(m > 0.0)) throw BudgetTooSmallError("budget too small: m must be positive");
  AllocationPlan plan;
  plan.counts.resize(static_cast<std::size_t>(weights.size()), 0);
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    const double w = weights(i);
    if (w < 0.0 || !std::isfinite(w)) throw Error("design weights must be nonnegative");
    if (w == 0.0) continue;
    const double x = w * m;
    double c = std::ceil(x);
    if (c - x > 1.0 - 1e-9) c -= 1.0;
    plan.counts[static_cast<std::size_t>(i)] = static_cast<std::size_t>(std::max(c, 1.0));
    plan.total += plan.counts[static_cast<std::size_t>(i)];
  }
  return plan;
}

RunResult run_od_linbai(const LinearBanditInstance& instance, std::uint64_t budget, Rng& rng,
                        const OdLinBaiOptions& options) {
  const std::size_t k = instance.num_arms();
  const std::size_t d = geometry::effective_dimension(instance.arms());
  if (d < 2) throw Error("OD-LinBAI needs effective dimension at least 2");
  const double m = hardness::compute_m(budget, k, d);
  const std::size_t num_phases = hardness::ceil_log2(d);

  RunTrace trace;
  trace.algorithm = "odlinbai";
  trace.m = m;
  trace.dim = d;

  std::vector<ArmIndex> active(k);
  std::iota(active.begin(), active.end(), ArmIndex{0});
  ArmSet vectors = instance.arms();
  std::size_t prev_dim = instance.dim();
  std::size_t t = 0;

  for (std::size_t r = 1; r <= num_phases; ++r) {
    PhaseRecord rec;
    rec.phase = r;
    rec.active = active;
    rec.start_time = t;

    std::size_t dim_r = 0;
    try {
      dim_r = geometry::effective_dimension(vectors);
    } catch (const ZeroSpanError&) {
      dim_r = 0;
    }
    if (dim_r > 0 && dim_r != prev_dim) {
      vectors = geometry::reduce(vectors, geometry::orthonormal_basis(vectors));
    }
    rec.reduced_dim = dim_r;

    if (dim_r == 0) {
      // Every active arm is the zero vector: all rewards are identical and
      // no pull carries information.
      rec.weights = Vector::Zero(static_cast<Eigen::Index>(active.size()));
      rec.counts.assign(active.size(), 0);
      rec.estimate = Vector::Zero(0);
      rec.estimated_rewards = Vector::Zero(static_cast<Eigen::Index>(active.size()));
    } else {
      design::Design pi = design::solve_g_optimal(vectors, options.eps);
      if (r == 1 && pi.support_size() > design::max_support_bound(d)) {
        pi = design::prune_support(pi, vectors, design::max_support_bound(d), options.eps);
      }
      const AllocationPlan plan = allocation_from_design(pi.weights, m);
      std::vector<double> sums;
      pull_block(instance, active, plan.counts, rng, options.record_pulls, sums, rec.log);

      rec.weights = pi.weights;
      rec.counts = plan.counts;
      rec.pulls = plan.total;
      rec.estimate = ols_estimate(vectors, plan.counts, sums);
      rec.estimated_rewards = vectors.matrix() * rec.estimate;
    }

    const auto kept = top_positions(rec.estimated_rewards, active, ceil_div_pow2(d, r));
    rec.eliminated = eliminated_flags(active.size(), kept);

    std::vector<ArmIndex> next;
    next.reserve(kept.size());
    for (std::size_t p : kept) next.push_back(active[p]);
    vectors = vectors.subset(std::vector<ArmIndex>(kept.begin(), kept.end()));
    active = std::move(next);
    prev_dim = dim_r;
    t += rec.pulls;
    trace.phases.push_back(std::move(rec));
  }

  trace.output_arm = active.front();
  trace.total_pulls = t;
  return RunResult{trace.output_arm, std::move(trace)};
}

RunResult run_sequential_halving(const LinearBanditInstance& instance, std::uint64_t budget,
                                 Rng& rng, bool record_pulls) {
  const std::size_t k = instance.num_arms();
  RunTrace trace;
  trace.algorithm = "sh";
  trace.dim = instance.dim();

  std::vector<ArmIndex> active(k);
  std::iota(active.begin(), active.end(), ArmIndex{0});
  const std::size_t num_phases = hardness::ceil_log2(k);
  std::size_t t = 0;

  if (budget < k) {
    throw BudgetTooSmallError("budget too small for halving: T = " + std::to_string(budget) +
                              " < K = " + std::to_string(k));
  }
  // Running totals over all phases, used only once the budget is exhausted.
  std::vector<double> total_sum(k, 0.0);
  std::vector<std::size_t> total_count(k, 0);

  for (std::size_t r = 1; r <= num_phases; ++r) {
    std::uint64_t per_arm = budget / (active.size() * num_phases);
    const std::uint64_t remaining = budget - t;
    if (per_arm == 0) per_arm = 1;
    per_arm = std::min<std::uint64_t>(per_arm, remaining / active.size());

    PhaseRecord rec;
    rec.phase = r;
    rec.active = active;
    rec.start_time = t;
    rec.reduced_dim = instance.dim();
    rec.weights = Vector::Constant(static_cast<Eigen::Index>(active.size()),
                                   1.0 / static_cast<double>(active.size()));
    rec.counts.assign(active.size(), static_cast<std::size_t>(per_arm));
    rec.pulls = static_cast<std::size_t>(per_arm) * active.size();

    std::vector<double> sums(active.size(), 0.0);
    if (per_arm > 0) pull_block(instance, active, rec.counts, rng, record_pulls, sums, rec.log);
    rec.estimated_rewards = Vector(static_cast<Eigen::Index>(active.size()));
    for (std::size_t i = 0; i < active.size(); ++i) {
      total_sum[active[i]] += sums[i];
      total_count[active[i]] += static_cast<std::size_t>(per_arm);
      double est = 0.0;
      if (per_arm > 0) {
        est = sums[i] / static_cast<double>(per_arm);
      } else if (total_count[active[i]] > 0) {
        est = total_sum[active[i]] / static_cast<double>(total_count[active[i]]);
      }
      rec.estimated_rewards(static_cast<Eigen::Index>(i)) = est;
    }

    const auto kept = top_positions(rec.estimated_rewards, active, (active.size() + 1) / 2);
    rec.eliminated = eliminated_flags(active.size(), kept);
    std::vector<ArmIndex> next;
    for (std::size_t p : kept) next.push_back(active[p]);
    active = std::move(next);
    t += rec.pulls;
    trace.phases.push_back(std::move(rec));
  }

  trace.output_arm = active.front();
  trace.total_pulls = t;
  return RunResult{trace.output_arm, std::move(trace)};
}

RunResult run_bayesgap(const LinearBanditInstance& instance, std::uint64_t budget,
                       const BayesGapOptions& options, Rng& rng) {
  const std::size_t k = instance.num_arms();
  const auto d = static_cast<Eigen::Index>(instance.dim());
  if (budget < k) {
    throw BudgetTooSmallError("budget too small for BayesGap: T = " + std::to_string(budget) +
                              " < K = " + std::to_string(k));
  }
  if (!(options.prior_scale > 0.0)) throw Error("prior scale must be positive");
  const double sigma = options.noise_std.value_or(instance.noise_std());
  if (!(sigma >= 0.0)) throw Error("noise_std must be nonnegative");
  const double eps = options.tolerance;
  const double ridge = sigma > 0.0 ? (sigma / options.prior_scale) * (sigma / options.prior_scale)
                                   : 1e-12;
  const Matrix& a = instance.arms().matrix();
  const double horizon = static_cast<double>(budget - k);

  auto h_eps = [&](const Vector& gap) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < gap.size(); ++i) {
      const double hk = std::max(0.5 * (gap(i) + eps), eps);
      h += 1.0 / std::max(hk * hk, std::numeric_limits<double>::min());
    }
    return h;
  };

  RunTrace trace;
  trace.algorithm =
      options.mode == BayesGapMode::Oracle ? "bayesgap-oracle" : "bayesgap-adaptive";
  trace.dim = instance.dim();

  double oracle_h = 0.0;
  if (options.mode == BayesGapMode::Oracle) {
    if (options.h1) {
      trace.h1_used = *options.h1;
      oracle_h = 4.0 * *options.h1;
    } else {
      const Vector g = gaps(instance);
      trace.h1_used = (1.0 / g.array().square()).sum();
      oracle_h = h_eps(g);
    }
  }

  PhaseRecord rec;
  rec.phase = 1;
  rec.active.resize(k);
  std::iota(rec.active.begin(), rec.active.end(), ArmIndex{0});
  rec.reduced_dim = instance.dim();
  rec.counts.assign(k, 0);

  Matrix precision = ridge * Matrix::Identity(d, d);
  Vector moment = Vector::Zero(d);
  auto observe = [&](ArmIndex arm) {
    const double x = pull(instance, arm, rng);
    const auto row = a.row(static_cast<Eigen::Index>(arm));
    precision.noalias() += row.transpose() * row;
    moment.noalias() += x * row.transpose();
    ++rec.counts[arm];
    if (options.record_pulls) rec.log.record(arm, x);
  };

  for (ArmIndex i = 0; i < k; ++i) observe(i);

  Vector mu;
  Vector s;
  auto posterior = [&] {
    Eigen::LLT<Matrix> llt(precision);
    if (llt.info() != Eigen::Success) throw Error("BayesGap posterior is not positive definite");
    rec.estimate = llt.solve(moment);
    mu = a * rec.estimate;
    const Matrix half = llt.matrixL().solve(a.transpose());
    s = sigma * half.colwise().norm().transpose();
  };

  double best_index = std::numeric_limits<double>::infinity();
  ArmIndex recommendation = 0;
  const auto kk = static_cast<Eigen::Index>(k);

  for (std::uint64_t t = k; t < budget; ++t) {
    posterior();

    double h = oracle_h;
    if (options.mode == BayesGapMode::Adaptive) {
      Vector hi3 = mu + 3.0 * s;
      Vector est(kk);
      Eigen::Index first = 0;
      const double top = hi3.maxCoeff(&first);
      double second = -std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < kk; ++i) {
        if (i != first) second = std::max(second, hi3(i));
      }
      for (Eigen::Index i = 0; i < kk; ++i) {
        const double other = i == first ? second : top;
        est(i) = std::abs(other - (mu(i) - 3.0 * s(i)));
      }
      h = h_eps(est);
    }
    const double beta = std::sqrt(horizon / (4.0 * h));
    trace.exploration.push_back(beta);

    const Vector upper = mu + beta * s;
    const Vector lower = mu - beta * s;
    Eigen::Index u1 = 0;
    const double u_top = upper.maxCoeff(&u1);
    double u_second = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < kk; ++i) {
      if (i != u1) u_second = std::max(u_second, upper(i));
    }

    Eigen::Index cand = 0;
    double cand_index = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < kk; ++i) {
      const double b = (i == u1 ? u_second : u_top) - lower(i);
      if (b < cand_index) {
        cand_index = b;
        cand = i;
      }
    }
    Eigen::Index challenger = -1;
    for (Eigen::Index i = 0; i < kk; ++i) {
      if (i == cand) continue;
      if (challenger < 0 || upper(i) > upper(challenger)) challenger = i;
    }

    if (cand_index < best_index) {
      best_index = cand_index;
      recommendation = static_cast<ArmIndex>(cand);
    }
    const Eigen::Index next =
        (challenger >= 0 && s(challenger) > s(cand)) ? challenger : cand;
    observe(static_cast<ArmIndex>(next));
  }

  posterior();
  if (budget == k) {
    Eigen::Index best = 0;
    mu.maxCoeff(&best);
    recommendation = static_cast<ArmIndex>(best);
  }

  rec.weights = Vector(kk);
  for (Eigen::Index i = 0; i < kk; ++i) {
    rec.weights(i) = static_cast<double>(rec.counts[static_cast<std::size_t>(i)]) /
                     static_cast<double>(budget);
  }
  rec.estimated_rewards = mu;
  rec.eliminated.assign(k, true);
  rec.eliminated[recommendation] = false;
  rec.pulls = static_cast<std::size_t>(budget);

  trace.phases.push_back(std::move(rec));
  trace.output_arm = recommendation;
  trace.total_pulls = static_cast<std::size_t>(budget);
  return RunResult{recommendation, std::move(trace)};
}

std::string_view algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::OdLinBai: return "odlinbai";
    case Algorithm::SequentialHalving: return "sh";
    case Algorithm::BayesGapOracle: return "bayesgap-oracle";
    case Algorithm::BayesGapAdaptive: return "bayesgap-adaptive";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : all_algorithms()) {
    if (algorithm_name(a) == name) return a;
  }
  throw Error("unknown algorithm '" + std::string(name) +
              "' (expected odlinbai, sh, bayesgap-oracle or bayesgap-adaptive)");
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> algos{Algorithm::OdLinBai, Algorithm::SequentialHalving,
                                            Algorithm::BayesGapOracle,
                                            Algorithm::BayesGapAdaptive};
  return algos;
}

RunResult run_algorithm(Algorithm algo, const LinearBanditInstance& instance,
                        std::uint64_t budget, Rng& rng, double eps, bool record_pulls) {
  switch (algo) {
    case Algorithm::OdLinBai: {
      OdLinBaiOptions opts;
      opts.eps = eps;
      opts.record_pulls = record_pulls;
      return run_od_linbai(instance, budget, rng, opts);
    }
    case Algorithm::SequentialHalving:
      return run_sequential_halving(instance, budget, rng, record_pulls);
    case Algorithm::BayesGapOracle:
    case Algorithm::BayesGapAdaptive: {
      BayesGapOptions opts;
      opts.mode = algo == Algorithm::BayesGapOracle ? BayesGapMode::Oracle
                                                    : BayesGapMode::Adaptive;
      opts.record_pulls = record_pulls;
      return run_bayesgap(instance, budget, opts, rng);
    }
  }
  throw Error("unknown algorithm");
}

}  // namespace odlinbai
