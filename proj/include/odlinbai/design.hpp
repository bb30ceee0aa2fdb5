#pragma once

#include "odlinbai/types.hpp"

#include <optional>

namespace odlinbai::design {

inline constexpr double kDefaultEps = 1e-7;
inline constexpr std::size_t kDefaultMaxIterations = 100000;
inline constexpr double kPruneThreshold = 1e-9;

/// A probability vector over arms together with its information matrix
/// V(pi) = sum_i pi_i a(i) a(i)^T and g(pi) = max_i ||a(i)||^2_{V(pi)^-1}.
struct Design {
  Vector weights;
  Matrix info_matrix;
  double g_value = 0.0;

  std::size_t support_size(double threshold = 0.0) const;
  std::vector<ArmIndex> support(double threshold = 0.0) const;
};

struct SolverOptions {
  double eps = kDefaultEps;
  std::size_t max_iterations = kDefaultMaxIterations;
  // Rank-one updates of V^-1 are replaced by a fresh factorization this often.
  std::size_t refactor_every = 1000;
  std::optional<Vector> initial_weights;
  bool record_log_det = false;
};

struct SolverStats {
  std::size_t iterations = 0;
  std::size_t toward_steps = 0;
  std::size_t away_steps = 0;
  std::size_t drop_steps = 0;
  std::vector<double> log_det_history;
};

/// Thrown when the iteration cap is hit before g <= (1+eps)d.
class DesignNotConvergedError : public Error {
 public:
  DesignNotConvergedError(Design best, std::size_t iterations);
  const Design& best() const { return best_; }
  std::size_t iterations() const { return iterations_; }

 private:
  Design best_;
  std::size_t iterations_;
};

/// Wolfe-Atwood Frank-Wolfe ascent on log det V(pi) with away and drop steps,
/// started from kumar_yildirim_init unless options.initial_weights is set.
/// Requires arms to span R^d; stops once g(pi) <= (1+eps) d.
Design solve_g_optimal(const ArmSet& arms, const SolverOptions& options = {},
                       SolverStats* stats = nullptr);
Design solve_g_optimal(const ArmSet& arms, double eps);

/// g(pi) over every arm, zero-weight arms included.
/// Throws RankDeficientError("design does not span") if V(pi) is singular.
double g_of(const Vector& weights, const ArmSet& arms);

Design make_design(const Vector& weights, const ArmSet& arms);

/// Reduces the support to at most max_support arms while keeping
/// g <= (1+2 eps) d. Carathéodory elimination keeps V(pi) fixed; when that
/// is not enough the solver is re-run on a restricted arm subset (at most
/// five attempts).
Design prune_support(const Design& design, const ArmSet& arms, std::size_t max_support,
                     double eps = kDefaultEps);

/// Greedy start: repeatedly take the arm with the largest component
/// orthogonal to the arms already chosen, d times, and weight them 1/d.
Design kumar_yildirim_init(const ArmSet& arms);

inline std::size_t max_support_bound(std::size_t d) { return d * (d + 1) / 2; }

}  // namespace odlinbai::design
