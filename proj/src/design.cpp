#include "odlinbai/design.hpp"

#include "odlinbai/geometry.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace odlinbai::design {
namespace {

constexpr double kSingularRcond = 1e-13;

struct Factorized {
  Eigen::LLT<Matrix> llt;
  bool ok = false;
};

Factorized factorize_info(const Matrix& info) {
  Factorized f;
  f.llt.compute(info);
  f.ok = f.llt.info() == Eigen::Success && f.llt.rcond() > kSingularRcond;
  return f;
}

Matrix info_matrix_of(const Vector& weights, const Matrix& arms) {
  return arms.transpose() * weights.asDiagonal() * arms;
}

void validate_weights(const Vector& weights, std::size_t k) {
  if (static_cast<std::size_t>(weights.size()) != k) {
    throw Error("design has " + std::to_string(weights.size()) + " weights for " +
                std::to_string(k) + " arms");
  }
  if (!weights.allFinite() || (weights.array() < 0.0).any()) {
    throw Error("design weights must be finite and nonnegative");
  }
  if (std::abs(weights.sum() - 1.0) > 1e-9) {
    throw Error("design weights must sum to 1");
  }
}

// Leverages ||a(i)||^2_{V^-1} for every arm via the Cholesky factor.
Vector leverages(const Eigen::LLT<Matrix>& llt, const Matrix& arms) {
  const Matrix half = llt.matrixL().solve(arms.transpose());
  return half.colwise().squaredNorm().transpose();
}

bool certified(const Design& design, std::size_t d, double eps) {
  return design.g_value <= (1.0 + 2.0 * eps) * static_cast<double>(d);
}

// Moves weight along null directions of the moment map i -> vec(a_i a_i^T)
// until at most `target` arms remain in the support. While the support has
// more than n + 1 arms (n = d(d+1)/2) the moment matrix and the total weight
// are both preserved exactly; the final n + 1 -> n step preserves V up to the
// renormalization of the weights.
Vector caratheodory_reduce(Vector u, const Matrix& arms, std::size_t target) {
  const auto d = static_cast<std::size_t>(arms.cols());
  const std::size_t n = max_support_bound(d);

  auto moment_column = [&](Eigen::Index i, bool augmented) {
    Vector col(static_cast<Eigen::Index>(n + (augmented ? 1 : 0)));
    Eigen::Index r = 0;
    for (Eigen::Index p = 0; p < arms.cols(); ++p) {
      for (Eigen::Index q = p; q < arms.cols(); ++q) {
        col(r++) = arms(i, p) * arms(i, q);
      }
    }
    if (augmented) col(r) = 1.0;
    return col;
  };

  for (;;) {
    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (u(i) > 0.0) support.push_back(i);
    }
    if (support.size() <= target || support.size() <= n) break;

    const bool augmented = support.size() > n + 1;
    std::vector<Eigen::Index> batch = support;
    if (augmented) {
      // Smallest weights first; n + 2 columns always have a null vector.
      std::stable_sort(batch.begin(), batch.end(),
                       [&](Eigen::Index a, Eigen::Index b) { return u(a) < u(b); });
      batch.resize(n + 2);
    }

    Matrix moments(static_cast<Eigen::Index>(n + (augmented ? 1 : 0)),
                   static_cast<Eigen::Index>(batch.size()));
    for (std::size_t c = 0; c < batch.size(); ++c) {
      moments.col(static_cast<Eigen::Index>(c)) = moment_column(batch[c], augmented);
    }
    Eigen::JacobiSVD<Matrix> svd(moments, Eigen::ComputeFullV);
    Vector direction = svd.matrixV().col(svd.matrixV().cols() - 1);
    if (direction.maxCoeff() <= 0.0) direction = -direction;

    double step = std::numeric_limits<double>::infinity();
    std::size_t hit = 0;
    for (std::size_t c = 0; c < batch.size(); ++c) {
      const double dc = direction(static_cast<Eigen::Index>(c));
      if (dc > 0.0) {
        const double t = u(batch[c]) / dc;
        if (t < step) {
          step = t;
          hit = c;
        }
      }
    }
    for (std::size_t c = 0; c < batch.size(); ++c) {
      u(batch[c]) -= step * direction(static_cast<Eigen::Index>(c));
      if (u(batch[c]) < 1e-15) u(batch[c]) = 0.0;
    }
    u(batch[hit]) = 0.0;
    u /= u.sum();
  }
  return u;
}

std::vector<ArmIndex> top_by_weight(const Vector& u, std::size_t count) {
  std::vector<ArmIndex> order(static_cast<std::size_t>(u.size()));
  std::iota(order.begin(), order.end(), ArmIndex{0});
  std::stable_sort(order.begin(), order.end(), [&](ArmIndex a, ArmIndex b) {
    return u(static_cast<Eigen::Index>(a)) > u(static_cast<Eigen::Index>(b));
  });
  order.resize(std::min(count, order.size()));
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

std::size_t Design::support_size(double threshold) const {
  return static_cast<std::size_t>((weights.array() > threshold).count());
}

std::vector<ArmIndex> Design::support(double threshold) const {
  std::vector<ArmIndex> out;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights(i) > threshold) out.push_back(static_cast<ArmIndex>(i));
  }
  return out;
}

DesignNotConvergedError::DesignNotConvergedError(Design best, std::size_t iterations)
    : Error("design solver hit the iteration cap (" + std::to_string(iterations) +
            ") with g = " + std::to_string(best.g_value)),
      best_(std::move(best)),
      iterations_(iterations) {}

double g_of(const Vector& weights, const ArmSet& arms) {
  validate_weights(weights, arms.size());
  const auto f = factorize_info(info_matrix_of(weights, arms.matrix()));
  if (!f.ok) {
    throw RankDeficientError("design does not span");
  }
  return leverages(f.llt, arms.matrix()).maxCoeff();
}

Design make_design(const Vector& weights, const ArmSet& arms) {
  Design out;
  out.weights = weights;
  out.g_value = g_of(weights, arms);
  out.info_matrix = info_matrix_of(weights, arms.matrix());
  return out;
}

Design kumar_yildirim_init(const ArmSet& arms) {
  const auto k = arms.size();
  const auto d = arms.dim();
  if (k == 0 || d == 0) throw Error("arm set is empty");

  Matrix residual = arms.matrix();
  const double scale = residual.rowwise().norm().maxCoeff();
  if (!(scale > 0.0)) throw RankDeficientError("rank-deficient input");

  Vector weights = Vector::Zero(static_cast<Eigen::Index>(k));
  for (std::size_t step = 0; step < d; ++step) {
    const Vector norms = residual.rowwise().norm();
    Eigen::Index pick = -1;
    double best = 0.0;
    for (Eigen::Index i = 0; i < norms.size(); ++i) {
      if (weights(i) > 0.0) continue;
      if (pick < 0 || norms(i) > best * (1.0 + 1e-12)) {
        pick = i;
        best = norms(i);
      }
    }
    if (pick < 0 || best <= geometry::kDefaultRankTol * scale) {
      throw RankDeficientError("rank-deficient input");
    }
    weights(pick) = 1.0 / static_cast<double>(d);
    const Vector q = residual.row(pick).transpose() / best;
    residual -= (residual * q) * q.transpose();
  }
  return make_design(weights, arms);
}

Design solve_g_optimal(const ArmSet& arms, double eps) {
  SolverOptions options;
  options.eps = eps;
  return solve_g_optimal(arms, options);
}

Design solve_g_optimal(const ArmSet& arms, const SolverOptions& options, SolverStats* stats) {
  const auto k = arms.size();
  const auto d = arms.dim();
  if (k == 0 || d == 0) throw Error("arm set is empty");
  if (!(options.eps > 0.0)) throw Error("eps must be positive");
  if (geometry::effective_dimension(arms) != d) {
    throw RankDeficientError("rank-deficient input");
  }

  const Matrix& a = arms.matrix();
  const double dd = static_cast<double>(d);

  Vector u;
  if (options.initial_weights) {
    u = *options.initial_weights;
    validate_weights(u, k);
  } else {
    u = kumar_yildirim_init(arms).weights;
  }

  Matrix v_inv;
  Vector w;
  double log_det = 0.0;
  auto refresh = [&] {
    u /= u.sum();
    const auto f = factorize_info(info_matrix_of(u, a));
    if (!f.ok) throw RankDeficientError("design does not span");
    v_inv = f.llt.solve(Matrix::Identity(a.cols(), a.cols()));
    v_inv = 0.5 * (v_inv + v_inv.transpose()).eval();
    w = leverages(f.llt, a);
    const Matrix l = f.llt.matrixL();
    log_det = 2.0 * l.diagonal().array().log().sum();
  };

  SolverStats local;
  SolverStats& st = stats ? *stats : local;
  st = SolverStats{};

  refresh();
  if (options.record_log_det) st.log_det_history.push_back(log_det);
  std::size_t since_refresh = 0;

  for (;;) {
    Eigen::Index j = 0;
    const double w_max = w.maxCoeff(&j);
    if (w_max <= (1.0 + options.eps) * dd) {
      if (since_refresh == 0) break;
      refresh();
      since_refresh = 0;
      continue;
    }
    if (st.iterations >= options.max_iterations) {
      refresh();
      throw DesignNotConvergedError(make_design(u, arms), st.iterations);
    }

    Eigen::Index away = -1;
    double w_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (u(i) > 0.0 && w(i) < w_min) {
        w_min = w(i);
        away = i;
      }
    }

    Eigen::Index idx = j;
    double lambda = (w_max - dd) / (dd * (w_max - 1.0));
    bool drop = false;
    const double gap_toward = w_max / dd - 1.0;
    const double gap_away = 1.0 - w_min / dd;
    if (away >= 0 && gap_away > gap_toward && u(away) < 1.0) {
      const double lower = -u(away) / (1.0 - u(away));
      const double line = w_min > 1.0 ? (w_min - dd) / (dd * (w_min - 1.0))
                                      : -std::numeric_limits<double>::infinity();
      idx = away;
      if (line <= lower) {
        lambda = lower;
        drop = true;
      } else {
        lambda = line;
      }
    }

    const Vector arm = a.row(idx).transpose();
    const Vector v_inv_arm = v_inv * arm;
    const Vector z = a * v_inv_arm;
    const double w_arm = z(idx);
    const double denom = (1.0 - lambda) + lambda * w_arm;
    if (!(denom > 1e-14)) {
      // Drift made the update ill-posed; start over from a fresh factorization.
      refresh();
      since_refresh = 0;
      ++st.iterations;
      continue;
    }

    v_inv = (v_inv - (lambda / denom) * v_inv_arm * v_inv_arm.transpose()) / (1.0 - lambda);
    w = (w - (lambda / denom) * z.cwiseAbs2()) / (1.0 - lambda);
    log_det += (dd - 1.0) * std::log(1.0 - lambda) + std::log(denom);
    u *= (1.0 - lambda);
    u(idx) += lambda;
    if (drop) u(idx) = 0.0;

    ++st.iterations;
    if (lambda > 0.0) {
      ++st.toward_steps;
    } else if (drop) {
      ++st.drop_steps;
    } else {
      ++st.away_steps;
    }
    if (++since_refresh >= options.refactor_every) {
      refresh();
      since_refresh = 0;
    }
    if (options.record_log_det) st.log_det_history.push_back(log_det);
  }

  Design out;
  out.weights = u;
  out.info_matrix = info_matrix_of(u, a);
  out.g_value = w.maxCoeff();
  return out;
}

Design prune_support(const Design& design, const ArmSet& arms, std::size_t max_support,
                     double eps) {
  const auto d = arms.dim();
  validate_weights(design.weights, arms.size());
  if (max_support < d) {
    throw Error("max_support (" + std::to_string(max_support) + ") must be at least d (" +
                std::to_string(d) + ")");
  }
  if (design.support_size() <= max_support) return design;

  Vector u = design.weights;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u(i) < kPruneThreshold) u(i) = 0.0;
  }
  u /= u.sum();
  u = caratheodory_reduce(u, arms.matrix(), max_support);

  auto try_certify = [&](const Vector& weights, Design& out) {
    try {
      out = make_design(weights, arms);
    } catch (const RankDeficientError&) {
      return false;
    }
    return out.support_size() <= max_support && certified(out, d, eps);
  };

  Design candidate;
  if (try_certify(u, candidate)) return candidate;

  constexpr int kMaxAttempts = 5;
  std::ostringstream log;
  for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
    std::vector<ArmIndex> restricted;
    const auto support = static_cast<std::size_t>((u.array() > 0.0).count());
    if (support <= max_support) {
      for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (u(i) > 0.0) restricted.push_back(static_cast<ArmIndex>(i));
      }
      // Pull in the arm that violates the certificate the most.
      try {
        const auto f = factorize_info(info_matrix_of(u, arms.matrix()));
        if (f.ok) {
          Eigen::Index worst = 0;
          leverages(f.llt, arms.matrix()).maxCoeff(&worst);
          if (u(worst) <= 0.0) {
            restricted.push_back(static_cast<ArmIndex>(worst));
            std::sort(restricted.begin(), restricted.end());
          }
        }
      } catch (const Error&) {
      }
    } else {
      restricted = top_by_weight(u, max_support);
    }

    const ArmSet sub = arms.subset(restricted);
    SolverOptions options;
    options.eps = eps;
    Vector warm(static_cast<Eigen::Index>(restricted.size()));
    for (std::size_t c = 0; c < restricted.size(); ++c) {
      warm(static_cast<Eigen::Index>(c)) = u(static_cast<Eigen::Index>(restricted[c]));
    }
    if (warm.sum() > 0.0 && factorize_info(info_matrix_of(warm / warm.sum(), sub.matrix())).ok) {
      options.initial_weights = warm / warm.sum();
    }

    Design sub_design;
    try {
      sub_design = solve_g_optimal(sub, options);
    } catch (const Error& e) {
      log << " attempt " << attempt << ": restricted solve on " << restricted.size()
          << " arms failed (" << e.what() << ");";
      restricted = top_by_weight(u, max_support);
      u = Vector::Zero(u.size());
      for (ArmIndex i : restricted) u(static_cast<Eigen::Index>(i)) = 1.0;
      u /= u.sum();
      continue;
    }

    Vector full = Vector::Zero(u.size());
    for (std::size_t c = 0; c < restricted.size(); ++c) {
      full(static_cast<Eigen::Index>(restricted[c])) =
          sub_design.weights(static_cast<Eigen::Index>(c));
    }
    u = caratheodory_reduce(full, arms.matrix(), max_support);
    if (try_certify(u, candidate)) return candidate;
    log << " attempt " << attempt << ": support " << candidate.support_size() << ", g = "
        << candidate.g_value << ";";
  }

  std::ostringstream msg;
  msg << "cannot certify a design with support <= " << max_support << " and g <= "
      << (1.0 + 2.0 * eps) * static_cast<double>(d) << ":" << log.str();
  throw Error(msg.str());
}

}  // namespace odlinbai::design
