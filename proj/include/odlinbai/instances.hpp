#pragma once

#include "odlinbai/bandit.hpp"

#include <optional>
#include <span>
#include <string>

namespace odlinbai::instances {

/// Two-dimensional instance with K-2 near-second-best arms: theta* = [1, 0],
/// a(1) = [1, 0], a(K) = [cos 3pi/4, sin 3pi/4], and the middle arms at angle
/// pi/4 + phi_i with phi_i ~ N(0, phi_std^2).
LinearBanditInstance gen_hard_instance(std::size_t num_arms, double phi_std, Rng& rng,
                                       double noise_std = 1.0);

/// Same construction with the K-2 middle-arm angle offsets given explicitly.
LinearBanditInstance hard_instance_from_offsets(std::span<const double> offsets,
                                                double noise_std = 1.0);

/// K = c^d arms uniform on the unit sphere. The closest pair is relabeled to
/// arms 0 and 1 and theta* = a(0) + 0.01 (a(0) - a(1)). Draws that are rank
/// deficient, contain duplicates, or where arm 1 is not the strict runner-up
/// are redrawn (at most 100 attempts).
LinearBanditInstance gen_sphere_instance(std::size_t dim, std::size_t c, Rng& rng,
                                         double noise_std = 1.0);

/// Standard-basis embedding of a K-armed bandit: arms e_1..e_K in R^K with
/// theta* = means. pad_to appends zero-vector arms up to that many arms.
LinearBanditInstance gen_mab_embedding(std::span<const double> means,
                                       std::optional<std::size_t> pad_to = std::nullopt,
                                       double noise_std = 1.0);

struct AbaloneOptions {
  std::size_t top_n = 400;
  double noise_std = 10.0;
  // Numeric codes for the categorical sex column (M, F, I).
  double sex_m = 1.0;
  double sex_f = 2.0;
  double sex_i = 3.0;
};

/// UCI Abalone rows "sex,length,diameter,height,whole,shucked,viscera,shell,rings".
/// theta* is the least-squares fit of rings on [1, features] over all rows; the
/// arms are the feature vectors (intercept coordinate first) of the top_n rows
/// by rings, ties in row order.
LinearBanditInstance load_abalone(const std::string& path, const AbaloneOptions& options = {});

/// Least-squares coefficients for the abalone design matrix (exposed for tests).
struct AbaloneData {
  Matrix features;  // rows x 9, first column all ones
  Vector target;    // rings
};
AbaloneData read_abalone(const std::string& path, const AbaloneOptions& options = {});

}  // namespace odlinbai::instances
