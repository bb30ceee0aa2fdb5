#pragma once

#include "odlinbai/types.hpp"

namespace odlinbai::geometry {

inline constexpr double kDefaultRankTol = 1e-9;

/// Orthonormal basis of span{a(i)}: a d x d' matrix with orthonormal columns.
struct Basis {
  Matrix columns;
  std::size_t effective_dim = 0;
};

/// Number of singular values of the arm matrix above tol * (largest singular
/// value). Throws ZeroSpanError if every arm is the zero vector.
std::size_t effective_dimension(const ArmSet& arms, double tol = kDefaultRankTol);

/// Basis from the reduced SVD of the arm matrix. Each column is signed so
/// its first nonzero entry is positive.
Basis orthonormal_basis(const ArmSet& arms, double tol = kDefaultRankTol);

/// Coordinates of every arm in the basis: a'(i) = B^T a(i).
ArmSet reduce(const ArmSet& arms, const Basis& basis);

}  // namespace odlinbai::geometry
