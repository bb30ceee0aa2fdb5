#include "odlinbai/geometry.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace odlinbai::geometry {
namespace {

Eigen::JacobiSVD<Matrix> arm_svd(const ArmSet& arms, bool want_v) {
  if (arms.empty() || arms.dim() == 0) {
    throw Error("arm set is empty");
  }
  return want_v ? Eigen::JacobiSVD<Matrix>(arms.matrix(), Eigen::ComputeThinV)
                : Eigen::JacobiSVD<Matrix>(arms.matrix());
}

std::size_t rank_from(const Vector& singular, double tol) {
  const double top = singular.size() > 0 ? singular(0) : 0.0;
  if (!(top > 0.0)) {
    throw ZeroSpanError();
  }
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < singular.size(); ++i) {
    if (singular(i) > tol * top) ++r;
  }
  return r;
}

}  // namespace

std::size_t effective_dimension(const ArmSet& arms, double tol) {
  return rank_from(arm_svd(arms, false).singularValues(), tol);
}

Basis orthonormal_basis(const ArmSet& arms, double tol) {
  const auto svd = arm_svd(arms, true);
  const std::size_t r = rank_from(svd.singularValues(), tol);

  Basis basis;
  basis.effective_dim = r;
  basis.columns = svd.matrixV().leftCols(static_cast<Eigen::Index>(r));
  for (Eigen::Index c = 0; c < basis.columns.cols(); ++c) {
    auto col = basis.columns.col(c);
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) > 1e-12) {
        if (col(i) < 0.0) col = -col;
        break;
      }
    }
  }
  return basis;
}

ArmSet reduce(const ArmSet& arms, const Basis& basis) {
  if (static_cast<Eigen::Index>(arms.dim()) != basis.columns.rows()) {
    throw Error("dimension mismatch: arms have dimension " + std::to_string(arms.dim()) +
                " but basis has " + std::to_string(basis.columns.rows()) + " rows");
  }
  return ArmSet(arms.matrix() * basis.columns);
}

}  // namespace odlinbai::geometry
