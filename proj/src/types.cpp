#include "odlinbai/types.hpp"

#include <cmath>

namespace odlinbai {

ArmSet::ArmSet(Matrix rows) : rows_(std::move(rows)) {
  if (!rows_.allFinite()) {
    throw Error("arm vectors must be finite");
  }
}

ArmSet ArmSet::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) {
    return ArmSet(Matrix(0, 0));
  }
  const auto d = rows.front().size();
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) {
      throw Error("arm " + std::to_string(i) + " has dimension " +
                  std::to_string(rows[i].size()) + ", expected " + std::to_string(d));
    }
    for (std::size_t j = 0; j < d; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return ArmSet(std::move(m));
}

Vector ArmSet::arm(ArmIndex i) const {
  if (i >= size()) {
    throw Error("arm index " + std::to_string(i) + " out of range");
  }
  return rows_.row(static_cast<Eigen::Index>(i)).transpose();
}

ArmSet ArmSet::subset(const std::vector<ArmIndex>& indices) const {
  Matrix out(static_cast<Eigen::Index>(indices.size()), rows_.cols());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= size()) {
      throw Error("arm index " + std::to_string(indices[k]) + " out of range");
    }
    out.row(static_cast<Eigen::Index>(k)) = rows_.row(static_cast<Eigen::Index>(indices[k]));
  }
  return ArmSet(std::move(out));
}

}  // namespace odlinbai
