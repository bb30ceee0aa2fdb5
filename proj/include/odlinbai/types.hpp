#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace odlinbai {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ArmIndex = std::size_t;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroSpanError : public Error {
 public:
  ZeroSpanError() : Error("zero span") {}
};

class RankDeficientError : public Error {
 public:
  explicit RankDeficientError(const std::string& what) : Error(what) {}
};

class BudgetTooSmallError : public Error {
 public:
  explicit BudgetTooSmallError(const std::string& what) : Error(what) {}
};

/// Ordered collection of K arm vectors sharing one ambient dimension.
/// Stored row-wise: row i is the arm vector a(i).
class ArmSet {
 public:
  ArmSet() = default;
  explicit ArmSet(Matrix rows);
  static ArmSet from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return static_cast<std::size_t>(rows_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(rows_.cols()); }
  bool empty() const { return rows_.rows() == 0; }

  const Matrix& matrix() const { return rows_; }
  Vector arm(ArmIndex i) const;

  ArmSet subset(const std::vector<ArmIndex>& indices) const;

 private:
  Matrix rows_;
};

}  // namespace odlinbai
