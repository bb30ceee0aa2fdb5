#include "odlinbai/geometry.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace odlinbai;

namespace {

ArmSet rows(std::vector<std::vector<double>> r) { return ArmSet::from_rows(r); }

Matrix random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> n(0, 1);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = n(rng);
  return m;
}

}  // namespace

TEST_CASE("effective dimension of small sets") {
  CHECK(geometry::effective_dimension(rows({{1, 0}, {0, 1}})) == 2);
  CHECK(geometry::effective_dimension(rows({{2, 0}, {-1, 0}})) == 1);
  CHECK_THROWS_AS(geometry::effective_dimension(rows({{0, 0}, {0, 0}})), ZeroSpanError);
  CHECK_THROWS_WITH(geometry::effective_dimension(rows({{0, 0}})), "zero span");
}

TEST_CASE("effective dimension agrees with Gram eigenvalues on sphere samples") {
  Rng rng = make_rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    Matrix m = random_matrix(rng, 5, 3);
    for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i).normalize();
    CHECK(geometry::effective_dimension(ArmSet(m)) == 3);
    CHECK(oracle::gram_rank(m) == 3);
  }
  for (int rep = 0; rep < 50; ++rep) {
    const Matrix m = random_matrix(rng, 7, 2) * random_matrix(rng, 2, 5);
    CHECK(geometry::effective_dimension(ArmSet(m)) == oracle::gram_rank(m));
  }
}

TEST_CASE("orthonormal basis of a line and of the plane z = 0") {
  const auto line = geometry::orthonormal_basis(rows({{2, 0}, {-1, 0}}));
  REQUIRE(line.effective_dim == 1);
  CHECK(std::abs(line.columns(0, 0)) == doctest::Approx(1.0));
  CHECK(line.columns(1, 0) == doctest::Approx(0.0));
  CHECK(line.columns(0, 0) > 0);  // sign convention

  const auto plane = geometry::orthonormal_basis(rows({{1, 1, 0}, {1, -1, 0}}));
  REQUIRE(plane.effective_dim == 2);
  const Matrix proj = plane.columns * plane.columns.transpose();
  Matrix expected = Matrix::Zero(3, 3);
  expected(0, 0) = expected(1, 1) = 1;
  CHECK((proj - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("basis of a full-rank set gives an identity projector") {
  const auto b = geometry::orthonormal_basis(rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  CHECK(b.effective_dim == 3);
  CHECK((b.columns * b.columns.transpose() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("basis columns are orthonormal and arms lie in their span") {
  Rng rng = make_rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    const Matrix m = random_matrix(rng, 9, 3) * random_matrix(rng, 3, 6);
    const auto b = geometry::orthonormal_basis(ArmSet(m));
    REQUIRE(b.effective_dim == 3);
    CHECK((b.columns.transpose() * b.columns - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <
          1e-10);
    const Matrix back = (b.columns * b.columns.transpose() * m.transpose()).transpose();
    for (Eigen::Index i = 0; i < m.rows(); ++i) CHECK((back.row(i) - m.row(i)).norm() < 1e-9);
  }
}

TEST_CASE("reduce preserves Gram matrices and rewards") {
  const auto small = rows({{2, 0}, {-1, 0}});
  const auto red = geometry::reduce(small, geometry::orthonormal_basis(small));
  CHECK(red.dim() == 1);
  CHECK(red.matrix()(0, 0) == doctest::Approx(2.0));
  CHECK(red.matrix()(1, 0) == doctest::Approx(-1.0));

  const auto full = rows({{1, 2}, {3, 4}});
  geometry::Basis ident{Matrix::Identity(2, 2), 2};
  CHECK(geometry::reduce(full, ident).matrix() == full.matrix());

  Rng rng = make_rng(9);
  for (int rep = 0; rep < 30; ++rep) {
    const Matrix m = random_matrix(rng, 8, 2) * random_matrix(rng, 2, 4);
    const ArmSet arms(m);
    const auto b = geometry::orthonormal_basis(arms);
    const Matrix r = geometry::reduce(arms, b).matrix();
    CHECK(r.cols() == 2);
    CHECK((r * r.transpose() - m * m.transpose()).cwiseAbs().maxCoeff() < 1e-9);

    const Vector theta = m.transpose() * random_matrix(rng, 8, 1);  // in the span
    const Vector p = m * theta;
    const Vector pr = r * (b.columns.transpose() * theta);
    CHECK((p - pr).cwiseAbs().maxCoeff() < 1e-9);

    // Reducing an already reduced set is an orthogonal change of basis.
    const ArmSet again = geometry::reduce(ArmSet(r), geometry::orthonormal_basis(ArmSet(r)));
    CHECK((again.matrix() * again.matrix().transpose() - r * r.transpose())
              .cwiseAbs()
              .maxCoeff() < 1e-9);
  }
  CHECK_THROWS_AS(geometry::reduce(full, geometry::Basis{Matrix::Identity(3, 3), 3}), Error);
}

TEST_CASE("rank is monotone under taking subsets") {
  Rng rng = make_rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix m = random_matrix(rng, 10, 3) * random_matrix(rng, 3, 5);
    const ArmSet arms(m);
    const auto sub = arms.subset({0, 1});
    CHECK(geometry::effective_dimension(sub) <= geometry::effective_dimension(arms));
  }
}
