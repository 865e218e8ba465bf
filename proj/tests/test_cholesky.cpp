#include <doctest.h>

#include <cmath>

#include "rmscale/cholesky.hpp"
#include "rmscale/errors.hpp"

using namespace rmscale;

TEST_CASE("2x2 factor matches the hand computation") {
  Eigen::MatrixXd s(2, 2);
  s << 4, 2, 2, 3;
  Eigen::MatrixXd l = cholesky(s);
  CHECK(l(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(l(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(l(1, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(l(0, 1) == 0.0);
}

TEST_CASE("factor is lower triangular and reconstructs the input") {
  Eigen::MatrixXd b(5, 5);
  int v = 1;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) b(i, j) = std::sin(v++) * 2.0;
  Eigen::MatrixXd s = b.transpose() * b + 0.1 * Eigen::MatrixXd::Identity(5, 5);
  Eigen::MatrixXd l = cholesky(s);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) CHECK(l(i, j) == 0.0);
  CHECK((l * l.transpose() - s).norm() < 1e-12 * s.norm());
}

TEST_CASE("indefinite, singular and non-square inputs are rejected") {
  Eigen::MatrixXd indef(2, 2);
  indef << 1, 2, 2, 1;
  CHECK_THROWS_AS(cholesky(indef), DecompositionError);

  CHECK_THROWS_AS(cholesky(Eigen::MatrixXd::Zero(1, 1)), DecompositionError);
  CHECK_THROWS_AS(cholesky(Eigen::MatrixXd::Zero(2, 3)), DecompositionError);

  // rank-deficient: second row is twice the first
  Eigen::MatrixXd sing(2, 2);
  sing << 1, 2, 2, 4;
  CHECK_THROWS_AS(cholesky(sing), DecompositionError);
}
