#include <doctest.h>

#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "rmscale/covariance.hpp"
#include "rmscale/normal.hpp"
#include "rmscale/rng.hpp"
#include "support/test_helpers.hpp"

using namespace rmscale;

namespace {

std::vector<Eigen::VectorXd> random_states(int dim, int n, std::uint64_t stream) {
  RngStream rng(555, stream);
  std::vector<Eigen::VectorXd> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd x(dim);
    for (int j = 0; j < dim; ++j) x(j) = draw_std_normal(rng) * (1.0 + j) + 0.3 * j;
    out.push_back(x);
  }
  return out;
}

}  // namespace

TEST_CASE("rank-one recursion reproduces the batch covariance") {
  for (int dim : {1, 2, 5}) {
    for (int n : {2, 3, 10, 137, 1000}) {
      CAPTURE(dim);
      CAPTURE(n);
      auto states = random_states(dim, n, 10 * dim + (n % 7));
      CovarianceTracker tracker(dim, /*warmup_threshold=*/1);
      for (const auto& x : states) tracker.update(x);
      REQUIRE(tracker.count() == n);

      Eigen::MatrixXd batch = testutil::batch_covariance(states);
      Eigen::VectorXd batch_mean = Eigen::VectorXd::Zero(dim);
      for (const auto& x : states) batch_mean += x;
      batch_mean /= n;

      CHECK((tracker.mean() - batch_mean).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((tracker.reported_cov() - batch).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("reported covariance is the identity through the warmup gate") {
  auto states = random_states(3, 150, 4);
  CovarianceTracker tracker(3);
  REQUIRE(tracker.warmup_threshold() == 100);

  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(3, 3);
  for (int k = 0; k < 100; ++k) {
    tracker.update(states[k]);
    CHECK((tracker.reported_cov() == eye));
  }

  // One more state tips it over: the report is the full 101-state batch
  // estimate, not something that started accumulating at the gate.
  tracker.update(states[100]);
  std::vector<Eigen::VectorXd> first101(states.begin(), states.begin() + 101);
  Eigen::MatrixXd batch = testutil::batch_covariance(first101);
  CHECK((tracker.reported_cov() - batch).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("constant history leaves only the ridge") {
  CovarianceTracker tracker(2, 1);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(2, 3.0);
  for (int k = 0; k < 4; ++k) tracker.update(x);

  CHECK((tracker.reported_cov() == Eigen::MatrixXd::Zero(2, 2)));
  // A = 0 + (1^2 / 4) I exactly.
  Eigen::MatrixXd a = regularized_A(tracker, 1.0, 4);
  CHECK((a == 0.25 * Eigen::MatrixXd::Identity(2, 2)));
}

TEST_CASE("ridge keeps the proposal matrix positive definite") {
  auto states = random_states(4, 300, 9);
  CovarianceTracker tracker(4);
  for (const auto& x : states) tracker.update(x);

  double sigma = 0.7;
  int i = 300;
  Eigen::MatrixXd a = regularized_A(tracker, sigma, i);
  Eigen::MatrixXd diff = a - tracker.reported_cov();
  Eigen::MatrixXd expect = (sigma * sigma / i) * Eigen::MatrixXd::Identity(4, 4);
  CHECK((diff - expect).cwiseAbs().maxCoeff() < 1e-14);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("tracker and ridge reject invalid arguments") {
  CHECK_THROWS_AS(CovarianceTracker(0), std::domain_error);
  CovarianceTracker tracker(2);
  Eigen::VectorXd wrong = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS(tracker.update(wrong), std::invalid_argument);
  tracker.update(Eigen::VectorXd::Zero(2));
  CHECK_THROWS_AS(regularized_A(tracker, 1.0, 0), std::domain_error);
  CHECK_THROWS_AS(regularized_A(tracker, 0.0, 5), std::domain_error);
}
