#pragma once

#include <Eigen/Core>

namespace rmscale {

// Running sample covariance of the chain history, with a warmup gate: until
// more than warmup_threshold states have been seen, reported_cov() is the
// identity, so early proposals are spherical while the estimate is still
// noise.  Internally the exact sample mean and covariance (denominator
// count-1) accumulate from the first state via a rank-one recursion, so the
// reported matrix at count = warmup_threshold + 1 is already the full-batch
// estimate.  Rejected repeats are fed like any other state.
class CovarianceTracker {
 public:
  explicit CovarianceTracker(int dim, int warmup_threshold = 100);

  void update(const Eigen::VectorXd& x);

  int dim() const { return dim_; }
  int count() const { return count_; }
  int warmup_threshold() const { return warmup_; }

  // Sample mean of everything seen so far (zero vector before any update).
  const Eigen::VectorXd& mean() const { return mean_; }

  // Identity while count() <= warmup_threshold, sample covariance after.
  Eigen::MatrixXd reported_cov() const;

 private:
  int dim_;
  int warmup_;
  int count_ = 0;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

// Proposal shape matrix: reported covariance plus a vanishing ridge,
//   A = cov + (sigma^2 / i) I,
// which keeps A positive definite even when the sample covariance is
// singular (early chain, duplicated states).  i is the chain iteration
// count, not the search index, so restarts do not re-inflate the ridge.
Eigen::MatrixXd regularized_A(const CovarianceTracker& tracker, double sigma, int i);

}  // namespace rmscale
