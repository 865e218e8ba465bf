#include "rmscale/covariance.hpp"

#include <stdexcept>

namespace rmscale {

CovarianceTracker::CovarianceTracker(int dim, int warmup_threshold)
    : dim_(dim),
      warmup_(warmup_threshold),
      mean_(Eigen::VectorXd::Zero(dim)),
      cov_(Eigen::MatrixXd::Zero(dim, dim)) {
  if (dim < 1) throw std::domain_error("CovarianceTracker: dim must be >= 1");
  if (warmup_threshold < 0)
    throw std::domain_error("CovarianceTracker: warmup_threshold must be >= 0");
}

void CovarianceTracker::update(const Eigen::VectorXd& x) {
  if (x.size() != dim_)
    throw std::invalid_argument("CovarianceTracker: state has wrong length");
  const double i = static_cast<double>(++count_);
  if (count_ == 1) {
    mean_ = x;
    return;
  }
  Eigen::VectorXd prev_mean = mean_;
  mean_ = ((i - 1.0) * prev_mean + x) / i;
  cov_ = ((i - 2.0) / (i - 1.0)) * cov_ + prev_mean * prev_mean.transpose() -
         (i / (i - 1.0)) * mean_ * mean_.transpose() +
         (1.0 / (i - 1.0)) * x * x.transpose();
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();  // shed rounding asymmetry
}

Eigen::MatrixXd CovarianceTracker::reported_cov() const {
  if (count_ <= warmup_) return Eigen::MatrixXd::Identity(dim_, dim_);
  return cov_;
}

Eigen::MatrixXd regularized_A(const CovarianceTracker& tracker, double sigma, int i) {
  if (i < 1) throw std::domain_error("regularized_A: i must be >= 1");
  if (!(sigma > 0.0)) throw std::domain_error("regularized_A: sigma must be positive");
  Eigen::MatrixXd a = tracker.reported_cov();
  a.diagonal().array() += sigma * sigma / static_cast<double>(i);
  return a;
}

}  // namespace rmscale
