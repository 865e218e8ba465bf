#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rmscale/rng.hpp"

namespace rmscale {

enum class Support {
  kRealLine,   // all of R^m
  kHalfLine,   // every coordinate > 0
  kUnitBox,    // every coordinate in (0, 1)
};

// A target density known up to a constant, plus whatever side information a
// target honestly has: an exact sampler when one exists (every catalog
// entry has one), the true covariance when it is known in closed form, and
// per-coordinate moments for checks.  log_density_unnorm returns -inf
// outside the support and never NaN for finite input of the right length.
struct TargetModel {
  std::string name;
  int dim = 1;
  Support support = Support::kRealLine;
  std::function<double(const Eigen::VectorXd&)> log_density_unnorm;
  std::function<Eigen::VectorXd(RngStream&)> exact_sampler;  // may be empty
  std::optional<Eigen::MatrixXd> true_covariance;
  std::optional<double> coord_mean;      // per-coordinate, when finite/known
  std::optional<double> coord_variance;  // per-coordinate, when finite/known
};

// Names understood by make_univariate: "normal", "t5", "cauchy", "uniform",
// "logistic", "double-exponential", "gamma-5-1", "beta-3-7",
// "normal-mixture" (0.5 N(0,1) + 0.5 N(5, 5), 5 being the variance).
const std::vector<std::string>& univariate_target_names();

// One-dimensional catalog entry.  Throws ConfigError for unknown names.
TargetModel make_univariate(const std::string& name);

// Product of m iid copies of a univariate catalog component.
TargetModel make_product_form(const std::string& component, int m);

// Zero-mean MVN whose covariance is M M' with M an m x m matrix of iid
// N(0,1) entries generated from cov_seed; typically badly conditioned.
// When better_conditioned is set, every diagonal element is inflated by 1%,
// which tames the small eigenvalues.
TargetModel make_mvn_random_cov(int m, std::uint64_t cov_seed, bool better_conditioned);

// Spherical multivariate t with dof degrees of freedom:
// log f# = -((dof + m)/2) log(1 + x'x / dof).
TargetModel make_multivariate_t(int m, double dof);

// Starting point for a chain: an exact-sampler draw when the target has
// one, otherwise a deterministic point inside the support.
Eigen::VectorXd initial_state(const TargetModel& target, RngStream& rng);

}  // namespace rmscale
