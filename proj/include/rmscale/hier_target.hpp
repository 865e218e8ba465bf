#pragma once

#include <cstdint>

#include "rmscale/samplers.hpp"
#include "rmscale/targets.hpp"

namespace rmscale {

// Synthetic Gaussian hierarchical regression used by the mwg-demo command:
//   y_i = x_i' beta + z_i' u + U_{g(i)} + eps_i,     eps_i ~ N(0, 1)
//   U_g ~ N(0, gv),  u_j ~ N(0, kv),  beta_j ~ N(0, coef_prior_var)
//   gv ~ InvGamma(group_var_shape, group_var_scale), kv ~ InvGamma(...)
// Design entries and the data are generated from `seed`.  The state vector
// is [U_1..U_G, beta, u, gv, kv].  Both variances are conjugate given the
// effects they govern, so they get exact-conditional blocks.
struct HierTargetSpec {
  int n_groups = 20;
  int coef_dim = 3;
  int knot_dim = 5;
  int obs_per_group = 5;
  double coef_prior_var = 100.0;
  double group_var_shape = 0.01;
  double group_var_scale = 0.01;
  double knot_var_shape = 0.01;
  double knot_var_scale = 0.01;
};

enum class MwgScheme {
  kFullConditional,   // every effect coordinate is its own scalar block
  kBlockConditional,  // scalar group effects, vector beta and u blocks
};

struct HierModel {
  TargetModel target;
  GibbsBlockSpec blocks;
  Eigen::VectorXd start;  // valid in-support starting state
  HierTargetSpec spec;
  // State layout.
  int group_offset = 0;
  int coef_offset = 0;
  int knot_offset = 0;
  int group_var_index = 0;
  int knot_var_index = 0;
  // Synthetic data, kept for tests.
  Eigen::MatrixXd x_design;
  Eigen::MatrixXd z_design;
  Eigen::VectorXd y;
  std::vector<int> group_of_obs;
};

// Throws ConfigError unless every dimension in the spec is >= 1 and the
// hyperparameters are positive.
HierModel make_hier_target(const HierTargetSpec& spec, MwgScheme scheme,
                           std::uint64_t seed);

// Posterior parameters of an inverse-gamma variance given iid N(0, v)
// values: shape + count/2 and scale + sum_of_squares/2.  Exposed for tests.
struct InvGammaPosterior {
  double shape = 0.0;
  double scale = 0.0;
};
InvGammaPosterior variance_conditional(double prior_shape, double prior_scale,
                                       const Eigen::VectorXd& effects);

// InvGamma(shape, scale) draw: scale divided by a Gamma(shape, 1) draw.
double draw_inverse_gamma(RngStream& rng, double shape, double scale);

}  // namespace rmscale
