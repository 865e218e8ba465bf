#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "rmscale/probability.hpp"
#include "rmscale/rng.hpp"
#include "rmscale/targets.hpp"

namespace rmscale {

struct OracleEstimate {
  double value = 0.0;
  double se = 0.0;
  long n = 0;
};

// One point of a steplength-ratio curve: at target acceptance p_star the
// equilibrium scale is sigma_star and the optimal gain constant satisfies
// c*/sigma* = ratio.
struct CurvePoint {
  std::string target;
  int m = 1;
  int m_star = 1;
  double p_star = 0.0;
  double sigma_star = 0.0;
  double ratio = 0.0;
  double se_ratio = 0.0;
  long n = 0;
};

// Monte Carlo estimate of the stationary acceptance probability of a
// random-walk proposal N(x, sigma^2 A):
//   p(sigma) = E[ min{f(y)/f(x), 1} ],  x ~ target, y = x + sigma L z.
// Needs the target's exact sampler.
OracleEstimate estimate_p(const TargetModel& target, double sigma,
                          const Eigen::MatrixXd& a, long n, RngStream& rng);

// Same-draw estimate of dp/dsigma.  Differentiating the proposal kernel in
// sigma gives the weight (z'z - m)/sigma on each acceptance ratio, so no
// finite differencing is involved.
OracleEstimate estimate_dp_dsigma(const TargetModel& target, double sigma,
                                  const Eigen::MatrixXd& a, long n, RngStream& rng);

// Solves p(sigma) = p_star by bisection over a common set of random draws,
// so the bracketing function is a fixed, continuous function of sigma.  The
// initial bracket is [1e-3, 100] times a robust spread of the target sample
// (interquartile range over 1.349; heavy-tailed targets defeat the plain
// standard deviation), expanded geometrically as needed.  Throws
// BracketError when no bracket exists or the solution's acceptance estimate
// ends up further than 2 SE + 1e-3 from p_star.
double solve_sigma_star(const TargetModel& target, Probability p_star,
                        const Eigen::MatrixXd& a, long n, RngStream& rng);

// sigma_star and c*/sigma* for each target acceptance in p_grid, each point
// solved and then differentiated with fresh draws.  m_star is carried
// through to the output untouched (it parameterizes reference formulas, not
// the oracle itself).
std::vector<CurvePoint> ratio_curve(const TargetModel& target,
                                    const std::vector<double>& p_grid,
                                    const Eigen::MatrixXd& a, long n,
                                    RngStream& rng, int m_star);

// Both sides of the half-space identity behind the steplength theory:
// integrating lambda'(y-x) against dg/dsigma over the half space where
// lambda'(y-x) <= 0 equals 1/sigma times the integral against g itself.
// Estimated with coupled draws; pass tests |lhs - rhs| against 4 SE of the
// per-sample difference.
struct LemmaCheck {
  double lhs = 0.0, lhs_se = 0.0;
  double rhs = 0.0, rhs_se = 0.0;
  double diff = 0.0, diff_se = 0.0;
  bool pass = false;
};
LemmaCheck verify_lemma_A3(const Eigen::VectorXd& lambda, const Eigen::VectorXd& x,
                           const Eigen::MatrixXd& a, double sigma, long n,
                           RngStream& rng);

// Closed-form c*/sigma* for the idealized acceptance curve p(sigma) =
// 2 Phi(-beta sigma):  sqrt(2 pi) exp(alpha^2/2) / (2 alpha) with
// alpha = -Phi^{-1}(p*/2).  The m* -> inf limit of the steplength bracket.
double proposition4_ratio(Probability p_star);

}  // namespace rmscale
