#include "rmscale/targets.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "rmscale/cholesky.hpp"
#include "rmscale/errors.hpp"
#include "rmscale/normal.hpp"

namespace rmscale {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPi = 3.141592653589793;

void check_dim(const Eigen::VectorXd& x, int dim, const std::string& who) {
  if (x.size() != dim)
    throw std::invalid_argument(who + ": state has wrong length");
}

double logsumexp2(double a, double b) {
  double hi = a > b ? a : b;
  double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

// Gamma(shape, 1) for small integer shape as a sum of exponentials: a fixed
// number of uniforms per draw.
double gamma_int(RngStream& rng, int shape) {
  double s = 0.0;
  for (int k = 0; k < shape; ++k) s += draw_exponential(rng, 1.0);
  return s;
}

double logf_normal(double x) { return -0.5 * x * x; }
double logf_t5(double x) { return -3.0 * std::log1p(x * x / 5.0); }
double logf_cauchy(double x) { return -std::log1p(x * x); }
double logf_uniform(double x) { return (x > 0.0 && x < 1.0) ? 0.0 : kNegInf; }
double logf_logistic(double x) {
  double a = std::fabs(x);
  return -a - 2.0 * std::log1p(std::exp(-a));
}
double logf_dexp(double x) { return -std::fabs(x); }
double logf_gamma51(double x) {
  return x > 0.0 ? 4.0 * std::log(x) - x : kNegInf;
}
double logf_beta37(double x) {
  return (x > 0.0 && x < 1.0) ? 2.0 * std::log(x) + 6.0 * std::log1p(-x) : kNegInf;
}
// 0.5 N(0,1) + 0.5 N(5,5); the 5 is a variance, so sd = sqrt(5).  The
// common 0.5/sqrt(2 pi) factor is dropped; the sqrt(1/5) on the wide
// component is not, since relative weights matter.
double logf_mixture(double x) {
  double a = -0.5 * x * x;
  double b = -0.1 * (x - 5.0) * (x - 5.0) - 0.5 * std::log(5.0);
  return logsumexp2(a, b);
}

double draw_normal1(RngStream& r) { return draw_std_normal(r); }
double draw_t5(RngStream& r) {
  double z = draw_std_normal(r);
  double w = 0.0;
  for (int k = 0; k < 5; ++k) {
    double u = draw_std_normal(r);
    w += u * u;
  }
  return z * std::sqrt(5.0 / w);
}
double draw_cauchy(RngStream& r) { return std::tan(kPi * (r.uniform() - 0.5)); }
double draw_uniform(RngStream& r) { return r.uniform(); }
double draw_logistic(RngStream& r) {
  double u = r.uniform();
  return std::log(u) - std::log1p(-u);
}
double draw_dexp(RngStream& r) {
  double u = r.uniform();
  return u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
}
double draw_gamma51(RngStream& r) { return gamma_int(r, 5); }
double draw_beta37(RngStream& r) {
  double g1 = gamma_int(r, 3);
  double g2 = gamma_int(r, 7);
  return g1 / (g1 + g2);
}
double draw_mixture(RngStream& r) {
  bool wide = r.uniform() >= 0.5;
  double z = draw_std_normal(r);
  return wide ? 5.0 + std::sqrt(5.0) * z : z;
}

struct ScalarParts {
  double (*logf)(double);
  double (*draw)(RngStream&);
  Support support;
  std::optional<double> mean;
  std::optional<double> variance;
};

ScalarParts scalar_parts(const std::string& name) {
  if (name == "normal")
    return {logf_normal, draw_normal1, Support::kRealLine, 0.0, 1.0};
  if (name == "t5")
    return {logf_t5, draw_t5, Support::kRealLine, 0.0, 5.0 / 3.0};
  if (name == "cauchy")
    return {logf_cauchy, draw_cauchy, Support::kRealLine, {}, {}};
  if (name == "uniform")
    return {logf_uniform, draw_uniform, Support::kUnitBox, 0.5, 1.0 / 12.0};
  if (name == "logistic")
    return {logf_logistic, draw_logistic, Support::kRealLine, 0.0, kPi * kPi / 3.0};
  if (name == "double-exponential")
    return {logf_dexp, draw_dexp, Support::kRealLine, 0.0, 2.0};
  if (name == "gamma-5-1")
    return {logf_gamma51, draw_gamma51, Support::kHalfLine, 5.0, 5.0};
  if (name == "beta-3-7")
    return {logf_beta37, draw_beta37, Support::kUnitBox, 0.3, 21.0 / 1100.0};
  if (name == "normal-mixture")
    return {logf_mixture, draw_mixture, Support::kRealLine, 2.5,
            9.25 /* mean of variances + variance of means */};
  throw ConfigError("unknown univariate target: " + name);
}

}  // namespace

const std::vector<std::string>& univariate_target_names() {
  static const std::vector<std::string> names = {
      "normal",        "t5",       "cauchy",   "uniform", "logistic",
      "double-exponential", "gamma-5-1", "beta-3-7", "normal-mixture"};
  return names;
}

TargetModel make_univariate(const std::string& name) {
  ScalarParts parts = scalar_parts(name);
  TargetModel t;
  t.name = name;
  t.dim = 1;
  t.support = parts.support;
  t.coord_mean = parts.mean;
  t.coord_variance = parts.variance;
  t.log_density_unnorm = [logf = parts.logf, name](const Eigen::VectorXd& x) {
    check_dim(x, 1, name);
    return logf(x[0]);
  };
  t.exact_sampler = [draw = parts.draw](RngStream& rng) {
    Eigen::VectorXd x(1);
    x[0] = draw(rng);
    return x;
  };
  return t;
}

TargetModel make_product_form(const std::string& component, int m) {
  if (m < 1) throw ConfigError("make_product_form: m must be >= 1");
  ScalarParts parts = scalar_parts(component);
  TargetModel t;
  t.name = component + "-product-" + std::to_string(m);
  t.dim = m;
  t.support = parts.support;
  t.coord_mean = parts.mean;
  t.coord_variance = parts.variance;
  if (parts.variance)
    t.true_covariance = (*parts.variance) * Eigen::MatrixXd::Identity(m, m);
  t.log_density_unnorm = [logf = parts.logf, m, name = t.name](const Eigen::VectorXd& x) {
    check_dim(x, m, name);
    double s = 0.0;
    for (int k = 0; k < m; ++k) {
      s += logf(x[k]);
      if (s == kNegInf) return kNegInf;
    }
    return s;
  };
  t.exact_sampler = [draw = parts.draw, m](RngStream& rng) {
    Eigen::VectorXd x(m);
    for (int k = 0; k < m; ++k) x[k] = draw(rng);
    return x;
  };
  return t;
}

TargetModel make_mvn_random_cov(int m, std::uint64_t cov_seed,
                                bool better_conditioned) {
  if (m < 1) throw ConfigError("make_mvn_random_cov: m must be >= 1");
  Eigen::MatrixXd mat(m, m);
  RngStream rng(cov_seed, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) mat(i, j) = draw_std_normal(rng);
  Eigen::MatrixXd sigma = mat * mat.transpose();
  if (better_conditioned) sigma.diagonal() *= 1.01;
  Eigen::MatrixXd l = cholesky(sigma);

  TargetModel t;
  t.name = std::string("mvn-random-cov-") +
           (better_conditioned ? "better-" : "ill-") + std::to_string(m);
  t.dim = m;
  t.support = Support::kRealLine;
  t.true_covariance = sigma;
  t.coord_mean = 0.0;
  t.log_density_unnorm = [l, m, name = t.name](const Eigen::VectorXd& x) {
    check_dim(x, m, name);
    Eigen::VectorXd z = l.triangularView<Eigen::Lower>().solve(x);
    return -0.5 * z.squaredNorm();
  };
  t.exact_sampler = [l, m](RngStream& rng) {
    Eigen::VectorXd z(m);
    draw_std_normal(rng, z);
    return Eigen::VectorXd(l * z);
  };
  return t;
}

TargetModel make_multivariate_t(int m, double dof) {
  if (m < 1) throw ConfigError("make_multivariate_t: m must be >= 1");
  if (!(dof > 0.0)) throw ConfigError("make_multivariate_t: dof must be positive");
  char dof_txt[32];
  std::snprintf(dof_txt, sizeof dof_txt, "%g", dof);
  TargetModel t;
  t.name = "mvt-" + std::to_string(m) + "-dof-" + dof_txt;
  t.dim = m;
  t.support = Support::kRealLine;
  if (dof > 1.0) t.coord_mean = 0.0;
  if (dof > 2.0) {
    t.coord_variance = dof / (dof - 2.0);
    t.true_covariance = (*t.coord_variance) * Eigen::MatrixXd::Identity(m, m);
  }
  t.log_density_unnorm = [m, dof, name = t.name](const Eigen::VectorXd& x) {
    check_dim(x, m, name);
    return -0.5 * (dof + m) * std::log1p(x.squaredNorm() / dof);
  };
  t.exact_sampler = [m, dof](RngStream& rng) {
    Eigen::VectorXd z(m);
    draw_std_normal(rng, z);
    double w = 2.0 * draw_gamma(rng, 0.5 * dof);
    return Eigen::VectorXd(z * std::sqrt(dof / w));
  };
  return t;
}

Eigen::VectorXd initial_state(const TargetModel& target, RngStream& rng) {
  if (target.exact_sampler) return target.exact_sampler(rng);
  double fill = 0.0;
  if (target.support == Support::kHalfLine) fill = 1.0;
  if (target.support == Support::kUnitBox) fill = 0.5;
  return Eigen::VectorXd::Constant(target.dim, fill);
}

}  // namespace rmscale
