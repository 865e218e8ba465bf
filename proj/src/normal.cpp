#include "rmscale/normal.hpp"

#include <cmath>
#include <stdexcept>

namespace rmscale {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;

// Acklam's rational approximation to the normal quantile (relative error
// below 1.2e-9 on its own; the Halley polish below takes it to machine
// precision).
double quantile_guess(double p) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;

  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double std_normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("std_normal_quantile: p must lie in (0, 1)");
  double x = quantile_guess(p);
  // Halley step on cdf(x) - p.  Skipped deep in the tails where the density
  // underflows; the rational guess is already ~1e-9 relative there.
  double pdf = std_normal_pdf(x);
  if (pdf > 1e-280) {
    double e = std_normal_cdf(x) - p;
    double u = e / pdf;
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double draw_std_normal(RngStream& rng) {
  return std_normal_quantile(rng.uniform());
}

void draw_std_normal(RngStream& rng, Eigen::VectorXd& out) {
  for (Eigen::Index k = 0; k < out.size(); ++k)
    out[k] = std_normal_quantile(rng.uniform());
}

double draw_exponential(RngStream& rng, double mean) {
  if (!(mean > 0.0))
    throw std::domain_error("draw_exponential: mean must be positive");
  return -mean * std::log1p(-rng.uniform());
}

double draw_gamma(RngStream& rng, double shape) {
  if (!(shape > 0.0))
    throw std::domain_error("draw_gamma: shape must be positive");
  if (shape < 1.0) {
    // Boost to shape + 1 and scale back by a uniform power.
    double u = rng.uniform();
    return draw_gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z = draw_std_normal(rng);
    double v = 1.0 + c * z;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = rng.uniform();
    if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return d * v;
  }
}

}  // namespace rmscale
