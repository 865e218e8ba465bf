#pragma once

#include <Eigen/Core>

#include "rmscale/rng.hpp"

namespace rmscale {

// Standard normal cdf, absolute error below 1e-14 everywhere (erfc based).
double std_normal_cdf(double z);

// Standard normal density.
double std_normal_pdf(double z);

// Inverse of std_normal_cdf.  Rational initial guess polished by one Halley
// step on the cdf; round-trips through the cdf to ~1e-15 for p away from the
// extreme tails.  Throws std::domain_error unless 0 < p < 1.
double std_normal_quantile(double p);

// N(0,1) variate by inversion.  One uniform per draw, no rejection loop, so
// the draw count per stream is fixed and platform independent.
double draw_std_normal(RngStream& rng);

// Fills out with iid N(0,1) components.
void draw_std_normal(RngStream& rng, Eigen::VectorXd& out);

// Exponential variate with the given mean, by inversion.  Throws
// std::domain_error unless mean > 0.
double draw_exponential(RngStream& rng, double mean);

// Gamma(shape, 1) variate, shape > 0.  Marsaglia-Tsang squeeze; the
// rejection loop is a deterministic function of the stream.  Used by the
// conjugate variance draws, not by the samplers' proposal path.
double draw_gamma(RngStream& rng, double shape);

}  // namespace rmscale
