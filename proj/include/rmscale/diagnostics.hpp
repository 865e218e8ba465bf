#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmscale/chain_trace.hpp"

namespace rmscale {

// Per-chain summary in the layout the experiment tables use.  Means, sd and
// the acceptance rate come from the second half of the chain (the first
// half is burn-in); act and asd deliberately use the full chain so they see
// the adaptation transient.
struct TraceSummary {
  std::string target;
  std::string method;
  int replicate = 0;
  double sigma2_mean = 0.0;  // mean of sigma^2, second half
  double oap = 0.0;          // observed acceptance, second half
  double mean_x1 = 0.0;
  double sd_x1 = 0.0;
  double act_x1 = 0.0;
  double asd_x1 = 0.0;
  double final_sigma = 0.0;
};

// Fraction of accepted moves in the half-open window [begin, end).
// Throws std::invalid_argument on an empty or out-of-range window.
double acceptance_rate(const std::vector<std::uint8_t>& accepted, int begin, int end);

// Integrated autocorrelation time 1 + 2 sum_k rho_k, truncated where the
// sum of an adjacent lag pair first turns non-positive (initial positive
// sequence rule).  Throws std::invalid_argument for series shorter than 4
// or with zero variance.
double act(const std::vector<double>& series);

// Mean squared displacement between consecutive states of one coordinate.
double asd(const std::vector<Eigen::VectorXd>& states, int coord);

// Quantiles by linear interpolation of order statistics (the "type 7" rule:
// h = (n-1)p).  probs must be in [0, 1]; values need not be sorted.
std::vector<double> replicate_quantiles(std::vector<double> values,
                                        const std::vector<double>& probs);

// Extracts one coordinate of a trace as a flat series.
std::vector<double> coordinate_series(const std::vector<Eigen::VectorXd>& states,
                                      int coord);

TraceSummary summarize(const ChainTrace& trace, int replicate);

}  // namespace rmscale
