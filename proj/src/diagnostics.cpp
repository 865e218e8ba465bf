#include "rmscale/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rmscale {

namespace {

double autocovariance(const std::vector<double>& x, double mean, int lag) {
  const int n = static_cast<int>(x.size());
  double s = 0.0;
  for (int t = 0; t + lag < n; ++t) s += (x[t] - mean) * (x[t + lag] - mean);
  return s / n;  // biased divisor keeps the spectral estimate stable
}

}  // namespace

double acceptance_rate(const std::vector<std::uint8_t>& accepted, int begin, int end) {
  if (begin < 0 || end > static_cast<int>(accepted.size()) || begin >= end)
    throw std::invalid_argument("acceptance_rate: bad window");
  long hits = 0;
  for (int t = begin; t < end; ++t) hits += accepted[t];
  return static_cast<double>(hits) / (end - begin);
}

double act(const std::vector<double>& series) {
  const int n = static_cast<int>(series.size());
  if (n < 4) throw std::invalid_argument("act: series too short");
  double mean = std::accumulate(series.begin(), series.end(), 0.0) / n;
  double c0 = autocovariance(series, mean, 0);
  if (!(c0 > 0.0)) throw std::invalid_argument("act: series has zero variance");

  // Sum rho over adjacent lag pairs (0,1), (2,3), ... while each pair sum
  // stays positive; for a reversible chain the pair sums are positive and
  // decreasing, so the first non-positive pair marks estimator noise.
  // tau = 2 * sum(pairs) - 1 accounts for rho_0 = 1 appearing in the first
  // pair.
  double tau = -1.0;
  for (int lag = 0; lag + 1 < n; lag += 2) {
    double pair = (autocovariance(series, mean, lag) +
                   autocovariance(series, mean, lag + 1)) / c0;
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  return std::max(tau, 1e-12);
}

double asd(const std::vector<Eigen::VectorXd>& states, int coord) {
  if (states.size() < 2)
    throw std::invalid_argument("asd: need at least two states");
  double s = 0.0;
  for (size_t t = 1; t < states.size(); ++t) {
    double d = states[t][coord] - states[t - 1][coord];
    s += d * d;
  }
  return s / static_cast<double>(states.size() - 1);
}

std::vector<double> replicate_quantiles(std::vector<double> values,
                                        const std::vector<double>& probs) {
  if (values.empty())
    throw std::invalid_argument("replicate_quantiles: no values");
  std::sort(values.begin(), values.end());
  const int n = static_cast<int>(values.size());
  std::vector<double> out;
  out.reserve(probs.size());
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("replicate_quantiles: prob outside [0, 1]");
    double h = (n - 1) * p;
    int lo = static_cast<int>(std::floor(h));
    int hi = std::min(lo + 1, n - 1);
    out.push_back(values[lo] + (h - lo) * (values[hi] - values[lo]));
  }
  return out;
}

std::vector<double> coordinate_series(const std::vector<Eigen::VectorXd>& states,
                                      int coord) {
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s[coord]);
  return out;
}

TraceSummary summarize(const ChainTrace& trace, int replicate) {
  const int n = static_cast<int>(trace.states.size());
  if (n < 4) throw std::invalid_argument("summarize: trace too short");
  const int half = n / 2;

  TraceSummary s;
  s.target = trace.meta.target;
  s.method = trace.meta.method;
  s.replicate = replicate;

  double s2 = 0.0;
  for (int t = half; t < n; ++t) {
    // sigma_path[t + 1] is the scale after iteration t + 1; entries half+1
    // .. n cover the second half of the run.
    double sig = trace.sigma_path[t + 1];
    s2 += sig * sig;
  }
  s.sigma2_mean = s2 / (n - half);
  s.oap = acceptance_rate(trace.accepted, half, n);

  double m = 0.0;
  for (int t = half; t < n; ++t) m += trace.states[t][0];
  m /= (n - half);
  double v = 0.0;
  for (int t = half; t < n; ++t) {
    double d = trace.states[t][0] - m;
    v += d * d;
  }
  s.mean_x1 = m;
  s.sd_x1 = std::sqrt(v / (n - half - 1));

  s.act_x1 = act(coordinate_series(trace.states, 0));
  s.asd_x1 = asd(trace.states, 0);
  s.final_sigma = trace.sigma_path.back();
  return s;
}

}  // namespace rmscale
