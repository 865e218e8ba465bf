#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace rmscale {

struct RestartEvent {
  int step = 0;       // 1-based chain iteration at which the restart fired
  int direction = 0;  // +1 scale grew, -1 scale shrank
};

// Echo of how a chain was produced, carried on the trace so output files
// can embed it.
struct TraceMeta {
  std::string target;
  std::string method;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  int iters = 0;
  double p_star = 0.0;
  int m_star = 1;
  double sigma1 = 0.0;
};

// One chain.  states/accepted have one entry per iteration; sigma_path has
// iters + 1 entries: sigma_path[0] is the starting scale and sigma_path[t]
// the scale after iteration t, so .back() is the final estimate.  A
// rejected iteration stores a bit-exact copy of the previous state.
struct ChainTrace {
  std::vector<Eigen::VectorXd> states;
  std::vector<std::uint8_t> accepted;
  std::vector<double> sigma_path;
  std::vector<RestartEvent> restart_events;
  TraceMeta meta;
};

// One Metropolis-within-Gibbs chain: states are per sweep; acceptance and
// scale paths are kept per random-walk block (exact-conditional blocks have
// neither).  block_sigma follows the same prefix convention as ChainTrace.
struct MwgTrace {
  std::vector<Eigen::VectorXd> states;
  std::vector<std::string> block_names;
  std::vector<std::vector<std::uint8_t>> block_accepted;
  std::vector<std::vector<double>> block_sigma;
  std::vector<std::vector<RestartEvent>> block_restarts;
  TraceMeta meta;
};

}  // namespace rmscale
