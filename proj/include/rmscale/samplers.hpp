#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rmscale/chain_trace.hpp"
#include "rmscale/probability.hpp"
#include "rmscale/rng.hpp"
#include "rmscale/targets.hpp"

namespace rmscale {

enum class SamplerMethod {
  kRmAdaptive,    // scale tuned on the fly, proposal shape from the chain
  kOptimalFixed,  // 2.38^2/m times the true covariance, no adaptation
  kFixedScaling,  // 2.38^2/m scale, adaptive proposal shape
};

const char* sampler_method_name(SamplerMethod m);
std::optional<SamplerMethod> parse_sampler_method(const std::string& name);

struct SamplerOptions {
  double sigma1 = 1.0;             // starting scale for adaptive runs
  std::optional<int> n0_override;  // forwarded to the search config
  bool freeze_adaptation = false;  // hold scale and shape fixed (for tests)
  int cov_warmup = 100;            // tracker reports identity up to here
  int refactor_every = 1;          // proposal re-factorization cadence
  std::optional<Eigen::VectorXd> x0;  // overrides the default starting point
};

// One accept/reject decision.  Always consumes exactly one uniform, so the
// per-iteration draw count never depends on the outcome.  A proposal with
// log density -inf is rejected; a ratio >= 1 always accepts.
bool mh_accept(double logf_current, double logf_proposal, RngStream& rng);

// Scalar random-walk chain with the acceptance-rate search attached.
// Starting point is an exact-sampler draw from rng (targets without one
// start at a fixed in-support point).
ChainTrace run_univariate_tuned(const TargetModel& target, int iters, double sigma1,
                                Probability p_star, RngStream& rng,
                                const SamplerOptions& opts = {});

// Random-walk chain in m dimensions.  The rm-adaptive method runs the scale
// search on the slowed gain schedule and takes the proposal shape from the
// regularized chain covariance; the other two methods fix the scale at
// 2.38/sqrt(m).  optimal-fixed requires target.true_covariance.
ChainTrace run_multivariate(const TargetModel& target, SamplerMethod method,
                            int iters, Probability p_star, int m_star,
                            RngStream& rng, const SamplerOptions& opts = {});

enum class BlockKind {
  kRwmScalar,         // one coordinate, scale search at p* = 0.44
  kRwmVector,         // several coordinates, scale search at p* = 0.234
  kExactConditional,  // direct draw from the full conditional
};

inline constexpr double kScalarBlockPStar = 0.44;
inline constexpr double kVectorBlockPStar = 0.234;

struct GibbsBlock {
  std::string name;
  std::vector<int> indices;
  BlockKind kind = BlockKind::kRwmScalar;
  // For kExactConditional: maps the full current state to a fresh draw of
  // this block from its conditional distribution.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, RngStream&)> conditional_sampler;
};

struct GibbsBlockSpec {
  std::vector<GibbsBlock> blocks;
};

// Throws ConfigError unless the blocks partition 0..dim-1 and each block is
// well formed for its kind.
void validate_blocks(const GibbsBlockSpec& spec, int dim);

// Metropolis-within-Gibbs sweep sampler.  Blocks update in the given order
// once per sweep; every random-walk block carries its own scale search
// (and, for vector blocks, its own covariance tracker).  A single vector
// block spanning all coordinates reproduces run_multivariate's rm-adaptive
// chain draw for draw.
MwgTrace run_mwg(const TargetModel& target, const GibbsBlockSpec& blocks,
                 int iters, RngStream& rng, const SamplerOptions& opts = {});

}  // namespace rmscale
