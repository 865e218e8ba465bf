#include "rmscale/samplers.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <set>

#include "rmscale/cholesky.hpp"
#include "rmscale/covariance.hpp"
#include "rmscale/errors.hpp"
#include "rmscale/normal.hpp"
#include "rmscale/robbins_monro.hpp"

namespace rmscale {

namespace {

constexpr double kFixedScaleNumerator = 2.38;

void check_iters(int iters) {
  if (iters < 0) throw ConfigError("iteration count must be >= 0");
}

double require_logf(const TargetModel& target, const Eigen::VectorXd& x) {
  double v = target.log_density_unnorm(x);
  if (!(v > -std::numeric_limits<double>::infinity()))
    throw ConfigError("starting point has zero target density: " + target.name);
  return v;
}

Eigen::VectorXd starting_point(const TargetModel& target, RngStream& rng,
                               const SamplerOptions& opts) {
  if (!opts.x0) return initial_state(target, rng);
  if (opts.x0->size() != target.dim)
    throw ConfigError("starting point has wrong length for " + target.name);
  return *opts.x0;
}

// Appends the post-update scale and any restart that fired this step.
void advance_search(RmSearchState& rm, bool accepted, const RmConfig& cfg, int step,
                    std::vector<RestartEvent>& events) {
  RmSearchState next = rm_step(rm, accepted, cfg);
  if (next.restarts_up > rm.restarts_up) events.push_back({step, +1});
  if (next.restarts_down > rm.restarts_down) events.push_back({step, -1});
  rm = next;
}

}  // namespace

const char* sampler_method_name(SamplerMethod m) {
  switch (m) {
    case SamplerMethod::kRmAdaptive: return "rm-adaptive";
    case SamplerMethod::kOptimalFixed: return "optimal-fixed";
    case SamplerMethod::kFixedScaling: return "fixed-scaling";
  }
  return "?";
}

std::optional<SamplerMethod> parse_sampler_method(const std::string& name) {
  if (name == "rm-adaptive") return SamplerMethod::kRmAdaptive;
  if (name == "optimal-fixed") return SamplerMethod::kOptimalFixed;
  if (name == "fixed-scaling") return SamplerMethod::kFixedScaling;
  return std::nullopt;
}

bool mh_accept(double logf_current, double logf_proposal, RngStream& rng) {
  double u = rng.uniform();
  return std::log(u) < logf_proposal - logf_current;
}

ChainTrace run_univariate_tuned(const TargetModel& target, int iters, double sigma1,
                                Probability p_star, RngStream& rng,
                                const SamplerOptions& opts) {
  if (target.dim != 1)
    throw ConfigError("run_univariate_tuned: target must be one-dimensional");
  check_iters(iters);

  RmConfig cfg{p_star};
  cfg.n0_override = opts.n0_override;
  RmSearchState rm = make_search_state(sigma1, cfg);

  ChainTrace tr;
  tr.meta = {target.name, "rm-univariate", rng.seed(), rng.stream_id(),
             iters,       p_star.value(),  1,          sigma1};
  tr.states.reserve(iters);
  tr.accepted.reserve(iters);
  tr.sigma_path.reserve(iters + 1);
  tr.sigma_path.push_back(rm.sigma);

  Eigen::VectorXd x = starting_point(target, rng, opts);
  double logf_x = require_logf(target, x);
  Eigen::VectorXd y(1);
  for (int t = 1; t <= iters; ++t) {
    y[0] = x[0] + rm.sigma * draw_std_normal(rng);
    double logf_y = target.log_density_unnorm(y);
    bool acc = mh_accept(logf_x, logf_y, rng);
    if (acc) {
      x[0] = y[0];
      logf_x = logf_y;
    }
    if (!opts.freeze_adaptation)
      advance_search(rm, acc, cfg, t, tr.restart_events);
    tr.states.push_back(x);
    tr.accepted.push_back(acc ? 1 : 0);
    tr.sigma_path.push_back(rm.sigma);
  }
  return tr;
}

ChainTrace run_multivariate(const TargetModel& target, SamplerMethod method,
                            int iters, Probability p_star, int m_star,
                            RngStream& rng, const SamplerOptions& opts) {
  check_iters(iters);
  const int m = target.dim;

  RmConfig cfg{p_star};
  cfg.m_star = m_star;
  cfg.dim = m;
  cfg.schedule = GainSchedule::kSlowed;
  cfg.n0_override = opts.n0_override;

  const bool adapt_sigma = method == SamplerMethod::kRmAdaptive;
  const bool adapt_cov = method != SamplerMethod::kOptimalFixed;
  const double fixed_sigma = kFixedScaleNumerator / std::sqrt(static_cast<double>(m));

  RmSearchState rm = make_search_state(
      adapt_sigma ? opts.sigma1 : fixed_sigma, cfg);

  ChainTrace tr;
  tr.meta = {target.name, sampler_method_name(method), rng.seed(),
             rng.stream_id(), iters, p_star.value(), m_star, rm.sigma};
  tr.states.reserve(iters);
  tr.accepted.reserve(iters);
  tr.sigma_path.reserve(iters + 1);
  tr.sigma_path.push_back(rm.sigma);

  Eigen::VectorXd x = starting_point(target, rng, opts);
  double logf_x = require_logf(target, x);

  CovarianceTracker tracker(m, opts.cov_warmup);
  Eigen::MatrixXd chol_factor;
  if (method == SamplerMethod::kOptimalFixed) {
    if (!target.true_covariance)
      throw ConfigError("optimal-fixed needs a target with known covariance: " +
                        target.name);
    chol_factor = cholesky(*target.true_covariance);
  } else {
    tracker.update(x);
    chol_factor = cholesky(regularized_A(tracker, rm.sigma, tracker.count()));
  }

  Eigen::VectorXd z(m), y(m);
  for (int t = 1; t <= iters; ++t) {
    if (adapt_cov && !opts.freeze_adaptation &&
        (t == 1 || (t - 1) % opts.refactor_every == 0))
      chol_factor = cholesky(regularized_A(tracker, rm.sigma, tracker.count()));

    draw_std_normal(rng, z);
    y = x + rm.sigma * (chol_factor * z);
    double logf_y = target.log_density_unnorm(y);
    bool acc = mh_accept(logf_x, logf_y, rng);
    if (acc) {
      x.swap(y);
      logf_x = logf_y;
    }
    if (adapt_sigma && !opts.freeze_adaptation)
      advance_search(rm, acc, cfg, t, tr.restart_events);
    if (adapt_cov && !opts.freeze_adaptation) tracker.update(x);

    tr.states.push_back(x);
    tr.accepted.push_back(acc ? 1 : 0);
    tr.sigma_path.push_back(rm.sigma);
  }
  return tr;
}

void validate_blocks(const GibbsBlockSpec& spec, int dim) {
  if (spec.blocks.empty()) throw ConfigError("block spec is empty");
  std::set<int> seen;
  for (const auto& b : spec.blocks) {
    if (b.indices.empty())
      throw ConfigError("block '" + b.name + "' has no coordinates");
    if (b.kind == BlockKind::kRwmScalar && b.indices.size() != 1)
      throw ConfigError("scalar block '" + b.name + "' must hold one coordinate");
    if (b.kind == BlockKind::kExactConditional && !b.conditional_sampler)
      throw ConfigError("exact block '" + b.name + "' has no conditional sampler");
    for (int idx : b.indices) {
      if (idx < 0 || idx >= dim)
        throw ConfigError("block '" + b.name + "' indexes outside the state");
      if (!seen.insert(idx).second)
        throw ConfigError("coordinate appears in two blocks");
    }
  }
  if (static_cast<int>(seen.size()) != dim)
    throw ConfigError("blocks do not cover every coordinate");
}

MwgTrace run_mwg(const TargetModel& target, const GibbsBlockSpec& spec,
                 int iters, RngStream& rng, const SamplerOptions& opts) {
  check_iters(iters);
  validate_blocks(spec, target.dim);
  const int nblocks = static_cast<int>(spec.blocks.size());

  MwgTrace tr;
  tr.meta = {target.name, "mwg", rng.seed(), rng.stream_id(),
             iters,       0.0,   0,          opts.sigma1};
  tr.states.reserve(iters);
  tr.block_names.resize(nblocks);
  tr.block_accepted.resize(nblocks);
  tr.block_sigma.resize(nblocks);
  tr.block_restarts.resize(nblocks);

  Eigen::VectorXd x = starting_point(target, rng, opts);
  double logf_x = require_logf(target, x);

  struct BlockState {
    RmConfig cfg{Probability(0.5)};
    RmSearchState rm;
    std::unique_ptr<CovarianceTracker> tracker;
    Eigen::MatrixXd chol_factor;
    bool random_walk = false;
  };
  std::vector<BlockState> bs(nblocks);
  for (int b = 0; b < nblocks; ++b) {
    const GibbsBlock& blk = spec.blocks[b];
    tr.block_names[b] = blk.name;
    if (blk.kind == BlockKind::kExactConditional) continue;
    BlockState& s = bs[b];
    s.random_walk = true;
    const int bdim = static_cast<int>(blk.indices.size());
    if (blk.kind == BlockKind::kRwmScalar) {
      s.cfg = RmConfig{Probability(kScalarBlockPStar)};
    } else {
      s.cfg = RmConfig{Probability(kVectorBlockPStar)};
      s.cfg.m_star = bdim;
      s.cfg.dim = bdim;
      s.cfg.schedule = GainSchedule::kSlowed;
      s.tracker = std::make_unique<CovarianceTracker>(bdim, opts.cov_warmup);
      Eigen::VectorXd xb(bdim);
      for (int k = 0; k < bdim; ++k) xb[k] = x[blk.indices[k]];
      s.tracker->update(xb);
    }
    s.cfg.n0_override = opts.n0_override;
    s.rm = make_search_state(opts.sigma1, s.cfg);
    tr.block_sigma[b].reserve(iters + 1);
    tr.block_sigma[b].push_back(s.rm.sigma);
    tr.block_accepted[b].reserve(iters);
  }

  Eigen::VectorXd y(target.dim);
  for (int t = 1; t <= iters; ++t) {
    for (int b = 0; b < nblocks; ++b) {
      const GibbsBlock& blk = spec.blocks[b];
      if (blk.kind == BlockKind::kExactConditional) {
        Eigen::VectorXd draw = blk.conditional_sampler(x, rng);
        if (draw.size() != static_cast<Eigen::Index>(blk.indices.size()))
          throw ConfigError("conditional draw has wrong length: " + blk.name);
        for (size_t k = 0; k < blk.indices.size(); ++k) x[blk.indices[k]] = draw[k];
        logf_x = target.log_density_unnorm(x);
        continue;
      }

      BlockState& s = bs[b];
      y = x;
      if (blk.kind == BlockKind::kRwmScalar) {
        y[blk.indices[0]] += s.rm.sigma * draw_std_normal(rng);
      } else {
        const int bdim = static_cast<int>(blk.indices.size());
        if (!opts.freeze_adaptation && (t == 1 || (t - 1) % opts.refactor_every == 0))
          s.chol_factor =
              cholesky(regularized_A(*s.tracker, s.rm.sigma, s.tracker->count()));
        Eigen::VectorXd z(bdim);
        draw_std_normal(rng, z);
        Eigen::VectorXd step = s.rm.sigma * (s.chol_factor * z);
        for (int k = 0; k < bdim; ++k) y[blk.indices[k]] += step[k];
      }
      double logf_y = target.log_density_unnorm(y);
      bool acc = mh_accept(logf_x, logf_y, rng);
      if (acc) {
        x.swap(y);
        logf_x = logf_y;
      }
      if (!opts.freeze_adaptation)
        advance_search(s.rm, acc, s.cfg, t, tr.block_restarts[b]);
      if (s.tracker && !opts.freeze_adaptation) {
        const int bdim = static_cast<int>(blk.indices.size());
        Eigen::VectorXd xb(bdim);
        for (int k = 0; k < bdim; ++k) xb[k] = x[blk.indices[k]];
        s.tracker->update(xb);
      }
      tr.block_accepted[b].push_back(acc ? 1 : 0);
      tr.block_sigma[b].push_back(s.rm.sigma);
    }
    tr.states.push_back(x);
  }
  return tr;
}

}  // namespace rmscale
