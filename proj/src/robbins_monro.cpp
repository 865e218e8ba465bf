#include "rmscale/robbins_monro.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rmscale/normal.hpp"

namespace rmscale {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

void validate(const RmConfig& cfg) {
  double p = cfg.p_star.value();
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("RmConfig: p_star must lie strictly in (0, 1)");
  if (cfg.m_star < 1) throw std::domain_error("RmConfig: m_star must be >= 1");
  if (cfg.dim < 1) throw std::domain_error("RmConfig: dim must be >= 1");
  if (cfg.n0_override && *cfg.n0_override < 1)
    throw std::domain_error("RmConfig: n0_override must be >= 1");
}

int start_index(const RmConfig& cfg) {
  return cfg.n0_override ? *cfg.n0_override : n0(cfg.p_star);
}

}  // namespace

int n0(Probability p_star) {
  double p = p_star.value();
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("n0: p_star must lie strictly in (0, 1)");
  return std::max(1, static_cast<int>(std::lround(5.0 / (p * (1.0 - p)))));
}

double alpha(Probability p_star) {
  double p = p_star.value();
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("alpha: p_star must lie strictly in (0, 1)");
  return -std_normal_quantile(0.5 * p);
}

SteplengthConstant steplength(double sigma, const RmConfig& cfg) {
  validate(cfg);
  if (!(sigma > 0.0)) throw std::domain_error("steplength: sigma must be positive");
  double p = cfg.p_star.value();
  double a = alpha(cfg.p_star);
  double m = static_cast<double>(cfg.m_star);
  double bracket = (1.0 - 1.0 / m) * kSqrt2Pi * std::exp(0.5 * a * a) / (2.0 * a) +
                   1.0 / (m * p * (1.0 - p));
  return SteplengthConstant{sigma * bracket};
}

RmSearchState make_search_state(double sigma1, const RmConfig& cfg) {
  validate(cfg);
  if (!(sigma1 > 0.0))
    throw std::domain_error("make_search_state: sigma1 must be positive");
  RmSearchState s;
  s.sigma = sigma1;
  s.i = start_index(cfg);
  s.sigma_at_restart = sigma1;
  s.steps_since_restart = 0;
  return s;
}

RmSearchState rm_step(const RmSearchState& state, bool accepted, const RmConfig& cfg) {
  double p = cfg.p_star.value();
  double c = steplength(state.sigma, cfg).value;

  double d = static_cast<double>(state.i);
  if (cfg.schedule == GainSchedule::kSlowed && state.i > 200)
    d = std::max(200.0, static_cast<double>(state.i) / cfg.dim);

  RmSearchState next = state;
  next.sigma = accepted ? state.sigma + c * (1.0 - p) / d
                        : state.sigma - c * p / d;
  if (!(next.sigma > 0.0)) next.sigma = 0.5 * state.sigma;
  next.i = state.i + 1;
  next.steps_since_restart = state.steps_since_restart + 1;
  return restart_check(next, cfg);
}

RmSearchState restart_check(const RmSearchState& state, const RmConfig& cfg) {
  if (state.restarts_frozen) return state;
  if (state.steps_since_restart > cfg.no_restart_after_steps) return state;

  double ratio = state.sigma / state.sigma_at_restart;
  bool up = ratio >= cfg.restart_factor &&
            state.restarts_up < cfg.max_restarts_per_direction;
  bool down = ratio <= 1.0 / cfg.restart_factor &&
              state.restarts_down < cfg.max_restarts_per_direction;
  if (!up && !down) return state;

  RmSearchState next = state;
  if (up)
    next.restarts_up = state.restarts_up + 1;
  else
    next.restarts_down = state.restarts_down + 1;
  next.i = start_index(cfg);
  next.sigma_at_restart = state.sigma;
  next.steps_since_restart = 0;
  if (next.restarts_up >= cfg.max_restarts_per_direction &&
      next.restarts_down >= cfg.max_restarts_per_direction)
    next.restarts_frozen = true;
  return next;
}

double efficiency(double c, double c_star) {
  if (!(c_star > 0.0)) throw std::domain_error("efficiency: c_star must be positive");
  if (!(c > 0.5 * c_star))
    throw std::domain_error("efficiency: requires c > c_star / 2");
  return (2.0 * c - c_star) * c_star / (c * c);
}

}  // namespace rmscale
