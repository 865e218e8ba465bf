#pragma once

#include <optional>

#include "rmscale/probability.hpp"

namespace rmscale {

enum class GainSchedule {
  kStandard,  // gain denominator is the search index i
  kSlowed,    // i up to 200, then max(200, i / dim); for high-dim proposals
};

struct RmConfig {
  Probability p_star;            // target acceptance probability, in (0, 1)
  int m_star = 1;                // effective dimension entering the steplength
  int dim = 1;                   // proposal dimension, divisor of the slowed gain
  GainSchedule schedule = GainSchedule::kStandard;
  std::optional<int> n0_override;  // pin the search start index
  double restart_factor = 3.0;
  int max_restarts_per_direction = 5;
  int no_restart_after_steps = 100;
};

// State of one scale search.  sigma is the current proposal scale; i is the
// virtual iteration driving the gain, which restarts rewind to n0.
struct RmSearchState {
  double sigma = 1.0;
  int i = 1;
  double sigma_at_restart = 1.0;
  int steps_since_restart = 0;
  int restarts_up = 0;
  int restarts_down = 0;
  bool restarts_frozen = false;
};

// Steplength proportionality constant c for the current scale: the gain that
// makes the search's asymptotic variance nearly optimal when the acceptance
// curve is not known.  Scales linearly with sigma.
struct SteplengthConstant {
  double value = 0.0;
};

// Search start index: the integer closest to 5 / (p*(1-p*)).  Starting the
// gain at i = n0 instead of 1 keeps the first few steps from being wild.
int n0(Probability p_star);

// alpha = -Phi^{-1}(p*/2); appears throughout the steplength formulas.
double alpha(Probability p_star);

// c = sigma * [ (1 - 1/m*) * sqrt(2*pi) * exp(alpha^2/2) / (2*alpha)
//             + 1 / (m* * p* * (1 - p*)) ].
// With m* = 1 this collapses to sigma / (p*(1-p*)).
SteplengthConstant steplength(double sigma, const RmConfig& cfg);

RmSearchState make_search_state(double sigma1, const RmConfig& cfg);

// One stochastic-approximation update after an accept/reject outcome:
//   sigma <- sigma + c(1-p*)/d   on acceptance,
//   sigma <- sigma - c p*/d      on rejection,
// where d follows cfg.schedule.  A non-positive result is replaced by
// sigma/2 so the scale stays positive.  Counters advance and the restart
// rule below is applied before returning.
RmSearchState rm_step(const RmSearchState& state, bool accepted, const RmConfig& cfg);

// Restart rule: when sigma has moved by restart_factor (inclusive, either
// direction) since the last (re)start, rewind i to n0 so the gain is large
// again.  Suppressed when more than no_restart_after_steps have elapsed
// since the last restart (the search is then assumed converged).  Each
// direction fires at most max_restarts_per_direction times; once both
// budgets are spent the state freezes and never restarts again.
RmSearchState restart_check(const RmSearchState& state, const RmConfig& cfg);

// Asymptotic efficiency of a search run with gain constant c relative to the
// optimal constant c*: (2c - c*) c* / c^2.  Requires c > c*/2 (the variance
// formula diverges at c = c*/2).
double efficiency(double c, double c_star);

}  // namespace rmscale
