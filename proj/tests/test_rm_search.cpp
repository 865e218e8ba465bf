#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rmscale/rng.hpp"
#include "rmscale/robbins_monro.hpp"

using namespace rmscale;

namespace {

RmConfig scalar_config(double p) {
  RmConfig cfg{Probability(p)};
  return cfg;
}

}  // namespace

TEST_CASE("n0 rounds 5 / (p*(1-p*))") {
  CHECK(n0(Probability(0.44)) == 20);
  CHECK(n0(Probability(0.5)) == 20);
  CHECK(n0(Probability(0.234)) == 28);
  CHECK(n0(Probability(0.02)) == 255);
  CHECK_THROWS_AS(n0(Probability(0.0)), std::domain_error);
  CHECK_THROWS_AS(n0(Probability(1.0)), std::domain_error);
}

TEST_CASE("alpha is the two-sided normal quantile of p*/2") {
  CHECK(alpha(Probability(0.234)) == doctest::Approx(1.190118041896423).epsilon(1e-12));
  CHECK(alpha(Probability(0.44)) == doctest::Approx(0.772193214188685).epsilon(1e-12));
  CHECK(alpha(Probability(0.5)) == doctest::Approx(0.674489750196082).epsilon(1e-12));
}

TEST_CASE("steplength collapses to sigma / (p*(1-p*)) when m* = 1") {
  RmConfig cfg = scalar_config(0.44);
  CHECK(steplength(1.0, cfg).value ==
        doctest::Approx(4.058441558441558).epsilon(1e-12));
  CHECK(steplength(2.0, cfg).value ==
        doctest::Approx(8.116883116883117).epsilon(1e-12));
  // Exact linearity in sigma: the bracket does not depend on sigma.
  CHECK(steplength(2.0, cfg).value == 2.0 * steplength(1.0, cfg).value);
}

TEST_CASE("steplength with m* = 50 matches the frozen reference value") {
  RmConfig cfg = scalar_config(0.234);
  cfg.m_star = 50;
  CHECK(steplength(1.0, cfg).value ==
        doctest::Approx(2.2069423626383075).epsilon(1e-12));
}

TEST_CASE("steplength bracket approaches the large-m* limit") {
  RmConfig cfg = scalar_config(0.234);
  cfg.m_star = 1000000;
  CHECK(steplength(1.0, cfg).value ==
        doctest::Approx(2.138125118973377).epsilon(1e-5));
}

TEST_CASE("steplength ratio to sigma exceeds 1 / (m* p*) across the grid") {
  for (int k = 1; k <= 19; ++k) {
    double p = 0.05 * k;
    for (int m : {1, 2, 5, 50, 1000}) {
      RmConfig cfg = scalar_config(p);
      cfg.m_star = m;
      double ratio = steplength(1.0, cfg).value;
      CHECK(ratio > 1.0 / (m * p));
    }
  }
}

TEST_CASE("steplength rejects invalid arguments") {
  RmConfig cfg = scalar_config(0.44);
  CHECK_THROWS_AS(steplength(0.0, cfg), std::domain_error);
  CHECK_THROWS_AS(steplength(-1.0, cfg), std::domain_error);
  RmConfig bad = cfg;
  bad.m_star = 0;
  CHECK_THROWS_AS(steplength(1.0, bad), std::domain_error);
  RmConfig bad_n0 = cfg;
  bad_n0.n0_override = 0;
  CHECK_THROWS_AS(make_search_state(1.0, bad_n0), std::domain_error);
}

TEST_CASE("make_search_state starts the iteration index at n0") {
  RmConfig cfg = scalar_config(0.44);
  RmSearchState s = make_search_state(1.5, cfg);
  CHECK(s.sigma == 1.5);
  CHECK(s.i == 20);
  CHECK(s.sigma_at_restart == 1.5);
  CHECK(s.steps_since_restart == 0);
  CHECK(s.restarts_up == 0);
  CHECK(s.restarts_down == 0);
  CHECK_FALSE(s.restarts_frozen);

  RmConfig over = cfg;
  over.n0_override = 20;
  RmConfig p234 = scalar_config(0.234);
  p234.n0_override = 20;
  CHECK(make_search_state(1.0, p234).i == 20);

  CHECK_THROWS_AS(make_search_state(0.0, cfg), std::domain_error);
}

TEST_CASE("rm_step moves sigma by the documented amounts") {
  RmConfig cfg = scalar_config(0.44);
  RmSearchState s = make_search_state(1.0, cfg);
  REQUIRE(s.i == 20);

  RmSearchState up = rm_step(s, true, cfg);
  CHECK(up.sigma == doctest::Approx(1.1136363636363635).epsilon(1e-12));
  CHECK(up.i == 21);
  CHECK(up.steps_since_restart == 1);

  RmSearchState down = rm_step(s, false, cfg);
  CHECK(down.sigma == doctest::Approx(0.9107142857142857).epsilon(1e-12));
  CHECK(down.i == 21);

  // The input state is untouched.
  CHECK(s.sigma == 1.0);
  CHECK(s.i == 20);
}

TEST_CASE("slowed schedule caps the denominator at max(200, i/dim)") {
  RmConfig cfg = scalar_config(0.234);
  cfg.m_star = 50;
  cfg.dim = 50;
  cfg.schedule = GainSchedule::kSlowed;
  double c = steplength(1.0, cfg).value;
  double p = 0.234;

  auto reject_from = [&](int i) {
    RmSearchState s = make_search_state(1.0, cfg);
    s.i = i;
    return rm_step(s, false, cfg).sigma;
  };

  // i = 10000, dim = 50: i/dim = 200, so d = 200.
  CHECK(reject_from(10000) == doctest::Approx(1.0 - c * p / 200.0).epsilon(1e-12));
  // i = 300, dim = 50: i/dim = 6 < 200, so d = 200.
  CHECK(reject_from(300) == doctest::Approx(1.0 - c * p / 200.0).epsilon(1e-12));
  // i <= 200 uses the standard denominator d = i.
  CHECK(reject_from(150) == doctest::Approx(1.0 - c * p / 150.0).epsilon(1e-12));

  // dim = 1 slowed is identical to the standard schedule.
  RmConfig one = scalar_config(0.44);
  one.schedule = GainSchedule::kSlowed;
  RmSearchState s = make_search_state(1.0, one);
  s.i = 300;
  RmConfig std_cfg = scalar_config(0.44);
  CHECK(rm_step(s, false, one).sigma == rm_step(s, false, std_cfg).sigma);
}

TEST_CASE("a step that would drive sigma non-positive halves it instead") {
  RmConfig cfg = scalar_config(0.44);
  cfg.n0_override = 1;
  RmSearchState s = make_search_state(1.0, cfg);
  REQUIRE(s.i == 1);
  // c * p / d = 4.0584 * 0.44 / 1 > 1, so the raw update would be negative.
  RmSearchState next = rm_step(s, false, cfg);
  CHECK(next.sigma == 0.5);
  CHECK(next.sigma > 0.0);
}

TEST_CASE("restart fires when sigma moves a factor of 3 from its anchor") {
  RmConfig cfg = scalar_config(0.44);

  RmSearchState s;
  s.sigma = 3.1;
  s.sigma_at_restart = 1.0;
  s.i = 500;
  s.steps_since_restart = 40;

  RmSearchState r = restart_check(s, cfg);
  CHECK(r.restarts_up == 1);
  CHECK(r.restarts_down == 0);
  CHECK(r.i == 20);
  CHECK(r.sigma == 3.1);
  CHECK(r.sigma_at_restart == 3.1);
  CHECK(r.steps_since_restart == 0);
  CHECK_FALSE(r.restarts_frozen);

  // The threshold is inclusive in both directions.
  s.sigma = 3.0;
  CHECK(restart_check(s, cfg).restarts_up == 1);
  s.sigma = 2.999;
  CHECK(restart_check(s, cfg).restarts_up == 0);

  RmSearchState d = s;
  d.sigma_at_restart = 3.0;
  d.sigma = 1.0;
  RmSearchState rd = restart_check(d, cfg);
  CHECK(rd.restarts_down == 1);
  CHECK(rd.restarts_up == 0);
  CHECK(rd.i == 20);
}

TEST_CASE("restart is suppressed after 100 steps without one") {
  RmConfig cfg = scalar_config(0.44);
  RmSearchState s;
  s.sigma = 5.0;
  s.sigma_at_restart = 1.0;
  s.i = 500;
  s.steps_since_restart = 150;
  RmSearchState r = restart_check(s, cfg);
  CHECK(r.restarts_up == 0);
  CHECK(r.i == 500);

  s.steps_since_restart = 100;
  CHECK(restart_check(s, cfg).restarts_up == 1);
  s.steps_since_restart = 101;
  CHECK(restart_check(s, cfg).restarts_up == 0);
}

TEST_CASE("restarts are capped per direction") {
  RmConfig cfg = scalar_config(0.44);

  RmSearchState s;
  s.sigma = 10.0;
  s.sigma_at_restart = 1.0;
  s.i = 50;
  s.steps_since_restart = 10;
  s.restarts_up = 5;
  s.restarts_down = 0;

  // Upward restarts are exhausted: nothing fires even at ratio 10.
  RmSearchState r = restart_check(s, cfg);
  CHECK(r.restarts_up == 5);
  CHECK(r.restarts_down == 0);
  CHECK(r.i == 50);

  // The downward budget is still available.
  s.sigma = 0.1;
  r = restart_check(s, cfg);
  CHECK(r.restarts_down == 1);
  CHECK(r.i == 20);

  // Both directions exhausted: the state is inert.
  RmSearchState both = s;
  both.restarts_up = 5;
  both.restarts_down = 5;
  both.sigma = 100.0;
  r = restart_check(both, cfg);
  CHECK(r.restarts_up == 5);
  CHECK(r.restarts_down == 5);
  CHECK(r.i == both.i);
}

TEST_CASE("exhausting both directions freezes the restart machinery") {
  RmConfig cfg = scalar_config(0.44);
  RmSearchState s;
  s.sigma = 10.0;
  s.sigma_at_restart = 1.0;
  s.i = 50;
  s.steps_since_restart = 10;
  s.restarts_up = 4;
  s.restarts_down = 5;

  RmSearchState r = restart_check(s, cfg);
  CHECK(r.restarts_up == 5);
  CHECK(r.restarts_frozen);

  // Once frozen, no further bookkeeping happens.
  RmSearchState again = r;
  again.sigma = 1000.0;
  again.steps_since_restart = 5;
  RmSearchState r2 = restart_check(again, cfg);
  CHECK(r2.restarts_up == 5);
  CHECK(r2.restarts_down == 5);
  CHECK(r2.i == r.i);
}

TEST_CASE("an always-accept stream exhausts the upward restart budget") {
  RmConfig cfg = scalar_config(0.44);
  RmSearchState s = make_search_state(1.0, cfg);
  double prev = s.sigma;
  for (int t = 0; t < 1000; ++t) {
    s = rm_step(s, true, cfg);
    CHECK(s.sigma > prev);
    prev = s.sigma;
  }
  CHECK(s.restarts_up == 5);
  CHECK(s.restarts_down == 0);
  CHECK_FALSE(s.restarts_frozen);
  CHECK(s.restarts_up + s.restarts_down <= 10);
}

TEST_CASE("step sizes diminish along a stationary accept stream") {
  RmConfig cfg = scalar_config(0.44);
  RmSearchState s = make_search_state(1.0, cfg);
  RngStream rng(123, 0);

  std::vector<double> deltas;
  deltas.reserve(10000);
  for (int t = 0; t < 10000; ++t) {
    RmSearchState next = rm_step(s, rng.uniform() < 0.44, cfg);
    deltas.push_back(std::abs(next.sigma - s.sigma));
    s = next;
  }

  double head_min = deltas[0];
  for (int t = 1; t < 10; ++t) head_min = std::min(head_min, deltas[t]);
  double tail_max = 0.0;
  for (int t = 5000; t < 10000; ++t) tail_max = std::max(tail_max, deltas[t]);
  CHECK(tail_max < head_min);
}

TEST_CASE("sigma settles into a narrow band once the gain has decayed") {
  RmConfig cfg = scalar_config(0.44);
  RmSearchState s = make_search_state(1.0, cfg);
  RngStream rng(2024, 0);

  std::vector<double> path;
  path.reserve(10001);
  path.push_back(s.sigma);
  for (int t = 0; t < 10000; ++t) {
    s = rm_step(s, rng.uniform() < 0.44, cfg);
    path.push_back(s.sigma);
  }

  // With accept probability pinned at p*, the drift is zero and the
  // per-step gain is O(1/t): movement over the whole second half stays
  // within 10% of where the path stood at the midpoint.
  double anchor = path[5000];
  for (int t = 5000; t <= 10000; ++t) {
    CHECK(std::abs(path[t] - anchor) <= 0.10 * anchor);
  }
}

TEST_CASE("efficiency matches the asymptotic variance ratio") {
  CHECK(efficiency(1.7, 1.7) == 1.0);
  CHECK(efficiency(2.0, 1.0) == 0.75);
  CHECK(efficiency(3.4, 1.0) == doctest::Approx(0.501730103806).epsilon(1e-10));
  CHECK_THROWS_AS(efficiency(0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(efficiency(0.49, 1.0), std::domain_error);
  CHECK_THROWS_AS(efficiency(1.0, 0.0), std::domain_error);
}
