#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rmscale/diagnostics.hpp"
#include "rmscale/normal.hpp"
#include "rmscale/rng.hpp"
#include "support/test_helpers.hpp"

using namespace rmscale;

namespace {

std::vector<Eigen::VectorXd> scalar_states(const std::vector<double>& xs) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(xs.size());
  for (double x : xs) {
    Eigen::VectorXd v(1);
    v << x;
    out.push_back(v);
  }
  return out;
}

}  // namespace

TEST_CASE("acceptance_rate counts hits over a half-open window") {
  std::vector<std::uint8_t> acc = {1, 0, 1, 1};
  CHECK(acceptance_rate(acc, 0, 4) == 0.75);
  CHECK(acceptance_rate(acc, 2, 4) == 1.0);
  CHECK(acceptance_rate(acc, 1, 2) == 0.0);
  CHECK_THROWS_AS(acceptance_rate(acc, -1, 4), std::invalid_argument);
  CHECK_THROWS_AS(acceptance_rate(acc, 0, 5), std::invalid_argument);
  CHECK_THROWS_AS(acceptance_rate(acc, 2, 2), std::invalid_argument);
}

TEST_CASE("act is near 1 for an iid series") {
  RngStream rng(77, 0);
  std::vector<double> x(100000);
  for (auto& v : x) v = draw_std_normal(rng);
  CHECK(std::abs(act(x) - 1.0) < 0.1);
}

TEST_CASE("act recovers the AR(1) autocorrelation time") {
  // tau = (1 + phi) / (1 - phi): 3 for phi = 0.5, 1/3 for phi = -0.5.
  auto pos = testutil::ar1_series(0.5, 1000000, 42);
  CHECK(std::abs(act(pos) - 3.0) < 0.15);

  auto neg = testutil::ar1_series(-0.5, 1000000, 43);
  CHECK(std::abs(act(neg) - 1.0 / 3.0) < 0.05);
}

TEST_CASE("act is invariant under affine maps of the series") {
  auto x = testutil::ar1_series(0.4, 20000, 7);
  std::vector<double> y(x.size());
  for (size_t t = 0; t < x.size(); ++t) y[t] = -3.5 * x[t] + 11.0;
  CHECK(std::abs(act(y) - act(x)) < 1e-10 * act(x));
}

TEST_CASE("act rejects degenerate series") {
  CHECK_THROWS_AS(act({1.0, 2.0, 3.0}), std::invalid_argument);
  std::vector<double> flat(100, 2.0);
  CHECK_THROWS_AS(act(flat), std::invalid_argument);
}

TEST_CASE("asd averages squared jumps") {
  auto states = scalar_states({0.0, 1.0, 1.0, 3.0});
  CHECK(asd(states, 0) == doctest::Approx(5.0 / 3.0).epsilon(1e-14));

  auto stuck = scalar_states({2.0, 2.0, 2.0});
  CHECK(asd(stuck, 0) == 0.0);

  CHECK_THROWS_AS(asd(scalar_states({1.0}), 0), std::invalid_argument);
}

TEST_CASE("replicate_quantiles interpolates order statistics") {
  std::vector<double> v;
  for (int k = 100; k >= 1; --k) v.push_back(k);  // unsorted input

  auto q = replicate_quantiles(v, {0.05, 0.5, 0.95});
  CHECK(q[0] == doctest::Approx(5.95).epsilon(1e-12));
  CHECK(q[1] == doctest::Approx(50.5).epsilon(1e-12));
  CHECK(q[2] == doctest::Approx(95.05).epsilon(1e-12));

  auto ends = replicate_quantiles(v, {0.0, 1.0});
  CHECK(ends[0] == 1.0);
  CHECK(ends[1] == 100.0);

  auto single = replicate_quantiles({7.5}, {0.05, 0.5, 0.95});
  CHECK(single[0] == 7.5);
  CHECK(single[1] == 7.5);
  CHECK(single[2] == 7.5);

  CHECK_THROWS_AS(replicate_quantiles({}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(replicate_quantiles({1.0}, {1.5}), std::invalid_argument);
}

TEST_CASE("coordinate_series extracts one coordinate") {
  std::vector<Eigen::VectorXd> states;
  for (int t = 0; t < 3; ++t) {
    Eigen::VectorXd v(2);
    v << t, 10.0 * t;
    states.push_back(v);
  }
  auto s0 = coordinate_series(states, 0);
  auto s1 = coordinate_series(states, 1);
  CHECK(s0 == std::vector<double>{0.0, 1.0, 2.0});
  CHECK(s1 == std::vector<double>{0.0, 10.0, 20.0});
}

TEST_CASE("summarize computes the table statistics on a tiny trace") {
  ChainTrace tr;
  tr.states = scalar_states({1.0, 2.0, 2.0, 4.0});
  tr.accepted = {1, 0, 1, 1};
  tr.sigma_path = {1.0, 1.1, 0.9, 1.2, 1.3};
  tr.meta.target = "toy";
  tr.meta.method = "rm-univariate";

  TraceSummary s = summarize(tr, 3);
  CHECK(s.target == "toy");
  CHECK(s.method == "rm-univariate");
  CHECK(s.replicate == 3);
  // Second half: iterations 2 and 3, scales sigma_path[3] and sigma_path[4].
  CHECK(s.sigma2_mean == doctest::Approx((1.44 + 1.69) / 2.0).epsilon(1e-12));
  CHECK(s.oap == 1.0);
  CHECK(s.mean_x1 == 3.0);
  CHECK(s.sd_x1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  // Full chain: asd over three jumps; act from the initial-positive rule.
  CHECK(s.asd_x1 == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
  CHECK(s.act_x1 == doctest::Approx(0.9736842105263157).epsilon(1e-12));
  CHECK(s.final_sigma == 1.3);

  ChainTrace tiny;
  tiny.states = scalar_states({1.0, 2.0, 3.0});
  tiny.accepted = {1, 1, 1};
  tiny.sigma_path = {1.0, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(summarize(tiny, 0), std::invalid_argument);
}
