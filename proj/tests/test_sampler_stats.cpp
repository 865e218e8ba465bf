#include <doctest.h>

#include <cmath>
#include <vector>

#include "rmscale/diagnostics.hpp"
#include "rmscale/normal.hpp"
#include "rmscale/samplers.hpp"
#include "support/test_helpers.hpp"

using namespace rmscale;

TEST_CASE("tuned univariate chain reaches its target acceptance rate") {
  TargetModel t = make_univariate("normal");
  RngStream rng(900, 0);
  ChainTrace tr = run_univariate_tuned(t, 5000, 1.0, Probability(0.44), rng);

  TraceSummary s = summarize(tr, 0);
  CHECK(std::abs(s.oap - 0.44) < 0.06);
  // Equilibrium scale for the unit normal sits near 2.42.
  CHECK(std::abs(s.final_sigma - 2.42) < 0.6);
  CHECK(std::abs(s.mean_x1) < 0.15);
  CHECK(std::abs(s.sd_x1 - 1.0) < 0.2);
}

TEST_CASE("optimal-fixed chain samples the product target correctly") {
  TargetModel t = make_product_form("normal", 2);
  RngStream rng(901, 0);
  ChainTrace tr = run_multivariate(t, SamplerMethod::kOptimalFixed, 40000,
                                   Probability(0.234), 2, rng);

  // Fixed method: the scale never moves.
  for (double s : tr.sigma_path) CHECK(s == tr.sigma_path[0]);
  CHECK(tr.restart_events.empty());

  // Second-half moments per coordinate.
  int half = 20000;
  for (int j = 0; j < 2; ++j) {
    double m = 0.0, v = 0.0;
    for (int k = half; k < 40000; ++k) m += tr.states[k](j);
    m /= half;
    for (int k = half; k < 40000; ++k) {
      double d = tr.states[k](j) - m;
      v += d * d;
    }
    v /= (half - 1);
    CHECK(std::abs(m) < 0.1);
    CHECK(std::abs(v - 1.0) < 0.15);
  }
}

TEST_CASE("rm-adaptive multivariate chain tunes to 0.234 and finds the shape") {
  TargetModel t = make_mvn_random_cov(5, 1234, true);
  RngStream rng(902, 0);
  ChainTrace tr = run_multivariate(t, SamplerMethod::kRmAdaptive, 15000,
                                   Probability(0.234), 5, rng);

  TraceSummary s = summarize(tr, 0);
  CHECK(std::abs(s.oap - 0.234) < 0.06);
  double true_sd = std::sqrt((*t.true_covariance)(0, 0));
  CHECK(std::abs(s.sd_x1 - true_sd) < 0.3 * true_sd);
}

TEST_CASE("mixed-block sweep sampler hits both block targets") {
  TargetModel t = make_product_form("normal", 4);

  GibbsBlockSpec spec;
  GibbsBlock head;
  head.name = "head";
  head.indices = {0};
  head.kind = BlockKind::kRwmScalar;
  GibbsBlock mid;
  mid.name = "mid";
  mid.indices = {1, 2};
  mid.kind = BlockKind::kRwmVector;
  GibbsBlock tail;
  tail.name = "tail";
  tail.indices = {3};
  tail.kind = BlockKind::kExactConditional;
  tail.conditional_sampler = [](const Eigen::VectorXd&, RngStream& rng) {
    return Eigen::VectorXd::Constant(1, draw_std_normal(rng));
  };
  spec.blocks = {head, mid, tail};

  RngStream rng(903, 0);
  const int iters = 20000;
  MwgTrace tr = run_mwg(t, spec, iters, rng);

  REQUIRE(tr.block_names == std::vector<std::string>{"head", "mid", "tail"});
  REQUIRE(tr.block_accepted.size() == 3);
  REQUIRE(tr.block_sigma.size() == 3);

  // Random-walk blocks carry acceptance and scale paths; exact blocks do not.
  CHECK(tr.block_accepted[0].size() == iters);
  CHECK(tr.block_sigma[0].size() == iters + 1);
  CHECK(tr.block_accepted[2].empty());
  CHECK(tr.block_sigma[2].empty());

  int half = iters / 2;
  double scalar_oap = acceptance_rate(tr.block_accepted[0], half, iters);
  double vector_oap = acceptance_rate(tr.block_accepted[1], half, iters);
  CHECK(std::abs(scalar_oap - 0.44) < 0.07);
  CHECK(std::abs(vector_oap - 0.234) < 0.07);

  // Every coordinate still targets N(0, 1); the exact block's coordinate is
  // an iid stream, so its tolerance is the tightest.
  for (int j = 0; j < 4; ++j) {
    auto series = coordinate_series(tr.states, j);
    std::vector<double> tail_half(series.begin() + half, series.end());
    CAPTURE(j);
    CHECK(std::abs(testutil::mean_of(tail_half)) < (j == 3 ? 0.035 : 0.15));
    CHECK(std::abs(testutil::variance_of(tail_half) - 1.0) < (j == 3 ? 0.05 : 0.25));
  }
}
