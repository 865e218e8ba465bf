#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rmscale/errors.hpp"
#include "rmscale/experiments.hpp"
#include "rmscale/version.hpp"

namespace {

// Every option lives on the root app and falls through from the chosen
// subcommand, so "rmscale table1 --seed 3" and "rmscale --seed 3 table1"
// mean the same thing.  Flags the user actually passed override the config
// file, which overrides built-in defaults.
struct Flags {
  std::string config, out, format, target, scheme, trace_out;
  std::uint64_t seed = 0, cov_seed = 0;
  int workers = 0, m = 0, iters = 0, replicates = 0, m_star = 0, n0_override = 0;
  int n_groups = 0, coef_dim = 0, knot_dim = 0, obs_per_group = 0;
  long oracle_n = 0;
  double p_star = 0, sigma1 = 0, start_offset = 0;
  std::vector<double> p_grid;
  bool paper_scale = false, deterministic = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scale tuning toolkit for random-walk Metropolis samplers"};
  app.set_version_flag("--version", std::string(rmscale::kVersion));
  app.require_subcommand(1);

  Flags f;
  auto* o_config = app.add_option(
      "--config", f.config, "JSON config file; explicit flags override its values");
  auto* o_seed = app.add_option("--seed", f.seed, "master seed for all random streams");
  auto* o_out = app.add_option("--out", f.out, "output path (stdout when omitted)");
  auto* o_format = app.add_option("--format", f.format, "csv or json (default csv)");
  auto* o_paper =
      app.add_flag("--paper-scale", f.paper_scale, "publication-scale experiment defaults");
  auto* o_det = app.add_flag("--deterministic", f.deterministic,
                             "omit timestamps so identical runs give identical bytes");
  auto* o_workers =
      app.add_option("--workers", f.workers, "worker threads for replicate fan-out");
  auto* o_target = app.add_option(
      "--target", f.target,
      "target spec: a catalog name, product:<name>:<m>, mvt:<m>:<dof> or "
      "mvn:<m>:<better|ill>; comma-separated list where several are accepted");
  auto* o_m = app.add_option("--m", f.m, "dimension of the conditioning-case targets");
  auto* o_iters = app.add_option("--iters", f.iters, "chain length");
  auto* o_reps =
      app.add_option("--replicates", f.replicates, "independent chains per configuration");
  auto* o_pstar = app.add_option("--p-star", f.p_star, "target acceptance probability");
  auto* o_mstar =
      app.add_option("--m-star", f.m_star, "effective dimension in the steplength rule");
  auto* o_oracle_n = app.add_option("--oracle-n", f.oracle_n,
                                    "Monte Carlo sample size per oracle evaluation");
  auto* o_grid = app.add_option("--p-grid", f.p_grid,
                                "acceptance grid for oracle/curves, within [0.05, 0.95]");
  auto* o_sigma1 = app.add_option("--sigma1", f.sigma1, "starting proposal scale");
  auto* o_n0 = app.add_option("--n0-override", f.n0_override, "pin the search start index");
  auto* o_cov_seed = app.add_option(
      "--cov-seed", f.cov_seed, "seed for synthetic instances (covariances, demo data)");
  auto* o_start = app.add_option(
      "--start-offset", f.start_offset,
      "table2 starting displacement in average-sd units (0 = equilibrium start)");
  auto* o_groups =
      app.add_option("--n-groups", f.n_groups, "scalar random-effect count in the demo");
  auto* o_coef = app.add_option("--coef-dim", f.coef_dim, "coefficient block size");
  auto* o_knot = app.add_option("--knot-dim", f.knot_dim, "knot block size");
  auto* o_obs =
      app.add_option("--obs-per-group", f.obs_per_group, "observations per group");
  auto* o_scheme =
      app.add_option("--scheme", f.scheme, "demo sweep layout: block or full");
  auto* o_trace = app.add_option(
      "--trace-out", f.trace_out, "raw trace dump (.rmt1 binary, anything else text)");

  auto add_sub = [&](const char* name, const char* desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->fallthrough();
    return sub;
  };
  add_sub("tune", "Run one adaptive chain and report its scale trajectory");
  add_sub("table1", "Replicate the univariate tuning summary over the target catalog");
  add_sub("table2", "Compare adaptive and fixed proposals on random-covariance normals");
  add_sub("curves", "Trace the optimal-gain ratio across target acceptance values");
  add_sub("oracle", "Query equilibrium scale and gain ratio for chosen targets");
  add_sub("mwg-demo", "Tune a Metropolis-within-Gibbs sweep on a hierarchical model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    rmscale::ExperimentConfig cfg;
    if (*o_config) rmscale::load_config_file(f.config, cfg);
    cfg.experiment = app.get_subcommands().front()->get_name();
    if (*o_seed) cfg.seed = f.seed;
    if (*o_out) cfg.out = f.out;
    if (*o_format) cfg.format = f.format;
    if (*o_paper) cfg.paper_scale = f.paper_scale;
    if (*o_det) cfg.deterministic = f.deterministic;
    if (*o_workers) cfg.workers = f.workers;
    if (*o_target) cfg.target = f.target;
    if (*o_m) cfg.m = f.m;
    if (*o_iters) cfg.iters = f.iters;
    if (*o_reps) cfg.replicates = f.replicates;
    if (*o_pstar) cfg.p_star = f.p_star;
    if (*o_mstar) cfg.m_star = f.m_star;
    if (*o_oracle_n) cfg.oracle_n = f.oracle_n;
    if (*o_grid) cfg.p_grid = f.p_grid;
    if (*o_sigma1) cfg.sigma1 = f.sigma1;
    if (*o_n0) cfg.n0_override = f.n0_override;
    if (*o_cov_seed) cfg.cov_seed = f.cov_seed;
    if (*o_start) cfg.start_offset = f.start_offset;
    if (*o_groups) cfg.n_groups = f.n_groups;
    if (*o_coef) cfg.coef_dim = f.coef_dim;
    if (*o_knot) cfg.knot_dim = f.knot_dim;
    if (*o_obs) cfg.obs_per_group = f.obs_per_group;
    if (*o_scheme) cfg.mwg_scheme = f.scheme;
    if (*o_trace) cfg.trace_out = f.trace_out;
    return rmscale::run_experiment(std::move(cfg));
  } catch (const rmscale::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
