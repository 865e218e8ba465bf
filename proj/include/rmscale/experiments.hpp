#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rmscale/chain_trace.hpp"
#include "rmscale/diagnostics.hpp"
#include "rmscale/oracle.hpp"
#include "rmscale/targets.hpp"

namespace rmscale {

// One resolved command invocation.  Zeros and empty strings mean "use the
// experiment's default"; resolve_defaults fills them in.  The fields that
// only steer execution (out, workers, deterministic) are excluded from the
// config echo written into output files, so the same experiment produces
// byte-identical files regardless of worker count or destination.
struct ExperimentConfig {
  std::string experiment;  // tune | table1 | table2 | curves | oracle | mwg-demo
  std::uint64_t seed = 1;
  std::string out;             // "" writes to stdout
  std::string format = "csv";  // csv | json
  bool paper_scale = false;
  bool deterministic = false;  // suppress the timestamp field
  int workers = 1;

  // Target spec string: a univariate name, "product:<component>:<m>",
  // "mvt:<m>:<dof>", or "mvn:<m>:<better|ill>".  Experiments that sweep
  // several targets take a comma-separated list.  "" selects the
  // experiment's default.
  std::string target;
  int m = 0;       // dimension for table2 runs
  int iters = -1;  // -1 = experiment default; 0 is a real value (tune only)
  int replicates = 0;
  double p_star = 0.0;
  int m_star = 0;
  long oracle_n = 200000;
  std::vector<double> p_grid;
  double sigma1 = 1.0;
  std::optional<int> n0_override;
  std::uint64_t cov_seed = 1234;  // seed for synthetic instances (covariances, data)
  // Starting displacement for the conditioning-case chains, in units of the
  // average coordinate standard deviation, applied along the ones direction.
  // 0 starts chains in equilibrium; -1 picks the scale's default.
  double start_offset = -1.0;

  int n_groups = 20;
  int coef_dim = 3;
  int knot_dim = 5;
  int obs_per_group = 5;
  std::string mwg_scheme = "block";  // block | full
  std::string trace_out;             // tune only: optional raw trace dump
};

// Parsed target plus the family's effective-dimension convention:
// 1 for univariate, m for product-form and random-covariance normals,
// min{m, floor(dof)} for multivariate t.
struct ResolvedTarget {
  TargetModel model;
  int m_star = 1;
};

// Throws ConfigError on anything not matching the spec grammar above.
ResolvedTarget parse_target_spec(const std::string& spec, std::uint64_t cov_seed);

// Merges the JSON object at path into cfg.  Unknown keys and type
// mismatches throw ConfigError.
void load_config_file(const std::string& path, ExperimentConfig& cfg);

// Fills empty/zero fields with the experiment's defaults and validates the
// result.  Throws ConfigError on out-of-range values.
void resolve_defaults(ExperimentConfig& cfg);

// Ordered key/value pairs echoed into every output file, including the
// artifact version.  Excludes out/workers/deterministic.
std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& cfg);

struct Table1Row {
  std::string target;
  double sigma_q05 = 0, sigma_q50 = 0, sigma_q95 = 0;
  double oap_q05 = 0, oap_q50 = 0, oap_q95 = 0;
};

struct Table1Result {
  std::vector<Table1Row> rows;
};

struct Table2Row {
  std::string case_name;  // better | ill
  std::string method;
  double sigma2_mean = 0, sigma2_se = 0;
  double oap = 0, oap_se = 0;
  double mean_x1 = 0, mean_x1_se = 0;
  double sd_x1 = 0, sd_x1_se = 0;
  double act_x1 = 0, act_x1_se = 0;
  double asd_x1 = 0, asd_x1_se = 0;
};

struct Table2Result {
  std::vector<Table2Row> rows;
  std::vector<TraceSummary> replicates;  // row order: case, method, replicate
};

struct CurveRow {
  CurvePoint point;
  double ref_m1 = 0;     // 1/(p*(1-p*)), the one-dimensional rule
  double ref_mstar = 0;  // steplength rule at the row's m*
};

struct TuneReport {
  std::string target;
  std::string method;
  int iters = 0;
  double p_star = 0;
  int m_star = 1;
  double sigma1 = 0;
  double final_sigma = 0;
  double oap_second_half = 0;
  std::vector<std::pair<int, double>> sigma_path;   // decimated (step, sigma)
  std::vector<std::pair<int, double>> oap_windows;  // (step, 500-step rate)
  std::vector<RestartEvent> restarts;
};

struct MwgDemoRow {
  std::string block;
  std::string kind;  // scalar | vector | exact
  int dim = 0;
  double p_star = 0;         // 0 for exact blocks
  double oap = 0;            // second half of the sweeps
  double sigma2_mean = 0;    // second half; 0 for exact blocks
  double final_sigma = 0;    // 0 for exact blocks
  int restarts = 0;
};

// Runners.  Each takes a cfg that has been through resolve_defaults and
// returns plain rows; emission is separate so tests can check numbers
// without touching the filesystem.
Table1Result run_table1(const ExperimentConfig& cfg);
Table2Result run_table2(const ExperimentConfig& cfg);
std::vector<CurveRow> run_curves(const ExperimentConfig& cfg);
std::vector<CurvePoint> run_oracle_points(const ExperimentConfig& cfg);
TuneReport run_tune(const ExperimentConfig& cfg);
std::vector<MwgDemoRow> run_mwg_demo(const ExperimentConfig& cfg);

void write_table1(const ExperimentConfig& cfg, const Table1Result& res, std::ostream& os);
void write_table2(const ExperimentConfig& cfg, const Table2Result& res, std::ostream& os);
void write_replicate_summaries(const ExperimentConfig& cfg,
                               const std::vector<TraceSummary>& rows, std::ostream& os);
void write_curves(const ExperimentConfig& cfg, const std::vector<CurveRow>& rows,
                  std::ostream& os);
void write_oracle_points(const ExperimentConfig& cfg, const std::vector<CurvePoint>& rows,
                         std::ostream& os);
void write_tune_report(const ExperimentConfig& cfg, const TuneReport& rep, std::ostream& os);
void write_mwg_demo(const ExperimentConfig& cfg, const std::vector<MwgDemoRow>& rows,
                    std::ostream& os);

// Resolves defaults, runs the configured experiment, and writes its output
// to cfg.out (stdout when empty).  run_table2 also writes the
// per-replicate summary file next to cfg.out.  Returns 0.
int run_experiment(ExperimentConfig cfg);

}  // namespace rmscale
