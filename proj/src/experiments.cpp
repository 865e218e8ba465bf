#include "rmscale/experiments.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rmscale/csv.hpp"
#include "rmscale/errors.hpp"
#include "rmscale/hier_target.hpp"
#include "rmscale/normal.hpp"
#include "rmscale/parallel.hpp"
#include "rmscale/robbins_monro.hpp"
#include "rmscale/samplers.hpp"
#include "rmscale/trace_io.hpp"
#include "rmscale/version.hpp"

namespace rmscale {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("expected an integer for " + what + ", got '" + s + "'");
  }
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("expected a number for " + what + ", got '" + s + "'");
  }
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t k = 0; k < parts.size(); ++k) {
    if (k) out += sep;
    out += parts[k];
  }
  return out;
}

// Recorded once per file unless --deterministic asked for stable bytes.
std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::pair<double, double> mean_se(const std::vector<double>& v) {
  const size_t n = v.size();
  double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
  if (n < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n))};
}

// Emits indices 0, stride, 2*stride, ... and always the final index, so
// decimated paths keep their endpoint.
std::vector<int> decimate_indices(int count, int max_points) {
  std::vector<int> idx;
  if (count <= 0) return idx;
  int stride = (count + max_points - 1) / max_points;
  if (stride < 1) stride = 1;
  for (int i = 0; i < count; i += stride) idx.push_back(i);
  if (idx.back() != count - 1) idx.push_back(count - 1);
  return idx;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

const std::set<std::string>& experiment_names() {
  static const std::set<std::string> names{"tune",   "table1", "table2",
                                           "curves", "oracle", "mwg-demo"};
  return names;
}

std::vector<double> default_grid() {
  // 5k/100 rounds to the same double as the literal 0.05k; 0.05 * k does
  // not (0.05 * 19 lands just above 0.95 and would fail check_grid).
  std::vector<double> g;
  for (int k = 1; k <= 19; ++k) g.push_back(k * 5 / 100.0);
  return g;
}

void check_grid(const std::vector<double>& grid) {
  for (double p : grid)
    if (!(p >= 0.05 && p <= 0.95))
      throw ConfigError("p_grid entries must lie in [0.05, 0.95]");
}

std::vector<std::string> target_list(const ExperimentConfig& cfg) {
  std::vector<std::string> specs = split(cfg.target, ',');
  for (auto& s : specs)
    if (s.empty()) throw ConfigError("empty entry in target list '" + cfg.target + "'");
  return specs;
}

// Second-half mean of the squared post-update scale; mirrors the chain
// summary convention (sigma[t+1] is the scale after step t's update).
double second_half_sigma2(const std::vector<double>& sigma_path, int iters) {
  int half = iters / 2;
  double acc = 0.0;
  for (int t = half; t < iters; ++t) acc += sigma_path[t + 1] * sigma_path[t + 1];
  return acc / static_cast<double>(iters - half);
}

void echo_comments(CsvWriter& w, const ExperimentConfig& cfg) {
  for (const auto& [k, v] : config_echo(cfg)) w.comment(k + "=" + v);
  if (!cfg.deterministic) w.comment("generated_at=" + utc_timestamp());
}

ordered_json echo_json(const ExperimentConfig& cfg) {
  ordered_json j;
  for (const auto& [k, v] : config_echo(cfg)) j[k] = v;
  if (!cfg.deterministic) j["generated_at"] = utc_timestamp();
  return j;
}

std::vector<std::string> curve_point_cells(const CurvePoint& pt) {
  return {pt.target,          std::to_string(pt.m), std::to_string(pt.m_star),
          fmt6(pt.p_star),    fmt6(pt.sigma_star),  fmt6(pt.ratio),
          fmt6(pt.se_ratio),  std::to_string(pt.n)};
}

void require_positive(int v, const char* what) {
  if (v < 1) throw ConfigError(std::string(what) + " must be >= 1");
}

}  // namespace

ResolvedTarget parse_target_spec(const std::string& spec, std::uint64_t cov_seed) {
  std::vector<std::string> parts = split(spec, ':');
  ResolvedTarget rt;
  if (parts.size() == 1) {
    const auto& names = univariate_target_names();
    if (std::find(names.begin(), names.end(), spec) == names.end())
      throw ConfigError("unknown target '" + spec + "'");
    rt.model = make_univariate(spec);
    rt.m_star = 1;
    return rt;
  }
  if (parts[0] == "product" && parts.size() == 3) {
    const auto& names = univariate_target_names();
    if (std::find(names.begin(), names.end(), parts[1]) == names.end())
      throw ConfigError("unknown product component '" + parts[1] + "'");
    int m = parse_int(parts[2], "product dimension");
    require_positive(m, "product dimension");
    rt.model = make_product_form(parts[1], m);
    rt.m_star = m;
    return rt;
  }
  if (parts[0] == "mvt" && parts.size() == 3) {
    int m = parse_int(parts[1], "mvt dimension");
    require_positive(m, "mvt dimension");
    double dof = parse_double(parts[2], "mvt degrees of freedom");
    if (!(dof > 0)) throw ConfigError("mvt degrees of freedom must be positive");
    rt.model = make_multivariate_t(m, dof);
    rt.m_star = std::max(1, std::min(m, static_cast<int>(std::floor(dof))));
    return rt;
  }
  if (parts[0] == "mvn" && parts.size() == 3) {
    int m = parse_int(parts[1], "mvn dimension");
    require_positive(m, "mvn dimension");
    if (parts[2] != "better" && parts[2] != "ill")
      throw ConfigError("mvn conditioning must be 'better' or 'ill', got '" + parts[2] + "'");
    rt.model = make_mvn_random_cov(m, cov_seed, parts[2] == "better");
    rt.m_star = m;
    return rt;
  }
  throw ConfigError("cannot parse target spec '" + spec + "'");
}

void load_config_file(const std::string& path, ExperimentConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "experiment") cfg.experiment = value.get<std::string>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "out") cfg.out = value.get<std::string>();
      else if (key == "format") cfg.format = value.get<std::string>();
      else if (key == "paper_scale") cfg.paper_scale = value.get<bool>();
      else if (key == "deterministic") cfg.deterministic = value.get<bool>();
      else if (key == "workers") cfg.workers = value.get<int>();
      else if (key == "target") cfg.target = value.get<std::string>();
      else if (key == "m") cfg.m = value.get<int>();
      else if (key == "iters") cfg.iters = value.get<int>();
      else if (key == "replicates") cfg.replicates = value.get<int>();
      else if (key == "p_star") cfg.p_star = value.get<double>();
      else if (key == "m_star") cfg.m_star = value.get<int>();
      else if (key == "oracle_n") cfg.oracle_n = value.get<long>();
      else if (key == "p_grid") cfg.p_grid = value.get<std::vector<double>>();
      else if (key == "sigma1") cfg.sigma1 = value.get<double>();
      else if (key == "n0_override") cfg.n0_override = value.get<int>();
      else if (key == "cov_seed") cfg.cov_seed = value.get<std::uint64_t>();
      else if (key == "start_offset") cfg.start_offset = value.get<double>();
      else if (key == "n_groups") cfg.n_groups = value.get<int>();
      else if (key == "coef_dim") cfg.coef_dim = value.get<int>();
      else if (key == "knot_dim") cfg.knot_dim = value.get<int>();
      else if (key == "obs_per_group") cfg.obs_per_group = value.get<int>();
      else if (key == "mwg_scheme") cfg.mwg_scheme = value.get<std::string>();
      else if (key == "trace_out") cfg.trace_out = value.get<std::string>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

void resolve_defaults(ExperimentConfig& cfg) {
  if (!experiment_names().count(cfg.experiment))
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
  if (cfg.format != "csv" && cfg.format != "json")
    throw ConfigError("format must be csv or json, got '" + cfg.format + "'");
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  if (!(cfg.sigma1 > 0)) throw ConfigError("sigma1 must be positive");
  if (cfg.oracle_n < 1) throw ConfigError("oracle_n must be >= 1");
  if (cfg.replicates < 0) throw ConfigError("replicates must be >= 0");
  if (cfg.m < 0) throw ConfigError("m must be >= 0");
  if (cfg.m_star < 0) throw ConfigError("m_star must be >= 0");
  if (cfg.p_star != 0.0 && !(cfg.p_star > 0.0 && cfg.p_star < 1.0))
    throw ConfigError("p_star must lie in (0, 1)");
  if (cfg.n0_override && *cfg.n0_override < 1)
    throw ConfigError("n0_override must be >= 1");

  if (cfg.experiment == "table1") {
    if (cfg.target.empty()) cfg.target = join(univariate_target_names(), ",");
    if (cfg.iters < 0) cfg.iters = 2000;
    if (cfg.replicates == 0) cfg.replicates = 200;
    if (cfg.p_star == 0.0) cfg.p_star = 0.44;
    require_positive(cfg.iters, "iters");
    require_positive(cfg.replicates, "replicates");
  } else if (cfg.experiment == "table2") {
    if (!cfg.target.empty())
      throw ConfigError("table2 builds its own conditioning cases; leave target unset");
    if (cfg.m == 0) cfg.m = cfg.paper_scale ? 50 : 10;
    if (cfg.iters < 0) cfg.iters = cfg.paper_scale ? 100000 : 20000;
    if (cfg.replicates == 0) cfg.replicates = cfg.paper_scale ? 10 : 5;
    if (cfg.p_star == 0.0) cfg.p_star = 0.234;
    if (cfg.m_star == 0) cfg.m_star = cfg.m;
    if (!cfg.n0_override) cfg.n0_override = 20;
    // Chains start displaced from the mode so the shape tracker has to learn
    // the covariance while the chain travels; equilibrium starts let every
    // method coast and the fixed-scaling mis-scaling never shows.  The short
    // desk runs need a stronger displacement than the long runs to keep the
    // shape error alive past the halfway mark.
    if (cfg.start_offset < 0) cfg.start_offset = cfg.paper_scale ? 1.5 : 6.0;
    require_positive(cfg.iters, "iters");
    require_positive(cfg.replicates, "replicates");
  } else if (cfg.experiment == "curves") {
    if (cfg.target.empty()) cfg.target = join(univariate_target_names(), ",");
    if (cfg.p_grid.empty()) cfg.p_grid = default_grid();
    check_grid(cfg.p_grid);
  } else if (cfg.experiment == "oracle") {
    if (cfg.target.empty()) cfg.target = "normal";
    if (cfg.p_grid.empty()) cfg.p_grid = {0.44};
    check_grid(cfg.p_grid);
  } else if (cfg.experiment == "tune") {
    if (cfg.target.empty()) cfg.target = "normal";
    if (cfg.iters < 0) cfg.iters = 10000;  // 0 is legal: an empty report
    if (cfg.target.find(',') != std::string::npos)
      throw ConfigError("tune takes a single target");
  } else if (cfg.experiment == "mwg-demo") {
    if (cfg.iters < 0) cfg.iters = 50000;
    require_positive(cfg.iters, "iters");
    require_positive(cfg.n_groups, "n_groups");
    require_positive(cfg.coef_dim, "coef_dim");
    require_positive(cfg.knot_dim, "knot_dim");
    require_positive(cfg.obs_per_group, "obs_per_group");
    if (cfg.mwg_scheme != "block" && cfg.mwg_scheme != "full")
      throw ConfigError("mwg_scheme must be block or full, got '" + cfg.mwg_scheme + "'");
  }
  if (cfg.start_offset < 0) cfg.start_offset = 0.0;
  if (cfg.start_offset > 0 && cfg.experiment != "table2")
    throw ConfigError("start_offset applies to table2 only");
}

std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("version", kVersion);
  kv.emplace_back("experiment", cfg.experiment);
  kv.emplace_back("seed", std::to_string(cfg.seed));
  if (cfg.paper_scale) kv.emplace_back("paper_scale", "true");
  if (!cfg.target.empty()) kv.emplace_back("target", cfg.target);
  if (cfg.experiment == "table2") kv.emplace_back("m", std::to_string(cfg.m));
  if (cfg.iters >= 0) kv.emplace_back("iters", std::to_string(cfg.iters));
  if (cfg.replicates > 0) kv.emplace_back("replicates", std::to_string(cfg.replicates));
  if (cfg.p_star > 0) kv.emplace_back("p_star", fmt6(cfg.p_star));
  if (cfg.m_star > 0) kv.emplace_back("m_star", std::to_string(cfg.m_star));
  if (cfg.experiment == "curves" || cfg.experiment == "oracle") {
    kv.emplace_back("oracle_n", std::to_string(cfg.oracle_n));
    std::vector<std::string> pts;
    pts.reserve(cfg.p_grid.size());
    for (double p : cfg.p_grid) pts.push_back(fmt6(p));
    kv.emplace_back("p_grid", join(pts, ";"));
  }
  if (cfg.experiment == "tune" || cfg.experiment == "table2" ||
      cfg.experiment == "mwg-demo")
    kv.emplace_back("sigma1", fmt6(cfg.sigma1));
  if (cfg.n0_override) kv.emplace_back("n0_override", std::to_string(*cfg.n0_override));
  if (cfg.experiment == "table2" || cfg.experiment == "mwg-demo" ||
      cfg.target.find("mvn:") != std::string::npos)
    kv.emplace_back("cov_seed", std::to_string(cfg.cov_seed));
  if (cfg.experiment == "table2")
    kv.emplace_back("start_offset", fmt6(cfg.start_offset));
  if (cfg.experiment == "mwg-demo") {
    kv.emplace_back("mwg_scheme", cfg.mwg_scheme);
    kv.emplace_back("n_groups", std::to_string(cfg.n_groups));
    kv.emplace_back("coef_dim", std::to_string(cfg.coef_dim));
    kv.emplace_back("knot_dim", std::to_string(cfg.knot_dim));
    kv.emplace_back("obs_per_group", std::to_string(cfg.obs_per_group));
  }
  return kv;
}

Table1Result run_table1(const ExperimentConfig& cfg) {
  std::vector<std::string> specs = target_list(cfg);
  std::vector<TargetModel> targets;
  targets.reserve(specs.size());
  for (const auto& s : specs) {
    ResolvedTarget rt = parse_target_spec(s, cfg.cov_seed);
    if (rt.model.dim != 1)
      throw ConfigError("table1 runs univariate targets only, got '" + s + "'");
    targets.push_back(std::move(rt.model));
  }

  const int reps = cfg.replicates;
  const int iters = cfg.iters;
  const Probability p_star(cfg.p_star);
  const int total = static_cast<int>(targets.size()) * reps;
  std::vector<double> final_sigma(total), oap(total);

  parallel_for(total, cfg.workers, [&](int idx) {
    const int t = idx / reps;
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(idx));
    double sigma1 = draw_exponential(rng, 1.0);
    SamplerOptions opts;
    opts.sigma1 = sigma1;
    opts.n0_override = cfg.n0_override;
    ChainTrace tr = run_univariate_tuned(targets[t], iters, sigma1, p_star, rng, opts);
    final_sigma[idx] = tr.sigma_path.back();
    oap[idx] = acceptance_rate(tr.accepted, iters / 2, iters);
  });

  const std::vector<double> probs{0.05, 0.5, 0.95};
  Table1Result res;
  for (size_t t = 0; t < targets.size(); ++t) {
    std::vector<double> sig(final_sigma.begin() + t * reps,
                            final_sigma.begin() + (t + 1) * reps);
    std::vector<double> acc(oap.begin() + t * reps, oap.begin() + (t + 1) * reps);
    std::vector<double> qs = replicate_quantiles(std::move(sig), probs);
    std::vector<double> qa = replicate_quantiles(std::move(acc), probs);
    res.rows.push_back({targets[t].name, qs[0], qs[1], qs[2], qa[0], qa[1], qa[2]});
  }
  return res;
}

Table2Result run_table2(const ExperimentConfig& cfg) {
  const int reps = cfg.replicates;
  const std::array<const char*, 2> case_names{"better", "ill"};
  const std::array<TargetModel, 2> cases{
      make_mvn_random_cov(cfg.m, cfg.cov_seed, true),
      make_mvn_random_cov(cfg.m, cfg.cov_seed, false)};
  const std::array<SamplerMethod, 3> methods{SamplerMethod::kRmAdaptive,
                                             SamplerMethod::kOptimalFixed,
                                             SamplerMethod::kFixedScaling};

  const int total = 2 * 3 * reps;
  std::vector<TraceSummary> sums(total);
  parallel_for(total, cfg.workers, [&](int idx) {
    const int r = idx % reps;
    const int mi = (idx / reps) % 3;
    const int ci = idx / (3 * reps);
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(idx));
    SamplerOptions opts;
    opts.sigma1 = cfg.sigma1;
    opts.n0_override = cfg.n0_override;
    if (cfg.start_offset > 0) {
      double sd = std::sqrt(cases[ci].true_covariance->diagonal().mean());
      opts.x0 = Eigen::VectorXd::Constant(cfg.m, cfg.start_offset * sd);
    }
    ChainTrace tr = run_multivariate(cases[ci], methods[mi], cfg.iters,
                                     Probability(cfg.p_star), cfg.m_star, rng, opts);
    sums[idx] = summarize(tr, r);
  });

  Table2Result res;
  res.replicates = sums;
  for (int ci = 0; ci < 2; ++ci) {
    for (int mi = 0; mi < 3; ++mi) {
      std::vector<double> col[6];
      for (int r = 0; r < reps; ++r) {
        const TraceSummary& s = sums[(ci * 3 + mi) * reps + r];
        col[0].push_back(s.sigma2_mean);
        col[1].push_back(s.oap);
        col[2].push_back(s.mean_x1);
        col[3].push_back(s.sd_x1);
        col[4].push_back(s.act_x1);
        col[5].push_back(s.asd_x1);
      }
      Table2Row row;
      row.case_name = case_names[ci];
      row.method = sampler_method_name(methods[mi]);
      std::tie(row.sigma2_mean, row.sigma2_se) = mean_se(col[0]);
      std::tie(row.oap, row.oap_se) = mean_se(col[1]);
      std::tie(row.mean_x1, row.mean_x1_se) = mean_se(col[2]);
      std::tie(row.sd_x1, row.sd_x1_se) = mean_se(col[3]);
      std::tie(row.act_x1, row.act_x1_se) = mean_se(col[4]);
      std::tie(row.asd_x1, row.asd_x1_se) = mean_se(col[5]);
      res.rows.push_back(row);
    }
  }
  return res;
}

std::vector<CurvePoint> run_oracle_points(const ExperimentConfig& cfg) {
  std::vector<std::string> specs = target_list(cfg);
  std::vector<ResolvedTarget> targets;
  targets.reserve(specs.size());
  for (const auto& s : specs) targets.push_back(parse_target_spec(s, cfg.cov_seed));

  std::vector<std::vector<CurvePoint>> per_target(targets.size());
  parallel_for(static_cast<int>(targets.size()), cfg.workers, [&](int t) {
    const TargetModel& model = targets[t].model;
    const int m_star = cfg.m_star > 0 ? cfg.m_star : targets[t].m_star;
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(t));
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(model.dim, model.dim);
    per_target[t] = ratio_curve(model, cfg.p_grid, a, cfg.oracle_n, rng, m_star);
  });

  std::vector<CurvePoint> rows;
  for (auto& part : per_target)
    rows.insert(rows.end(), part.begin(), part.end());
  return rows;
}

std::vector<CurveRow> run_curves(const ExperimentConfig& cfg) {
  std::vector<CurvePoint> pts = run_oracle_points(cfg);
  std::vector<CurveRow> rows;
  rows.reserve(pts.size());
  for (const CurvePoint& pt : pts) {
    CurveRow row;
    row.point = pt;
    RmConfig rc{Probability(pt.p_star)};
    rc.m_star = 1;
    row.ref_m1 = steplength(1.0, rc).value;
    rc.m_star = pt.m_star;
    row.ref_mstar = steplength(1.0, rc).value;
    rows.push_back(row);
  }
  return rows;
}

TuneReport run_tune(const ExperimentConfig& cfg) {
  ResolvedTarget rt = parse_target_spec(cfg.target, cfg.cov_seed);
  const int iters = cfg.iters;
  const double p = cfg.p_star > 0 ? cfg.p_star : (rt.model.dim == 1 ? 0.44 : 0.234);
  const int m_star = rt.model.dim == 1 ? 1 : (cfg.m_star > 0 ? cfg.m_star : rt.m_star);

  RngStream rng(cfg.seed, 0);
  SamplerOptions opts;
  opts.sigma1 = cfg.sigma1;
  opts.n0_override = cfg.n0_override;
  ChainTrace tr =
      rt.model.dim == 1
          ? run_univariate_tuned(rt.model, iters, cfg.sigma1, Probability(p), rng, opts)
          : run_multivariate(rt.model, SamplerMethod::kRmAdaptive, iters,
                             Probability(p), m_star, rng, opts);

  if (!cfg.trace_out.empty()) {
    if (ends_with(cfg.trace_out, ".rmt1"))
      write_trace_rmt1(tr, cfg.trace_out);
    else
      write_trace_csv(tr, cfg.trace_out);
  }

  TuneReport rep;
  rep.target = rt.model.name;
  rep.method = tr.meta.method;
  rep.iters = iters;
  rep.p_star = p;
  rep.m_star = m_star;
  rep.sigma1 = cfg.sigma1;
  rep.final_sigma = tr.sigma_path.back();
  rep.oap_second_half =
      iters > 0 ? acceptance_rate(tr.accepted, iters / 2, iters) : 0.0;
  for (int i : decimate_indices(iters + 1, 1000))
    rep.sigma_path.emplace_back(i, tr.sigma_path[i]);

  constexpr int kWindow = 500;
  if (iters >= kWindow) {
    std::vector<int> prefix(iters + 1, 0);
    for (int t = 0; t < iters; ++t) prefix[t + 1] = prefix[t] + tr.accepted[t];
    const int count = iters - kWindow + 1;  // windows ending at kWindow..iters
    for (int i : decimate_indices(count, 1000)) {
      int end = kWindow + i;
      double rate = static_cast<double>(prefix[end] - prefix[end - kWindow]) / kWindow;
      rep.oap_windows.emplace_back(end, rate);
    }
  }
  rep.restarts = tr.restart_events;
  return rep;
}

std::vector<MwgDemoRow> run_mwg_demo(const ExperimentConfig& cfg) {
  HierTargetSpec spec;
  spec.n_groups = cfg.n_groups;
  spec.coef_dim = cfg.coef_dim;
  spec.knot_dim = cfg.knot_dim;
  spec.obs_per_group = cfg.obs_per_group;
  const MwgScheme scheme = cfg.mwg_scheme == "full" ? MwgScheme::kFullConditional
                                                    : MwgScheme::kBlockConditional;
  HierModel model = make_hier_target(spec, scheme, cfg.cov_seed);

  RngStream rng(cfg.seed, 0);
  SamplerOptions opts;
  opts.sigma1 = cfg.sigma1;
  opts.n0_override = cfg.n0_override;
  opts.x0 = model.start;
  MwgTrace tr = run_mwg(model.target, model.blocks, cfg.iters, rng, opts);

  const int iters = cfg.iters;
  std::vector<MwgDemoRow> rows;
  for (size_t b = 0; b < model.blocks.blocks.size(); ++b) {
    const GibbsBlock& blk = model.blocks.blocks[b];
    MwgDemoRow row;
    row.block = blk.name;
    row.dim = static_cast<int>(blk.indices.size());
    if (blk.kind == BlockKind::kExactConditional) {
      row.kind = "exact";
      row.oap = 1.0;  // conditional draws are always taken
    } else {
      row.kind = blk.kind == BlockKind::kRwmScalar ? "scalar" : "vector";
      row.p_star = blk.kind == BlockKind::kRwmScalar ? kScalarBlockPStar
                                                     : kVectorBlockPStar;
      row.oap = acceptance_rate(tr.block_accepted[b], iters / 2, iters);
      row.sigma2_mean = second_half_sigma2(tr.block_sigma[b], iters);
      row.final_sigma = tr.block_sigma[b].back();
      row.restarts = static_cast<int>(tr.block_restarts[b].size());
    }
    rows.push_back(row);
  }
  return rows;
}

void write_table1(const ExperimentConfig& cfg, const Table1Result& res, std::ostream& os) {
  if (cfg.format == "json") {
    ordered_json j;
    j["config"] = echo_json(cfg);
    j["rows"] = ordered_json::array();
    for (const auto& r : res.rows)
      j["rows"].push_back(ordered_json{{"target", r.target},
                                       {"sigma_q05", r.sigma_q05},
                                       {"sigma_q50", r.sigma_q50},
                                       {"sigma_q95", r.sigma_q95},
                                       {"oap_q05", r.oap_q05},
                                       {"oap_q50", r.oap_q50},
                                       {"oap_q95", r.oap_q95}});
    os << j.dump(2) << "\n";
    return;
  }
  CsvWriter w(os);
  echo_comments(w, cfg);
  w.header({"target", "sigma_q05", "sigma_q50", "sigma_q95", "oap_q05", "oap_q50",
            "oap_q95"});
  for (const auto& r : res.rows)
    w.row({r.target, fmt6(r.sigma_q05), fmt6(r.sigma_q50), fmt6(r.sigma_q95),
           fmt6(r.oap_q05), fmt6(r.oap_q50), fmt6(r.oap_q95)});
}

void write_table2(const ExperimentConfig& cfg, const Table2Result& res, std::ostream& os) {
  if (cfg.format == "json") {
    ordered_json j;
    j["config"] = echo_json(cfg);
    j["rows"] = ordered_json::array();
    for (const auto& r : res.rows)
      j["rows"].push_back(ordered_json{{"case", r.case_name},
                                       {"method", r.method},
                                       {"sigma2_mean", r.sigma2_mean},
                                       {"sigma2_se", r.sigma2_se},
                                       {"oap", r.oap},
                                       {"oap_se", r.oap_se},
                                       {"mean_x1", r.mean_x1},
                                       {"mean_x1_se", r.mean_x1_se},
                                       {"sd_x1", r.sd_x1},
                                       {"sd_x1_se", r.sd_x1_se},
                                       {"act_x1", r.act_x1},
                                       {"act_x1_se", r.act_x1_se},
                                       {"asd_x1", r.asd_x1},
                                       {"asd_x1_se", r.asd_x1_se}});
    os << j.dump(2) << "\n";
    return;
  }
  CsvWriter w(os);
  echo_comments(w, cfg);
  w.header({"case", "method", "sigma2_mean", "sigma2_se", "oap", "oap_se", "mean_x1",
            "mean_x1_se", "sd_x1", "sd_x1_se", "act_x1", "act_x1_se", "asd_x1",
            "asd_x1_se"});
  for (const auto& r : res.rows)
    w.row({r.case_name, r.method, fmt6(r.sigma2_mean), fmt6(r.sigma2_se), fmt6(r.oap),
           fmt6(r.oap_se), fmt6(r.mean_x1), fmt6(r.mean_x1_se), fmt6(r.sd_x1),
           fmt6(r.sd_x1_se), fmt6(r.act_x1), fmt6(r.act_x1_se), fmt6(r.asd_x1),
           fmt6(r.asd_x1_se)});
}

void write_replicate_summaries(const ExperimentConfig& cfg,
                               const std::vector<TraceSummary>& rows, std::ostream& os) {
  if (cfg.format == "json") {
    ordered_json j;
    j["config"] = echo_json(cfg);
    j["rows"] = ordered_json::array();
    for (const auto& s : rows)
      j["rows"].push_back(ordered_json{{"target", s.target},
                                       {"method", s.method},
                                       {"replicate", s.replicate},
                                       {"sigma2_mean", s.sigma2_mean},
                                       {"oap", s.oap},
                                       {"mean_x1", s.mean_x1},
                                       {"sd_x1", s.sd_x1},
                                       {"act_x1", s.act_x1},
                                       {"asd_x1", s.asd_x1}});
    os << j.dump(2) << "\n";
    return;
  }
  CsvWriter w(os);
  echo_comments(w, cfg);
  w.header({"target", "method", "replicate", "sigma2_mean", "oap", "mean_x1", "sd_x1",
            "act_x1", "asd_x1"});
  for (const auto& s : rows)
    w.row({s.target, s.method, std::to_string(s.replicate), fmt6(s.sigma2_mean),
           fmt6(s.oap), fmt6(s.mean_x1), fmt6(s.sd_x1), fmt6(s.act_x1),
           fmt6(s.asd_x1)});
}

void write_oracle_points(const ExperimentConfig& cfg, const std::vector<CurvePoint>& rows,
                         std::ostream& os) {
  if (cfg.format == "json") {
    ordered_json j;
    j["config"] = echo_json(cfg);
    j["rows"] = ordered_json::array();
    for (const auto& pt : rows)
      j["rows"].push_back(ordered_json{{"target", pt.target},
                                       {"m", pt.m},
                                       {"m_star", pt.m_star},
                                       {"p_star", pt.p_star},
                                       {"sigma_star", pt.sigma_star},
                                       {"ratio", pt.ratio},
                                       {"se_ratio", pt.se_ratio},
                                       {"n", pt.n}});
    os << j.dump(2) << "\n";
    return;
  }
  CsvWriter w(os);
  echo_comments(w, cfg);
  w.header({"target", "m", "m_star", "p_star", "sigma_star", "ratio", "se_ratio", "n"});
  for (const auto& pt : rows) w.row(curve_point_cells(pt));
}

void write_curves(const ExperimentConfig& cfg, const std::vector<CurveRow>& rows,
                  std::ostream& os) {
  if (cfg.format == "json") {
    ordered_json j;
    j["config"] = echo_json(cfg);
    j["rows"] = ordered_json::array();
    for (const auto& r : rows)
      j["rows"].push_back(ordered_json{{"target", r.point.target},
                                       {"m", r.point.m},
                                       {"m_star", r.point.m_star},
                                       {"p_star", r.point.p_star},
                                       {"sigma_star", r.point.sigma_star},
                                       {"ratio", r.point.ratio},
                                       {"se_ratio", r.point.se_ratio},
                                       {"n", r.point.n},
                                       {"ref_m1", r.ref_m1},
                                       {"ref_mstar", r.ref_mstar}});
    os << j.dump(2) << "\n";
    return;
  }
  CsvWriter w(os);
  echo_comments(w, cfg);
  w.header({"target", "m", "m_star", "p_star", "sigma_star", "ratio", "se_ratio", "n",
            "ref_m1", "ref_mstar"});
  for (const auto& r : rows) {
    std::vector<std::string> cells = curve_point_cells(r.point);
    cells.push_back(fmt6(r.ref_m1));
    cells.push_back(fmt6(r.ref_mstar));
    w.row(cells);
  }
}

void write_tune_report(const ExperimentConfig& cfg, const TuneReport& rep,
                       std::ostream& os) {
  // Always JSON: the report is nested (paths, restart log), not tabular.
  ordered_json j;
  j["config"] = echo_json(cfg);
  j["target"] = rep.target;
  j["method"] = rep.method;
  j["iters"] = rep.iters;
  j["p_star"] = rep.p_star;
  j["m_star"] = rep.m_star;
  j["sigma1"] = rep.sigma1;
  j["final_sigma"] = rep.final_sigma;
  j["oap_second_half"] = rep.oap_second_half;
  j["sigma_path"] = ordered_json::array();
  for (const auto& [step, sigma] : rep.sigma_path)
    j["sigma_path"].push_back(ordered_json{{"step", step}, {"sigma", sigma}});
  j["oap_windows"] = ordered_json::array();
  for (const auto& [step, rate] : rep.oap_windows)
    j["oap_windows"].push_back(ordered_json{{"step", step}, {"oap", rate}});
  j["restarts"] = ordered_json::array();
  for (const auto& ev : rep.restarts)
    j["restarts"].push_back(ordered_json{{"step", ev.step}, {"direction", ev.direction}});
  os << j.dump(2) << "\n";
}

void write_mwg_demo(const ExperimentConfig& cfg, const std::vector<MwgDemoRow>& rows,
                    std::ostream& os) {
  if (cfg.format == "json") {
    ordered_json j;
    j["config"] = echo_json(cfg);
    j["rows"] = ordered_json::array();
    for (const auto& r : rows)
      j["rows"].push_back(ordered_json{{"block", r.block},
                                       {"kind", r.kind},
                                       {"dim", r.dim},
                                       {"p_star", r.p_star},
                                       {"oap", r.oap},
                                       {"sigma2_mean", r.sigma2_mean},
                                       {"final_sigma", r.final_sigma},
                                       {"restarts", r.restarts}});
    os << j.dump(2) << "\n";
    return;
  }
  CsvWriter w(os);
  echo_comments(w, cfg);
  w.header({"block", "kind", "dim", "p_star", "oap", "sigma2_mean", "final_sigma",
            "restarts"});
  for (const auto& r : rows)
    w.row({r.block, r.kind, std::to_string(r.dim), fmt6(r.p_star), fmt6(r.oap),
           fmt6(r.sigma2_mean), fmt6(r.final_sigma), std::to_string(r.restarts)});
}

namespace {

// "<stem>.replicates.<ext>", or "<out>.replicates" when out has no dot.
std::string replicates_path(const std::string& out) {
  size_t slash = out.find_last_of('/');
  size_t dot = out.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return out + ".replicates";
  return out.substr(0, dot) + ".replicates" + out.substr(dot);
}

void with_output(const std::string& out, const std::function<void(std::ostream&)>& fn) {
  if (out.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot open for writing: " + out);
  fn(f);
  f.flush();
  if (!f) throw std::runtime_error("write failed: " + out);
}

}  // namespace

int run_experiment(ExperimentConfig cfg) {
  resolve_defaults(cfg);
  if (cfg.experiment == "table1") {
    Table1Result res = run_table1(cfg);
    with_output(cfg.out, [&](std::ostream& os) { write_table1(cfg, res, os); });
  } else if (cfg.experiment == "table2") {
    Table2Result res = run_table2(cfg);
    with_output(cfg.out, [&](std::ostream& os) { write_table2(cfg, res, os); });
    if (!cfg.out.empty())
      with_output(replicates_path(cfg.out), [&](std::ostream& os) {
        write_replicate_summaries(cfg, res.replicates, os);
      });
  } else if (cfg.experiment == "curves") {
    std::vector<CurveRow> rows = run_curves(cfg);
    with_output(cfg.out, [&](std::ostream& os) { write_curves(cfg, rows, os); });
  } else if (cfg.experiment == "oracle") {
    std::vector<CurvePoint> rows = run_oracle_points(cfg);
    with_output(cfg.out, [&](std::ostream& os) { write_oracle_points(cfg, rows, os); });
  } else if (cfg.experiment == "tune") {
    TuneReport rep = run_tune(cfg);
    with_output(cfg.out, [&](std::ostream& os) { write_tune_report(cfg, rep, os); });
  } else {
    std::vector<MwgDemoRow> rows = run_mwg_demo(cfg);
    with_output(cfg.out, [&](std::ostream& os) { write_mwg_demo(cfg, rows, os); });
  }
  return 0;
}

}  // namespace rmscale
