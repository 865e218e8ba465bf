#include "rmscale/hier_target.hpp"

#include <cmath>
#include <limits>

#include "rmscale/errors.hpp"
#include "rmscale/normal.hpp"

namespace rmscale {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate(const HierTargetSpec& spec) {
  if (spec.n_groups < 1 || spec.coef_dim < 1 || spec.knot_dim < 1 ||
      spec.obs_per_group < 1)
    throw ConfigError("hier target: all dimensions must be >= 1");
  if (!(spec.coef_prior_var > 0.0) || !(spec.group_var_shape > 0.0) ||
      !(spec.group_var_scale > 0.0) || !(spec.knot_var_shape > 0.0) ||
      !(spec.knot_var_scale > 0.0))
    throw ConfigError("hier target: hyperparameters must be positive");
}

}  // namespace

InvGammaPosterior variance_conditional(double prior_shape, double prior_scale,
                                       const Eigen::VectorXd& effects) {
  return {prior_shape + 0.5 * static_cast<double>(effects.size()),
          prior_scale + 0.5 * effects.squaredNorm()};
}

double draw_inverse_gamma(RngStream& rng, double shape, double scale) {
  return scale / draw_gamma(rng, shape);
}

HierModel make_hier_target(const HierTargetSpec& spec, MwgScheme scheme,
                           std::uint64_t seed) {
  validate(spec);
  const int g = spec.n_groups;
  const int c = spec.coef_dim;
  const int k = spec.knot_dim;
  const int n = g * spec.obs_per_group;
  const int dim = g + c + k + 2;

  HierModel model;
  model.spec = spec;
  model.group_offset = 0;
  model.coef_offset = g;
  model.knot_offset = g + c;
  model.group_var_index = g + c + k;
  model.knot_var_index = g + c + k + 1;

  // Synthetic design and data, all from one stream so the instance is a
  // pure function of the seed.
  RngStream rng(seed, 0);
  model.x_design.resize(n, c);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < c; ++j) model.x_design(i, j) = draw_std_normal(rng);
  model.z_design.resize(n, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) model.z_design(i, j) = draw_std_normal(rng);
  Eigen::VectorXd beta_true(c), u_true(k), group_true(g);
  draw_std_normal(rng, beta_true);
  draw_std_normal(rng, u_true);
  draw_std_normal(rng, group_true);
  model.group_of_obs.resize(n);
  model.y.resize(n);
  for (int i = 0; i < n; ++i) {
    model.group_of_obs[i] = i / spec.obs_per_group;
    model.y[i] = model.x_design.row(i).dot(beta_true) +
                 model.z_design.row(i).dot(u_true) +
                 group_true[model.group_of_obs[i]] + draw_std_normal(rng);
  }

  TargetModel& t = model.target;
  t.name = "hier-gaussian-" + std::to_string(g) + "-" + std::to_string(c) + "-" +
           std::to_string(k);
  t.dim = dim;
  t.support = Support::kRealLine;  // variance coordinates gate via -inf below
  t.log_density_unnorm = [spec, g, c, k, n, dim, x_design = model.x_design,
                          z_design = model.z_design, y = model.y,
                          group_of_obs = model.group_of_obs,
                          go = model.group_offset, co = model.coef_offset,
                          ko = model.knot_offset, gv_ix = model.group_var_index,
                          kv_ix = model.knot_var_index](const Eigen::VectorXd& th) {
    if (th.size() != dim)
      throw std::invalid_argument("hier target: state has wrong length");
    const double gv = th[gv_ix];
    const double kv = th[kv_ix];
    if (!(gv > 0.0) || !(kv > 0.0)) return kNegInf;

    Eigen::VectorXd resid = y - x_design * th.segment(co, c) -
                            z_design * th.segment(ko, k);
    for (int i = 0; i < n; ++i) resid[i] -= th[go + group_of_obs[i]];
    double lp = -0.5 * resid.squaredNorm();

    lp += -0.5 * th.segment(go, g).squaredNorm() / gv - 0.5 * g * std::log(gv);
    lp += -0.5 * th.segment(ko, k).squaredNorm() / kv - 0.5 * k * std::log(kv);
    lp += -0.5 * th.segment(co, c).squaredNorm() / spec.coef_prior_var;
    lp += -(spec.group_var_shape + 1.0) * std::log(gv) - spec.group_var_scale / gv;
    lp += -(spec.knot_var_shape + 1.0) * std::log(kv) - spec.knot_var_scale / kv;
    return lp;
  };

  model.start = Eigen::VectorXd::Zero(dim);
  model.start[model.group_var_index] = 1.0;
  model.start[model.knot_var_index] = 1.0;

  // Exact-conditional draws for the two variances.
  auto group_var_draw = [spec, go = model.group_offset, g](
                            const Eigen::VectorXd& th, RngStream& r) {
    auto post = variance_conditional(spec.group_var_shape, spec.group_var_scale,
                                     th.segment(go, g));
    Eigen::VectorXd out(1);
    out[0] = draw_inverse_gamma(r, post.shape, post.scale);
    return out;
  };
  auto knot_var_draw = [spec, ko = model.knot_offset, k](
                           const Eigen::VectorXd& th, RngStream& r) {
    auto post = variance_conditional(spec.knot_var_shape, spec.knot_var_scale,
                                     th.segment(ko, k));
    Eigen::VectorXd out(1);
    out[0] = draw_inverse_gamma(r, post.shape, post.scale);
    return out;
  };

  auto scalar_block = [](std::string name, int index) {
    GibbsBlock b;
    b.name = std::move(name);
    b.indices = {index};
    b.kind = BlockKind::kRwmScalar;
    return b;
  };

  for (int j = 0; j < g; ++j)
    model.blocks.blocks.push_back(scalar_block("group-" + std::to_string(j + 1),
                                               model.group_offset + j));
  if (scheme == MwgScheme::kFullConditional) {
    for (int j = 0; j < c; ++j)
      model.blocks.blocks.push_back(scalar_block("coef-" + std::to_string(j + 1),
                                                 model.coef_offset + j));
    for (int j = 0; j < k; ++j)
      model.blocks.blocks.push_back(scalar_block("knot-" + std::to_string(j + 1),
                                                 model.knot_offset + j));
  } else {
    GibbsBlock coef;
    coef.name = "coef";
    for (int j = 0; j < c; ++j) coef.indices.push_back(model.coef_offset + j);
    coef.kind = BlockKind::kRwmVector;
    model.blocks.blocks.push_back(std::move(coef));
    GibbsBlock knots;
    knots.name = "knots";
    for (int j = 0; j < k; ++j) knots.indices.push_back(model.knot_offset + j);
    knots.kind = BlockKind::kRwmVector;
    model.blocks.blocks.push_back(std::move(knots));
  }

  GibbsBlock gvb;
  gvb.name = "group-var";
  gvb.indices = {model.group_var_index};
  gvb.kind = BlockKind::kExactConditional;
  gvb.conditional_sampler = group_var_draw;
  model.blocks.blocks.push_back(std::move(gvb));

  GibbsBlock kvb;
  kvb.name = "knot-var";
  kvb.indices = {model.knot_var_index};
  kvb.kind = BlockKind::kExactConditional;
  kvb.conditional_sampler = knot_var_draw;
  model.blocks.blocks.push_back(std::move(kvb));

  return model;
}

}  // namespace rmscale
