#include "rdode/experiments.hpp"

#include <algorithm>
#include <cmath>

namespace rdode {

State theorem_initial_data(const Grid1D& grid, double p, double alpha, double eps,
                           double u0_at_0, double v0_bar, const BoundContext& ctx) {
  if (ctx.p != p || ctx.alpha != alpha || ctx.eps != eps) {
    throw DomainError("theorem_initial_data: context was built for different (p, alpha, eps)");
  }
  if (!(u0_at_0 > 0.0)) throw HypothesisViolation("threshold", "u0(0) must be positive");
  if (u0_at_0 < ctx.u0_threshold) {
    throw HypothesisViolation("threshold", "u0(0) = " + std::to_string(u0_at_0) +
                                               " is below the threshold " +
                                               std::to_string(ctx.u0_threshold));
  }
  if (!(v0_bar > ctx.R0)) {
    throw HypothesisViolation("floor", "v0 = " + std::to_string(v0_bar) +
                                           " must exceed R0 = " + std::to_string(ctx.R0));
  }

  const double inv = -1.0 / (p - 1.0);
  const double head = std::pow(u0_at_0, 1.0 - p);
  const double slope = 2.0 * std::pow(eps, 1.0 - p);
  State s{Field(grid.size()), Field(grid.size(), v0_bar), 0.0};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double profile = std::pow(head + slope * std::pow(std::abs(grid.x(i)), alpha), inv);
    s.u[i] = profile * (1.0 - 1e-6);
    if (!(s.u[i] > 0.0 && s.u[i] < profile)) {
      throw HypothesisViolation("profile", "u0 is not strictly below the spike profile at x = " +
                                               std::to_string(grid.x(i)));
    }
  }
  return s;
}

BoundContext context_for(const ExperimentConfig& c) {
  const auto* th = std::get_if<TheoremScenario>(&c.scenario);
  if (th == nullptr) throw ConfigError("a bound context needs a theorem_data scenario");
  const Grid1D grid(c.grid.L, c.grid.ncells);
  const double v0_bar = th->v0_bar.value_or(c.params.kappa / c.params.b);
  if (!alpha_admissible(th->alpha, c.params.p, 1)) {
    throw AlphaInadmissible("alpha = " + std::to_string(th->alpha) +
                            " must lie in (0, (p-1)/p)");
  }
  double cq;
  if (c.estimator.cq) {
    cq = *c.estimator.cq;
  } else {
    SmoothingSampler sampler;
    sampler.samples = c.estimator.samples;
    sampler.seed = c.estimator.seed;
    cq = smoothing_constant_for(c.params, grid, th->alpha, sampler);
  }
  double eps;
  if (th->eps) {
    eps = *th->eps;
  } else {
    const double c0 = c0_constant(c.params, c.kinetics, c.grid.L, th->alpha, v0_bar, cq);
    eps = largest_admissible_eps(c0, v0_bar, c.params);
  }
  BoundContext ctx = build_bound_context(c.params, c.kinetics, grid, th->alpha, eps, v0_bar, cq);
  ctx.cq_empirical = !c.estimator.cq.has_value();
  return ctx;
}

double requested_u0_at_0(const TheoremScenario& th, const BoundContext& ctx) {
  return th.u0_absolute.value_or(th.u0_multiple * ctx.u0_threshold);
}

State initial_state(const ExperimentConfig& c, const std::optional<BoundContext>& ctx) {
  const Grid1D grid(c.grid.L, c.grid.ncells);
  if (const auto* th = std::get_if<TheoremScenario>(&c.scenario)) {
    if (!ctx) throw ConfigError("theorem_data scenario requires a bound context");
    return theorem_initial_data(grid, c.params.p, th->alpha, ctx->eps,
                                requested_u0_at_0(*th, *ctx), ctx->v0_bar, *ctx);
  }
  const auto& cu = std::get<CustomScenario>(c.scenario);
  State s{Field(grid.size()), Field(grid.size(), cu.v_value), 0.0};
  if (cu.u_profile == "constant") {
    std::fill(s.u.values.begin(), s.u.values.end(), cu.u_value);
  } else if (cu.u_profile == "gaussian") {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double z = grid.x(i) / cu.u_width;
      s.u[i] = cu.u_value * std::exp(-z * z);
    }
  }
  return s;
}

std::vector<Monitor> standard_monitors(const State& init, const Params& params,
                                       const Grid1D& grid,
                                       const std::optional<BoundContext>& ctx) {
  std::vector<Monitor> m;
  if (ctx) {
    m.push_back(envelope_monitor(grid, *ctx));
    m.push_back(v_floor_monitor(*ctx));
  }
  m.push_back(mass_monitor(init, params, grid));
  m.push_back(v_ceiling_monitor(init.v, params));
  return m;
}

namespace {

RunResult run_with(const ExperimentConfig& c, const std::optional<BoundContext>& ctx,
                   double d, const StepControl& control) {
  Params params = c.params;
  params.d = d;
  const Grid1D grid(c.grid.L, c.grid.ncells);
  RunResult r;
  r.ctx = ctx;
  const State init = initial_state(c, ctx);
  if (ctx) {
    r.u0_at_0 = init.u[grid.origin_index()] / (1.0 - 1e-6);
    r.time_bound = blowup_time_upper_bound(*r.u0_at_0, *ctx);
  }
  const SplitStepper stepper(grid, params, c.kinetics);
  r.outcome = simulate(init, stepper, control, standard_monitors(init, params, grid, ctx),
                       c.outputs.snapshot_times);
  return r;
}

std::optional<BoundContext> maybe_context(const ExperimentConfig& c) {
  if (std::holds_alternative<TheoremScenario>(c.scenario)) return context_for(c);
  return std::nullopt;
}

}  // namespace

RunResult run_single(const ExperimentConfig& c, std::optional<double> d) {
  validate_config(c);
  return run_with(c, maybe_context(c), d.value_or(c.params.d), c.control);
}

DichotomyResult run_dichotomy(const ExperimentConfig& c) {
  validate_config(c);
  const auto ctx = maybe_context(c);
  DichotomyResult out;
  out.d_used = c.dichotomy.d.value_or(c.params.D);
  out.without_diffusion = run_with(c, ctx, 0.0, c.control);
  out.with_diffusion = run_with(c, ctx, out.d_used, c.control);
  const auto& rows = out.with_diffusion.outcome.trace.rows;
  out.initial_sup_u = rows.front().sup_u;
  for (const auto& row : rows) {
    out.max_sup_u_with_diffusion = std::max(out.max_sup_u_with_diffusion, row.sup_u);
  }
  return out;
}

ConvergenceTable convergence_study(const ExperimentConfig& c,
                                   const std::vector<std::size_t>& levels) {
  validate_config(c);
  if (levels.empty()) throw ConfigError("convergence_study needs at least one level");
  ConvergenceTable table;
  table.ctx = context_for(c);

  for (std::size_t n : levels) {
    ExperimentConfig level = c;
    level.grid.ncells = n;
    StepControl control = c.control;
    const double scale = static_cast<double>(c.grid.ncells) / static_cast<double>(n);
    control.dt_max = c.control.dt_max * scale;
    control.dt_init = std::min(c.control.dt_init * scale, control.dt_max);
    control.dt_init = std::max(control.dt_init, control.dt_min);
    validate_config(level);

    const RunResult r = run_with(level, table.ctx, 0.0, control);
    ConvergenceRow row;
    row.ncells = n;
    row.dt_max = control.dt_max;
    row.status = r.outcome.status;
    row.origin_index = n / 2;
    if (r.outcome.status == SimStatus::BlewUp) {
      row.blowup_time = r.outcome.blowup_time_estimate;
      row.blowup_cell = r.outcome.blowup_cell;
    }
    const auto& tr = r.outcome.trace;
    row.envelope_min_margin = tr.min_margin("envelope").value_or(0.0);
    row.floor_min_margin = tr.min_margin("vfloor").value_or(0.0);
    row.mass_min_margin = tr.min_margin("mass").value_or(0.0);
    row.ceiling_min_margin = tr.min_margin("vceiling").value_or(0.0);
    table.rows.push_back(row);
  }
  for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
    const auto& lo = table.rows[i].blowup_time;
    const auto& hi = table.rows[i + 1].blowup_time;
    if (lo && hi) table.differences.push_back(std::abs(*lo - *hi));
  }
  return table;
}

std::vector<SweepRow> parameter_sweep(const ExperimentConfig& c) {
  validate_config(c);
  const auto* base = std::get_if<TheoremScenario>(&c.scenario);
  if (base == nullptr) throw ConfigError("parameter_sweep needs a theorem_data scenario");

  auto axis = [](const std::vector<double>& v, double fallback) {
    return v.empty() ? std::vector<double>{fallback} : v;
  };
  const auto mults = axis(c.sweep.u0_multiples, base->u0_multiple);
  const auto epss = axis(c.sweep.eps, base->eps.value_or(0.0));
  const auto alphas = axis(c.sweep.alpha, base->alpha);
  const auto ps = axis(c.sweep.p, c.params.p);

  std::vector<SweepRow> rows;
  for (double p : ps) {
    for (double alpha : alphas) {
      for (double eps : epss) {
        for (double m : mults) {
          SweepRow r;
          r.u0_multiple = m;
          r.eps = eps;
          r.alpha = alpha;
          r.p = p;
          rows.push_back(r);
        }
      }
    }
  }

  const auto count = static_cast<long>(rows.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    SweepRow& r = rows[static_cast<std::size_t>(i)];
    try {
      ExperimentConfig point = c;
      point.params.p = r.p;
      TheoremScenario th = *base;
      th.alpha = r.alpha;
      th.eps = r.eps > 0.0 ? std::optional<double>(r.eps) : std::nullopt;
      th.u0_multiple = r.u0_multiple;
      th.u0_absolute.reset();
      point.scenario = th;
      validate_config(point);
      const BoundContext ctx = context_for(point);
      r.eps_used = ctx.eps;
      r.u0_at_0 = requested_u0_at_0(th, ctx);
      const RunResult run = run_with(point, ctx, 0.0, point.control);
      r.status = run.outcome.status;
      r.blowup_time = run.outcome.blowup_time_estimate;
      r.time_bound = run.time_bound;
    } catch (const Error& e) {
      r.skipped = true;
      r.reason = e.what();
    }
  }
  return rows;
}

}  // namespace rdode
