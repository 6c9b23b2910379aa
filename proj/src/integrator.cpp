#include "rdode/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rdode {

namespace {

constexpr double kVClampRel = 1e-12;
constexpr double kUClampRel = 1e-10;

// Zeroes entries in [-rel * ||w||_inf, 0). Returns the offending minimum if
// some entry lies below that band, leaving w untouched in that case.
std::optional<double> clamp_roundoff(Field& w, double rel) {
  double sup = 0.0, lo = 0.0;
  for (double x : w.values) {
    sup = std::max(sup, std::abs(x));
    lo = std::min(lo, x);
  }
  if (lo < -rel * sup) return lo;
  for (double& x : w.values) x = std::max(x, 0.0);
  return std::nullopt;
}

}  // namespace

void validate_control(const StepControl& c) {
  if (!(c.dt_min > 0.0)) throw ConstraintViolation("dt_min", "must be positive");
  if (!(c.dt_init >= c.dt_min)) throw ConstraintViolation("dt_init", "must be >= dt_min");
  if (!(c.dt_max >= c.dt_init)) throw ConstraintViolation("dt_max", "must be >= dt_init");
  if (!(c.safety > 0.0 && c.safety < 1.0)) {
    throw ConstraintViolation("safety", "must lie in (0, 1)");
  }
  if (!(c.blowup_threshold > 1.0)) {
    throw ConstraintViolation("blowup_threshold", "must exceed 1");
  }
  if (!(c.t_end > 0.0) || !std::isfinite(c.t_end)) {
    throw ConstraintViolation("t_end", "must be positive and finite");
  }
}

const char* to_string(SimStatus s) {
  switch (s) {
    case SimStatus::Completed: return "Completed";
    case SimStatus::BlewUp: return "BlewUp";
    case SimStatus::DtUnderflow: return "DtUnderflow";
  }
  return "?";
}

SplitStepper::SplitStepper(const Grid1D& grid, const Params& params, const Kinetics& kinetics,
                           TransformBackend backend, kernels::Exec exec)
    : params_(validate_params(params.d, params.D, params.p, params.a, params.b, params.kappa)),
      kinetics_(kinetics),
      exec_(exec),
      v_op_(grid, params.D, params.b, backend, exec) {
  if (params.d > 0.0) u_op_.emplace(grid, params.d, 0.0, backend, exec);
}

StepResult SplitStepper::step(const State& s, double dt) const {
  if (!(dt > 0.0)) throw DomainError("step requires dt > 0");
  check_sizes(s, v_op_.grid());
  const double p = params_.p, a = params_.a, half = 0.5 * dt;

  Field u = s.u;
  if (u_op_) {
    u = u_op_->apply_semigroup(u, half);
    if (auto bad = clamp_roundoff(u, kUClampRel)) return PositivityLoss{*bad};
  }

  auto r1 = kernels::reaction_substep(u.span(), s.v.span(), kinetics_, p, a, half, exec_);
  if (r1.blew_up) return BlowupInStep{r1.t_star};

  // Exponential RK2 for v with u frozen: predictor with the coupling at the
  // old v, corrector with the coupling interpolated linearly in time.
  Field up(u.size()), g0(u.size()), g1(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    up[i] = std::pow(u[i], p);
    g0[i] = params_.kappa - up[i] * kinetics_.value(s.v[i]);
  }
  const Field pred = v_op_.apply_with_source(s.v, g0, dt);
  for (std::size_t i = 0; i < u.size(); ++i) {
    g1[i] = params_.kappa - up[i] * kinetics_.value(std::max(pred[i], 0.0));
  }
  Field v = v_op_.apply_with_linear_source(s.v, g0, g1, dt);
  if (auto bad = clamp_roundoff(v, kVClampRel)) return PositivityLoss{*bad};

  auto r2 = kernels::reaction_substep(u.span(), v.span(), kinetics_, p, a, half, exec_);
  if (r2.blew_up) return BlowupInStep{half + r2.t_star};

  if (u_op_) {
    u = u_op_->apply_semigroup(u, half);
    if (auto bad = clamp_roundoff(u, kUClampRel)) return PositivityLoss{*bad};
  }
  return State{std::move(u), std::move(v), s.t + dt};
}

StepResult strang_step(const State& s, const Params& params, const Kinetics& kinetics,
                       const NeumannOperator& op_v, double dt) {
  if (op_v.diffusion() != params.D || op_v.decay() != params.b) {
    throw DomainError("strang_step: operator does not match (D, b)");
  }
  const SplitStepper stepper(op_v.grid(), params, kinetics, op_v.backend());
  return stepper.step(s, dt);
}

double frozen_step_limit(const State& s, const Params& params, const Kinetics& kinetics,
                         double safety) {
  const double su = s.u.max();
  const double floc = kinetics.value(std::max(s.v.max(), 0.0));
  if (!(su > 0.0) || !(floc > 0.0)) return std::numeric_limits<double>::infinity();
  return safety * std::pow(su, 1.0 - params.p) / ((params.p - 1.0) * floc);
}

double adapt_dt(const State& s, double proposed, const StepControl& control,
                const Params& params, const Kinetics& kinetics) {
  const double ceiling = std::min(control.dt_max, proposed);
  const double raw = frozen_step_limit(s, params, kinetics, control.safety);
  return std::clamp(raw, control.dt_min, std::max(ceiling, control.dt_min));
}

namespace {

TraceRow make_row(const State& s, double dt, const Grid1D& grid,
                  const std::vector<Monitor>& monitors) {
  TraceRow row;
  row.t = s.t;
  row.dt = dt;
  row.sup_u = s.u.max();
  row.min_v = s.v.min();
  row.max_v = s.v.max();
  row.mass = mass_functional(s, grid);
  row.margins.reserve(monitors.size());
  for (std::size_t i = 0; i < monitors.size(); ++i) {
    const double m = monitors[i].margin(s);
    row.margins.push_back(m);
    if (!(m >= -monitors[i].tolerance)) row.violations |= (1u << i);
  }
  return row;
}

}  // namespace

SimOutcome simulate(const State& init, const SplitStepper& stepper, const StepControl& control,
                    const std::vector<Monitor>& monitors, std::vector<double> snapshot_times) {
  validate_control(control);
  const Grid1D& grid = stepper.grid();
  check_sizes(init, grid);
  if (monitors.size() > 32) throw DomainError("simulate supports at most 32 monitors");
  if (!(init.u.min() >= 0.0) || !(init.v.min() >= 0.0)) {
    throw DomainError("simulate requires nonnegative initial data");
  }
  const Params& params = stepper.params();
  const Kinetics& kinetics = stepper.kinetics();

  std::sort(snapshot_times.begin(), snapshot_times.end());
  snapshot_times.erase(std::unique(snapshot_times.begin(), snapshot_times.end()),
                       snapshot_times.end());

  SimOutcome out;
  for (const auto& m : monitors) out.trace.monitor_names.push_back(m.name);

  State s = init;
  s.t = 0.0;
  std::size_t next_snap = 0;
  auto take_snapshots = [&] {
    while (next_snap < snapshot_times.size() && snapshot_times[next_snap] <= s.t) {
      if (snapshot_times[next_snap] >= 0.0) out.snapshots.push_back(s);
      ++next_snap;
    }
  };
  out.trace.rows.push_back(make_row(s, 0.0, grid, monitors));
  take_snapshots();

  auto finish_blowup = [&](double t_est, std::size_t cell) {
    out.status = SimStatus::BlewUp;
    out.blowup_time_estimate = t_est;
    out.blowup_cell = cell;
    out.t_final = t_est;
    out.final_state = s;
    return out;
  };

  double proposed = control.dt_init;
  while (s.t < control.t_end) {
    const double remaining = control.t_end - s.t;
    const double raw = frozen_step_limit(s, params, kinetics, control.safety);
    double dt = adapt_dt(s, proposed, control, params, kinetics);
    const bool at_floor = raw < control.dt_min;
    double limit = remaining;
    if (next_snap < snapshot_times.size()) limit = std::min(limit, snapshot_times[next_snap] - s.t);
    bool lands = false;
    if (dt >= limit) {
      dt = limit;
      lands = true;
    }

    StepResult r = stepper.step(s, dt);
    if (auto* bl = std::get_if<BlowupInStep>(&r)) {
      return finish_blowup(s.t + bl->t_star, s.u.argmax());
    }
    if (auto* neg = std::get_if<PositivityLoss>(&r)) {
      ++out.rejected_steps;
      if (0.5 * dt < control.dt_min) {
        out.status = SimStatus::DtUnderflow;
        out.t_final = s.t;
        out.final_state = s;
        out.note = "positivity lost at dt_min (min value " + std::to_string(neg->min_value) + ")";
        return out;
      }
      proposed = 0.5 * dt;
      continue;
    }

    State next = std::get<State>(std::move(r));
    if (lands) {
      next.t = (limit == remaining) ? control.t_end : snapshot_times[next_snap];
    }
    if (!next.u.all_finite() || !next.v.all_finite()) {
      out.status = SimStatus::DtUnderflow;
      out.t_final = s.t;
      out.final_state = s;
      out.note = "non-finite values after a step";
      return out;
    }
    s = std::move(next);
    out.trace.rows.push_back(make_row(s, dt, grid, monitors));
    take_snapshots();

    const std::size_t i = s.u.argmax();
    if (s.u[i] > control.blowup_threshold) {
      const auto rest = frozen_blowup_time(s.u[i], kinetics.value(s.v[i]), params.p, params.a);
      return finish_blowup(s.t + rest.value_or(0.0), i);
    }
    if (at_floor) {
      out.status = SimStatus::DtUnderflow;
      out.t_final = s.t;
      out.final_state = s;
      out.note = "step size fell below dt_min without a detected singularity";
      return out;
    }
    proposed = control.dt_max;
  }

  out.status = SimStatus::Completed;
  out.t_final = s.t;
  out.final_state = std::move(s);
  return out;
}

SimOutcome simulate(const State& init, const Params& params, const Kinetics& kinetics,
                    const Grid1D& grid, const StepControl& control,
                    const std::vector<Monitor>& monitors, std::vector<double> snapshot_times) {
  const SplitStepper stepper(grid, params, kinetics);
  return simulate(init, stepper, control, monitors, std::move(snapshot_times));
}

}  // namespace rdode
