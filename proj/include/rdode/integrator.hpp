#pragma once

// Operator-splitting time stepper for the full system on a Grid1D.
//
// One step of size dt is the symmetric composition A(dt/2) B(dt) A(dt/2):
//   A  exact per-node flow u' = -a u + u^p f(v) with v frozen,
//   B  v' = D v_xx - b v + kappa - u^p f(v) with u frozen, by a two-stage
//      exponential Runge-Kutta step (the linear part is propagated exactly,
//      the coupling is interpolated linearly between predictor and start).
// When d > 0 the u-diffusion is applied exactly in the cosine basis around
// each A half step: Diff(dt/2) A(dt/2) B(dt) A(dt/2) Diff(dt/2).

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rdode/analysis.hpp"
#include "rdode/core.hpp"
#include "rdode/kinetics_ode.hpp"
#include "rdode/spectral.hpp"

namespace rdode {

struct StepControl {
  double dt_init = 1e-3;
  double dt_min = 1e-12;
  double dt_max = 1e-3;
  double safety = 0.5;
  double blowup_threshold = 10.0;  // sup-norm trigger
  double t_end = 5.0;

  bool operator==(const StepControl&) const = default;
};

/// Throws ConstraintViolation unless 0 < dt_min <= dt_init <= dt_max,
/// safety in (0, 1), blowup_threshold > 1 and t_end > 0.
void validate_control(const StepControl& c);

enum class SimStatus { Completed, BlewUp, DtUnderflow };
const char* to_string(SimStatus s);

/// v dropped below -1e-12 ||v||_inf (or u below -1e-10 ||u||_inf) inside a
/// step, which means the step was too coarse for the frozen coupling.
struct PositivityLoss {
  double min_value;
};

using StepResult = std::variant<State, BlowupInStep, PositivityLoss>;

class SplitStepper {
 public:
  SplitStepper(const Grid1D& grid, const Params& params, const Kinetics& kinetics,
               TransformBackend backend = default_backend(),
               kernels::Exec exec = kernels::Exec::Parallel);

  const Grid1D& grid() const noexcept { return v_op_.grid(); }
  const Params& params() const noexcept { return params_; }
  const Kinetics& kinetics() const noexcept { return kinetics_; }
  const NeumannOperator& v_operator() const noexcept { return v_op_; }

  /// One Strang step. BlowupInStep::t_star is measured from s.t.
  StepResult step(const State& s, double dt) const;

 private:
  Params params_;
  Kinetics kinetics_;
  kernels::Exec exec_;
  NeumannOperator v_op_;                  // D Lap - b I
  std::optional<NeumannOperator> u_op_;   // d Lap, only when d > 0
};

/// Convenience wrapper around SplitStepper::step using an existing v operator.
StepResult strang_step(const State& s, const Params& params, const Kinetics& kinetics,
                       const NeumannOperator& op_v, double dt);

/// safety * (frozen-ODE time to blow-up from sup u) ~ safety ||u||^{1-p} / ((p-1) F_loc),
/// F_loc = f(max v); +infinity when u vanishes or f(max v) = 0.
double frozen_step_limit(const State& s, const Params& params, const Kinetics& kinetics,
                         double safety);

/// clamp(frozen_step_limit, dt_min, min(dt_max, proposed)).
double adapt_dt(const State& s, double proposed, const StepControl& control,
                const Params& params, const Kinetics& kinetics);

struct SimOutcome {
  SimStatus status = SimStatus::Completed;
  double t_final = 0.0;
  std::optional<double> blowup_time_estimate;
  std::optional<std::size_t> blowup_cell;  // node index
  DiagnosticTrace trace;
  State final_state;
  std::vector<State> snapshots;  // one per requested time that was reached
  std::size_t rejected_steps = 0;
  std::string note;
};

/// Runs until t_end, blow-up or step underflow. Every monitor is evaluated
/// at t = 0 and after each accepted step. Steps are shortened to land on
/// every requested snapshot time.
SimOutcome simulate(const State& init, const SplitStepper& stepper, const StepControl& control,
                    const std::vector<Monitor>& monitors = {},
                    std::vector<double> snapshot_times = {});

SimOutcome simulate(const State& init, const Params& params, const Kinetics& kinetics,
                    const Grid1D& grid, const StepControl& control,
                    const std::vector<Monitor>& monitors = {},
                    std::vector<double> snapshot_times = {});

}  // namespace rdode
