#pragma once

// Scenario construction and the named experiments built on simulate():
// single runs, the diffusion dichotomy, grid refinement and parameter sweeps.

#include <optional>
#include <string>
#include <vector>

#include "rdode/analysis.hpp"
#include "rdode/config.hpp"
#include "rdode/integrator.hpp"

namespace rdode {

/// An initial datum fails one of the blow-up hypotheses. `hypothesis()` is
/// "profile" (u0 above the admissible spike profile), "threshold" (u0(0)
/// below the threshold) or "floor" (v0 not above R0).
class HypothesisViolation : public Error {
 public:
  HypothesisViolation(std::string hypothesis, const std::string& what)
      : Error(hypothesis + " hypothesis violated: " + what), hypothesis_(std::move(hypothesis)) {}
  const std::string& hypothesis() const noexcept { return hypothesis_; }

 private:
  std::string hypothesis_;
};

/// Spike profile (u0(0)^{1-p} + 2 eps^{1-p} |x|^alpha)^{-1/(p-1)} scaled by
/// (1 - 1e-6) and v0 = v0_bar. Checks every hypothesis against ctx.
State theorem_initial_data(const Grid1D& grid, double p, double alpha, double eps,
                           double u0_at_0, double v0_bar, const BoundContext& ctx);

/// Bound context for a theorem_data scenario: Cq from the estimator (or its
/// override), eps from the scenario or the largest admissible value.
BoundContext context_for(const ExperimentConfig& c);

/// Initial state for the configured scenario. ctx is required for theorem_data.
State initial_state(const ExperimentConfig& c, const std::optional<BoundContext>& ctx);

/// u0(0) requested by a theorem_data scenario.
double requested_u0_at_0(const TheoremScenario& th, const BoundContext& ctx);

/// Monitors for a run: mass and v ceiling always, envelope and v floor when
/// a bound context is present.
std::vector<Monitor> standard_monitors(const State& init, const Params& params,
                                       const Grid1D& grid,
                                       const std::optional<BoundContext>& ctx);

struct RunResult {
  std::optional<BoundContext> ctx;
  std::optional<double> u0_at_0;
  std::optional<double> time_bound;  // blowup_time_upper_bound(u0(0))
  SimOutcome outcome;
};

/// One simulation with params.d overridden by d when given.
RunResult run_single(const ExperimentConfig& c, std::optional<double> d = std::nullopt);

struct DichotomyResult {
  RunResult without_diffusion;  // d = 0
  RunResult with_diffusion;     // d = dichotomy.d or D
  double d_used = 0.0;
  double initial_sup_u = 0.0;
  double max_sup_u_with_diffusion = 0.0;
};

DichotomyResult run_dichotomy(const ExperimentConfig& c);

struct ConvergenceRow {
  std::size_t ncells = 0;
  double dt_max = 0.0;
  SimStatus status = SimStatus::Completed;
  std::optional<double> blowup_time;  // nullopt: flagged NoBlowup
  std::optional<std::size_t> blowup_cell;
  std::size_t origin_index = 0;
  double envelope_min_margin = 0.0;
  double floor_min_margin = 0.0;
  double mass_min_margin = 0.0;
  double ceiling_min_margin = 0.0;
};

struct ConvergenceTable {
  BoundContext ctx;                 // built once on the base grid
  std::vector<ConvergenceRow> rows;
  std::vector<double> differences;  // |T(N_i) - T(N_{i+1})| for consecutive blow-up rows
};

/// Repeats the d = 0 run over the levels with dt_max scaled by
/// base ncells / N; the bound context (and so eps, R0, the threshold) is
/// computed once on the base grid.
ConvergenceTable convergence_study(const ExperimentConfig& c,
                                   const std::vector<std::size_t>& levels);

struct SweepRow {
  double u0_multiple = 0.0;
  double eps = 0.0;  // requested; 0 means "largest admissible"
  double alpha = 0.0;
  double p = 0.0;
  bool skipped = false;
  std::string reason;
  SimStatus status = SimStatus::Completed;
  std::optional<double> blowup_time;
  std::optional<double> time_bound;
  double eps_used = 0.0;
  double u0_at_0 = 0.0;
};

/// Cartesian product of the sweep axes, d = 0, one independent run per point.
std::vector<SweepRow> parameter_sweep(const ExperimentConfig& c);

}  // namespace rdode
