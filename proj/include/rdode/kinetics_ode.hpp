#pragma once

// Pointwise mathematics: the closed-form u-flow with frozen f(v), the
// spatially homogeneous kinetic system, its steady states and the
// dispersion relation of the linearization.

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "rdode/core.hpp"

namespace rdode {

class UnsupportedKinetics : public Error {
 public:
  using Error::Error;
};

class StepTooLarge : public Error {
 public:
  using Error::Error;
};

/// The frozen scalar flow u' = -a u + u^p F reaches infinity inside the step.
struct BlowupInStep {
  double t_star;  // time of the singularity measured from the start of the step
};

using UStepResult = std::variant<double, BlowupInStep>;

/// Exact solution of u' = -a u + u^p f_val over a step tau, i.e.
///   u(tau) = e^{-a tau} (u^{1-p} - f_val (1 - e^{(1-p) a tau}) / a)^{-1/(p-1)},
/// evaluated as u exp(-a tau - log1p(-rel)/(p-1)) with
/// rel = u^{p-1} f_val (1 - e^{(1-p) a tau}) / a, which stays finite for large u.
UStepResult exact_u_step(double u, double f_val, double p, double a, double tau);

/// Time to the singularity of u' = -a u + u^p f_val started at u, i.e.
/// ln(1 - a u^{1-p}/f_val) / ((1-p) a); nullopt when the flow stays bounded.
std::optional<double> frozen_blowup_time(double u, double f_val, double p, double a);

// ---------------------------------------------------------------------------
// Kinetic (spatially homogeneous) system

struct KineticState {
  double u_bar = 0.0;
  double v_bar = 0.0;
  double t = 0.0;
};

/// Right-hand side (du/dt, dv/dt) of the kinetic system.
std::array<double, 2> kinetic_rhs(double u, double v, const Params& params,
                                  const Kinetics& kinetics);

/// Classic fourth-order Runge-Kutta from s0 to t_end with step dt (the last
/// step is shortened to land on t_end). Returns every state including s0.
/// Throws StepTooLarge if a component goes negative beyond roundoff.
std::vector<KineticState> kinetic_integrate(const KineticState& s0, const Params& params,
                                            const Kinetics& kinetics, double t_end, double dt);

/// max{u0 + v0, kappa / min{a, b}}: the sum u + v never exceeds this.
double kinetic_sum_bound(const KineticState& s0, const Params& params);

enum class SteadyKind { Trivial, NontrivialMinus, NontrivialPlus };

const char* to_string(SteadyKind kind);

struct SteadyState {
  double u_bar = 0.0;
  double v_bar = 0.0;
  SteadyKind kind = SteadyKind::Trivial;
};

/// Constant steady states for p = 2, f(v) = v: always (0, kappa/b); plus
/// v = (kappa +- sqrt(kappa^2 - 4 a^2 b)) / (2b), u = a / v when the
/// discriminant is nonnegative (a single state when it vanishes).
std::vector<SteadyState> steady_states(const Params& params, const Kinetics& kinetics);

/// Residuals of both stationary equations at ss.
std::array<double, 2> stationary_residual(const SteadyState& ss, const Params& params,
                                          const Kinetics& kinetics);

/// Jacobian of the kinetic right-hand side, row-major {J11, J12, J21, J22}.
std::array<double, 4> kinetic_jacobian(double u, double v, const Params& params,
                                       const Kinetics& kinetics);

struct DispersionPoint {
  double k = 0.0;
  double growth = 0.0;  // max real part of the eigenvalues
  std::complex<double> lambda_plus;
  std::complex<double> lambda_minus;
};

/// Eigenvalues of J - diag(d k^2, D k^2) for every wavenumber k.
std::vector<DispersionPoint> dispersion_relation(const SteadyState& ss, const Params& params,
                                                 const Kinetics& kinetics,
                                                 std::span<const double> wavenumbers);

}  // namespace rdode
