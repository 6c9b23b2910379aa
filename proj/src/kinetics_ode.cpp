#include "rdode/kinetics_ode.hpp"

#include <algorithm>
#include <cmath>

namespace rdode {

UStepResult exact_u_step(double u, double f_val, double p, double a, double tau) {
  if (!(u >= 0.0) || !(f_val >= 0.0)) {
    throw DomainError("exact_u_step requires u >= 0 and f_val >= 0");
  }
  if (!(tau > 0.0)) throw DomainError("exact_u_step requires tau > 0");
  if (u == 0.0) return 0.0;
  if (f_val == 0.0) return u * std::exp(-a * tau);

  const double up = std::pow(u, p - 1.0);
  const double growth = -std::expm1((1.0 - p) * a * tau) / a;  // (1 - e^{(1-p)a tau})/a
  const double rel = up * f_val * growth;
  if (rel >= 1.0) {
    const double r = a / (up * f_val);
    return BlowupInStep{std::log1p(-r) / ((1.0 - p) * a)};
  }
  return u * std::exp(-a * tau - std::log1p(-rel) / (p - 1.0));
}

std::optional<double> frozen_blowup_time(double u, double f_val, double p, double a) {
  if (!(u > 0.0) || !(f_val > 0.0)) return std::nullopt;
  const double r = a / (std::pow(u, p - 1.0) * f_val);
  if (r >= 1.0) return std::nullopt;
  return std::log1p(-r) / ((1.0 - p) * a);
}

std::array<double, 2> kinetic_rhs(double u, double v, const Params& params,
                                  const Kinetics& kinetics) {
  const double up = std::pow(std::max(u, 0.0), params.p);
  const double reaction = up * kinetics.value(std::max(v, 0.0));
  return {-params.a * u + reaction, -params.b * v - reaction + params.kappa};
}

std::vector<KineticState> kinetic_integrate(const KineticState& s0, const Params& params,
                                            const Kinetics& kinetics, double t_end, double dt) {
  if (!(dt > 0.0)) throw DomainError("kinetic_integrate requires dt > 0");
  if (!(t_end > s0.t)) throw DomainError("kinetic_integrate requires t_end > start time");
  if (s0.u_bar < 0.0 || s0.v_bar < 0.0) {
    throw DomainError("kinetic_integrate requires a nonnegative initial state");
  }

  std::vector<KineticState> out;
  out.reserve(static_cast<std::size_t>(std::ceil((t_end - s0.t) / dt)) + 2);
  out.push_back(s0);

  const double scale = std::max(1.0, kinetic_sum_bound(s0, params));
  const double tol = 1e-8 * scale;
  KineticState s = s0;
  auto rhs = [&](double u, double v) { return kinetic_rhs(u, v, params, kinetics); };

  while (s.t < t_end) {
    const double h = std::min(dt, t_end - s.t);
    const auto k1 = rhs(s.u_bar, s.v_bar);
    const auto k2 = rhs(s.u_bar + 0.5 * h * k1[0], s.v_bar + 0.5 * h * k1[1]);
    const auto k3 = rhs(s.u_bar + 0.5 * h * k2[0], s.v_bar + 0.5 * h * k2[1]);
    const auto k4 = rhs(s.u_bar + h * k3[0], s.v_bar + h * k3[1]);
    double u = s.u_bar + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    double v = s.v_bar + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    if (u < -tol || v < -tol || !std::isfinite(u) || !std::isfinite(v)) {
      throw StepTooLarge("kinetic_integrate lost nonnegativity at t = " + std::to_string(s.t) +
                         "; reduce dt");
    }
    s.u_bar = std::max(u, 0.0);
    s.v_bar = std::max(v, 0.0);
    // Accumulating by index avoids drift in t over many steps.
    s.t = (h == dt) ? s0.t + static_cast<double>(out.size()) * dt : t_end;
    if (s.t > t_end) s.t = t_end;
    out.push_back(s);
  }
  return out;
}

double kinetic_sum_bound(const KineticState& s0, const Params& params) {
  return std::max(s0.u_bar + s0.v_bar, params.kappa / std::min(params.a, params.b));
}

const char* to_string(SteadyKind kind) {
  switch (kind) {
    case SteadyKind::Trivial:
      return "trivial";
    case SteadyKind::NontrivialMinus:
      return "nontrivial_minus";
    case SteadyKind::NontrivialPlus:
      return "nontrivial_plus";
  }
  return "unknown";
}

std::vector<SteadyState> steady_states(const Params& params, const Kinetics& kinetics) {
  if (params.p != 2.0 || !std::holds_alternative<IdentityKinetics>(kinetics.family())) {
    throw UnsupportedKinetics("steady states are available only for p = 2, f(v) = v");
  }
  const double a = params.a, b = params.b, kappa = params.kappa;
  std::vector<SteadyState> out{{0.0, kappa / b, SteadyKind::Trivial}};

  // b v^2 - kappa v + a^2 = 0
  const double disc = kappa * kappa - 4.0 * a * a * b;
  if (disc < 0.0) return out;
  if (disc == 0.0) {
    const double v = kappa / (2.0 * b);
    out.push_back({a / v, v, SteadyKind::NontrivialPlus});
    return out;
  }
  const double v_plus = (kappa + std::sqrt(disc)) / (2.0 * b);
  const double v_minus = a * a / (b * v_plus);  // product of roots, no cancellation
  out.push_back({a / v_minus, v_minus, SteadyKind::NontrivialMinus});
  out.push_back({a / v_plus, v_plus, SteadyKind::NontrivialPlus});
  return out;
}

std::array<double, 2> stationary_residual(const SteadyState& ss, const Params& params,
                                          const Kinetics& kinetics) {
  return kinetic_rhs(ss.u_bar, ss.v_bar, params, kinetics);
}

std::array<double, 4> kinetic_jacobian(double u, double v, const Params& params,
                                       const Kinetics& kinetics) {
  const double p = params.p;
  const double f = kinetics.value(v);
  const double fp = kinetics.derivative(v);
  const double up = std::pow(u, p);
  const double dup = u > 0.0 ? p * std::pow(u, p - 1.0) : 0.0;
  return {-params.a + dup * f, up * fp, -dup * f, -params.b - up * fp};
}

std::vector<DispersionPoint> dispersion_relation(const SteadyState& ss, const Params& params,
                                                 const Kinetics& kinetics,
                                                 std::span<const double> wavenumbers) {
  const auto J = kinetic_jacobian(ss.u_bar, ss.v_bar, params, kinetics);
  std::vector<DispersionPoint> out;
  out.reserve(wavenumbers.size());
  for (double k : wavenumbers) {
    const double k2 = k * k;
    const double m11 = J[0] - params.d * k2;
    const double m22 = J[3] - params.D * k2;
    const double half_tr = 0.5 * (m11 + m22);
    const double det = m11 * m22 - J[1] * J[2];
    const double disc = 0.25 * (m11 - m22) * (m11 - m22) + J[1] * J[2];

    DispersionPoint pt;
    pt.k = k;
    if (disc >= 0.0) {
      // Larger-magnitude root first, the other from the product of roots.
      const double s = std::sqrt(disc);
      const double big = half_tr >= 0.0 ? half_tr + s : half_tr - s;
      const double small = big != 0.0 ? det / big : 0.0;
      const double hi = std::max(big, small), lo = std::min(big, small);
      pt.lambda_plus = {hi, 0.0};
      pt.lambda_minus = {lo, 0.0};
      pt.growth = hi;
    } else {
      const double s = std::sqrt(-disc);
      pt.lambda_plus = {half_tr, s};
      pt.lambda_minus = {half_tr, -s};
      pt.growth = half_tr;
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace rdode
