#include "rdode/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rdode {

bool alpha_admissible(double alpha, double p, int n) {
  if (!(p > 1.0) || n < 1) return false;
  const double upper = (n == 1 ? 1.0 : 2.0) * (p - 1.0) / p;
  return alpha > 0.0 && alpha < upper;
}

std::pair<double, double> q_window(double alpha, double p, int n) {
  if (!alpha_admissible(alpha, p, n)) {
    throw AlphaInadmissible("alpha = " + std::to_string(alpha) + " is outside the admissible " +
                            "window for p = " + std::to_string(p));
  }
  const double lo = std::max(1.0, 0.5 * n);
  const double hi = n * (p - 1.0) / (alpha * p);
  return {lo, hi};
}

double weighted_lq_norm(double L, double alpha, double p, double q, int n) {
  if (!(L > 0.0)) throw DomainError("weighted_lq_norm requires L > 0");
  if (!(q >= 1.0)) throw DomainError("weighted_lq_norm requires q >= 1");
  const double gamma = alpha * p / (p - 1.0);
  if (!(gamma >= 0.0)) throw DomainError("weighted_lq_norm requires alpha p/(p-1) >= 0");
  const double expo = n - gamma * q;
  if (!(expo > 0.0)) {
    throw NotIntegrable("|x|^{-" + std::to_string(gamma) + "} is not in L^" + std::to_string(q));
  }
  // Surface measure of the unit sphere in R^n (2 for n = 1).
  const double sphere =
      2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
  return std::pow(sphere * std::pow(L, expo) / expo, 1.0 / q);
}

double smoothing_time_factor(double T, double q, int n) {
  const double s = n / (2.0 * q);
  if (!(s < 1.0)) throw DomainError("smoothing_time_factor requires q > n/2");
  return T + std::pow(T, 1.0 - s) / (1.0 - s);
}

namespace {

double midpoint_q(double alpha, double p, int n) {
  const auto [lo, hi] = q_window(alpha, p, n);
  return 0.5 * (lo + hi);
}

}  // namespace

double smoothing_constant_for(const Params& params, const Grid1D& grid, double alpha,
                              const SmoothingSampler& sampler) {
  const double q = midpoint_q(alpha, params.p, 1);
  const NeumannOperator op(grid, params.D, params.b);
  return estimate_smoothing_constant(op, q, sampler);
}

double c0_constant(const Params& params, const Kinetics& kinetics, double L, double alpha,
                   double v0_bar, double cq, int n) {
  const double q = midpoint_q(alpha, params.p, n);
  const double R1 = std::max(v0_bar, params.kappa / params.b);
  const double fsup = f_sup_below(kinetics, R1);
  return cq * fsup * weighted_lq_norm(L, alpha, params.p, q, n) *
         smoothing_time_factor(1.0, q, n);
}

double largest_admissible_eps(double c0, double v0_bar, const Params& params) {
  const double floor_ref = std::min(v0_bar, params.kappa / params.b);
  if (!(floor_ref > 0.0)) {
    throw FloorNotPositive("min{v0_bar, kappa/b} must be positive to admit any eps");
  }
  if (!(c0 > 0.0)) return std::numeric_limits<double>::infinity();
  return std::pow(0.5 * floor_ref / c0, 1.0 / params.p);
}

BoundContext build_bound_context(const Params& params, const Kinetics& kinetics,
                                 const Grid1D& grid, double alpha, double eps, double v0_bar,
                                 double cq) {
  if (!alpha_admissible(alpha, params.p, 1)) {
    throw AlphaInadmissible("alpha = " + std::to_string(alpha) +
                            " must lie in (0, (p-1)/p) for n = 1");
  }
  if (!(v0_bar > 0.0)) throw DomainError("v0_bar must be positive");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (!(cq >= 0.0)) throw DomainError("Cq must be nonnegative");

  BoundContext ctx;
  ctx.p = params.p;
  ctx.a = params.a;
  ctx.n = 1;
  ctx.alpha = alpha;
  ctx.eps = eps;
  ctx.v0_bar = v0_bar;
  ctx.q = midpoint_q(alpha, params.p, 1);
  ctx.Cq = cq;
  ctx.weighted_norm = weighted_lq_norm(grid.half_length(), alpha, params.p, ctx.q, 1);
  ctx.R1 = std::max(v0_bar, params.kappa / params.b);
  ctx.f_sup_R1 = f_sup_below(kinetics, ctx.R1);
  ctx.C0 = c0_constant(params, kinetics, grid.half_length(), alpha, v0_bar, cq, 1);
  ctx.R0 = std::min(v0_bar, params.kappa / params.b) - std::pow(eps, params.p) * ctx.C0;
  if (!(ctx.R0 > 0.0)) {
    throw FloorNotPositive("eps^p C0 = " + std::to_string(std::pow(eps, params.p) * ctx.C0) +
                           " exceeds min{v0_bar, kappa/b}; the v floor R0 is not positive");
  }
  ctx.F0 = f_inf_above(kinetics, ctx.R0);
  const double p = params.p, a = params.a;
  ctx.u0_threshold = std::pow(a / (-std::expm1((1.0 - p) * a) * ctx.F0), 1.0 / (p - 1.0));
  ctx.Tmax_bound = 1.0;
  return ctx;
}

BoundContext build_bound_context(const Params& params, const Kinetics& kinetics,
                                 const Grid1D& grid, double alpha, double eps, double v0_bar,
                                 const SmoothingSampler& sampler) {
  if (!alpha_admissible(alpha, params.p, 1)) {
    throw AlphaInadmissible("alpha = " + std::to_string(alpha) +
                            " must lie in (0, (p-1)/p) for n = 1");
  }
  const double cq = smoothing_constant_for(params, grid, alpha, sampler);
  return build_bound_context(params, kinetics, grid, alpha, eps, v0_bar, cq);
}

std::optional<double> blowup_time_upper_bound(double u0_at_0, const BoundContext& ctx) {
  if (!(u0_at_0 > 0.0)) throw DomainError("blowup_time_upper_bound requires u0(0) > 0");
  const double r = ctx.a * std::pow(u0_at_0, 1.0 - ctx.p) / ctx.F0;
  if (r >= 1.0) return std::nullopt;
  return std::log1p(-r) / ((1.0 - ctx.p) * ctx.a);
}

double envelope_check(const State& s, const Grid1D& grid, const BoundContext& ctx) {
  check_sizes(s, grid);
  const double expo = ctx.alpha / (ctx.p - 1.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, std::pow(std::abs(grid.x(i)), expo) * s.u[i]);
  }
  return ctx.eps - worst;
}

double v_floor_check(const State& s, const BoundContext& ctx) { return s.v.min() - ctx.R0; }

double v_ceiling_check(const State& s, const Field& v0, const Params& params) {
  return std::max(v0.max(), params.kappa / params.b) - s.v.max();
}

double mass_functional(const State& s, const Grid1D& grid) {
  check_sizes(s, grid);
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) acc += grid.weight(i) * (s.u[i] + s.v[i]);
  return acc;
}

double mass_bound(const State& s0, const Params& params, const Grid1D& grid) {
  return std::max(mass_functional(s0, grid),
                  params.kappa * grid.measure() / std::min(params.a, params.b));
}

double holder_modulus(const Field& w, const Grid1D& grid, double alpha, kernels::Exec exec) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("holder_modulus requires alpha in (0,1]");
  if (w.size() != grid.size()) throw SizeMismatch("holder_modulus: field and grid differ");
  return kernels::holder_modulus(w.span(), grid.nodes(), alpha, exec);
}

Monitor envelope_monitor(const Grid1D& grid, const BoundContext& ctx) {
  return {"envelope", [grid, ctx](const State& s) { return envelope_check(s, grid, ctx); },
          1e-8 * std::max(1.0, ctx.eps)};
}

Monitor v_floor_monitor(const BoundContext& ctx) {
  return {"vfloor", [ctx](const State& s) { return v_floor_check(s, ctx); },
          1e-8 * std::max(1.0, ctx.R0)};
}

Monitor v_ceiling_monitor(const Field& v0, const Params& params) {
  return {"vceiling", [v0, params](const State& s) { return v_ceiling_check(s, v0, params); },
          1e-8};
}

Monitor mass_monitor(const State& s0, const Params& params, const Grid1D& grid) {
  const double bound = mass_bound(s0, params, grid);
  return {"mass",
          [bound, grid](const State& s) { return bound - mass_functional(s, grid); },
          1e-6 * std::max(1.0, bound)};
}

std::optional<std::size_t> DiagnosticTrace::monitor_index(const std::string& name) const {
  const auto it = std::find(monitor_names.begin(), monitor_names.end(), name);
  if (it == monitor_names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - monitor_names.begin());
}

std::optional<double> DiagnosticTrace::min_margin(const std::string& name) const {
  const auto idx = monitor_index(name);
  if (!idx || rows.empty()) return std::nullopt;
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) m = std::min(m, r.margins[*idx]);
  return m;
}

std::size_t DiagnosticTrace::violation_count(const std::string& name) const {
  const auto idx = monitor_index(name);
  if (!idx) return 0;
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [&](const TraceRow& r) {
    return (r.violations >> *idx) & 1u;
  }));
}

}  // namespace rdode
