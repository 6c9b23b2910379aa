#pragma once

// Constants and runtime predicates for the blow-up mechanism: the
// admissible exponent window, the envelope eps |x|^{-alpha/(p-1)}, the floor
// R0 for v, the initial-spike threshold and the blow-up time bound it
// implies, plus mass and Holder diagnostics.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rdode/core.hpp"
#include "rdode/spectral.hpp"

namespace rdode {

class NotIntegrable : public Error {
 public:
  using Error::Error;
};

class FloorNotPositive : public Error {
 public:
  using Error::Error;
};

class AlphaInadmissible : public Error {
 public:
  using Error::Error;
};

/// alpha in (0, (p-1)/p) for n = 1 and alpha in (0, 2(p-1)/p) for n >= 2.
bool alpha_admissible(double alpha, double p, int n = 1);

/// Open interval (max{1, n/2}, n(p-1)/(alpha p)) of integrability exponents.
std::pair<double, double> q_window(double alpha, double p, int n = 1);

/// || |x|^{-alpha p/(p-1)} ||_{L^q} over (-L, L) for n = 1, or over the ball
/// of radius L for n >= 2. Throws NotIntegrable when gamma q >= n.
double weighted_lq_norm(double L, double alpha, double p, double q, int n = 1);

/// int_0^T (1 + (T-s)^{-n/(2q)}) ds = T + T^{1-n/(2q)} / (1 - n/(2q)).
double smoothing_time_factor(double T, double q, int n = 1);

struct BoundContext {
  // Configuration echo.
  double p = 2.0;
  double a = 1.0;
  int n = 1;
  double alpha = 0.0;
  double eps = 0.0;
  double v0_bar = 0.0;

  // Derived constants.
  double q = 0.0;
  double Cq = 0.0;           // empirical smoothing constant
  bool cq_empirical = true;  // Cq is a sampled lower estimate
  double weighted_norm = 0.0;
  double R1 = 0.0;           // max{v0_bar, kappa/b}
  double f_sup_R1 = 0.0;
  double C0 = 0.0;
  double R0 = 0.0;           // min{v0_bar, kappa/b} - eps^p C0
  double F0 = 0.0;           // inf_{v >= R0} f
  double u0_threshold = 0.0;
  double Tmax_bound = 1.0;
};

/// Cq estimated with the semigroup of (D Lap - b I) on `grid` for the q
/// that build_bound_context would pick.
double smoothing_constant_for(const Params& params, const Grid1D& grid, double alpha,
                              const SmoothingSampler& sampler);

/// C0 = Cq sup_{[0,R1]} f || |x|^{-alpha p/(p-1)} ||_q (T + (1-n/(2q))^{-1} T^{1-n/(2q)})
/// with T = 1 and q the midpoint of q_window. Independent of eps.
double c0_constant(const Params& params, const Kinetics& kinetics, double L, double alpha,
                   double v0_bar, double cq, int n = 1);

/// Largest eps with eps^p C0 <= 1/2 min{v0_bar, kappa/b}.
double largest_admissible_eps(double c0, double v0_bar, const Params& params);

BoundContext build_bound_context(const Params& params, const Kinetics& kinetics,
                                 const Grid1D& grid, double alpha, double eps, double v0_bar,
                                 double cq);

BoundContext build_bound_context(const Params& params, const Kinetics& kinetics,
                                 const Grid1D& grid, double alpha, double eps, double v0_bar,
                                 const SmoothingSampler& sampler = {});

/// Time at which the lower bound for u(0, t) with f(v) >= F0 becomes
/// singular: ln(1 - a u0^{1-p}/F0)/((1-p) a); nullopt when it never does.
std::optional<double> blowup_time_upper_bound(double u0_at_0, const BoundContext& ctx);

// ---------------------------------------------------------------------------
// Margins (positive means the estimate holds)

/// eps - max_i |x_i|^{alpha/(p-1)} u_i.
double envelope_check(const State& s, const Grid1D& grid, const BoundContext& ctx);
/// min v - R0.
double v_floor_check(const State& s, const BoundContext& ctx);
/// max{||v0||_inf, kappa/b} - max v.
double v_ceiling_check(const State& s, const Field& v0, const Params& params);

/// Trapezoid approximation of int (u + v) dx.
double mass_functional(const State& s, const Grid1D& grid);
/// max{mass(s0), kappa |Omega| / min{a, b}}.
double mass_bound(const State& s0, const Params& params, const Grid1D& grid);

double holder_modulus(const Field& w, const Grid1D& grid, double alpha,
                      kernels::Exec exec = kernels::Exec::Parallel);

// ---------------------------------------------------------------------------
// Runtime monitors and the per-step trace

struct Monitor {
  std::string name;
  std::function<double(const State&)> margin;
  double tolerance = 0.0;  // violated when margin < -tolerance
};

Monitor envelope_monitor(const Grid1D& grid, const BoundContext& ctx);
Monitor v_floor_monitor(const BoundContext& ctx);
Monitor v_ceiling_monitor(const Field& v0, const Params& params);
Monitor mass_monitor(const State& s0, const Params& params, const Grid1D& grid);

struct TraceRow {
  double t = 0.0;
  double dt = 0.0;
  double sup_u = 0.0;
  double min_v = 0.0;
  double max_v = 0.0;
  double mass = 0.0;
  std::vector<double> margins;   // one per monitor, in monitor order
  std::uint32_t violations = 0;  // bit i set when monitor i is violated
};

struct DiagnosticTrace {
  std::vector<std::string> monitor_names;
  std::vector<TraceRow> rows;

  /// Index of a monitor by name, or nullopt.
  std::optional<std::size_t> monitor_index(const std::string& name) const;
  /// Minimum margin over all rows for the named monitor.
  std::optional<double> min_margin(const std::string& name) const;
  /// Number of rows in which the named monitor was violated.
  std::size_t violation_count(const std::string& name) const;
};

}  // namespace rdode
