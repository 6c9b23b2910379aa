#include <cmath>

#include "doctest.h"
#include "rdode/analysis.hpp"

using namespace rdode;

namespace {

const Params kDefault{0.0, 1.0, 2.0, 1.0, 1.0, 3.0};

// Midpoint rule for int_{-L}^{L} |x|^{-gamma q} dx after substituting
// x = L s^{1/(1-gamma q)}, which removes the singularity at 0.
double weighted_norm_quadrature(double L, double gamma, double q) {
  const double e = 1.0 - gamma * q;
  const int n = 200000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = (i + 0.5) / n;
    const double x = L * std::pow(s, 1.0 / e);
    const double dx = L * std::pow(s, 1.0 / e - 1.0) / e / n;
    acc += std::pow(x, -gamma * q) * dx;
  }
  return std::pow(2.0 * acc, 1.0 / q);
}

}  // namespace

TEST_CASE("alpha_admissible windows") {
  CHECK(alpha_admissible(0.25, 2.0, 1));
  CHECK_FALSE(alpha_admissible(0.6, 2.0, 1));
  CHECK(alpha_admissible(0.9, 2.0, 2));
  CHECK_FALSE(alpha_admissible(0.5, 2.0, 1));
  CHECK_FALSE(alpha_admissible(0.0, 2.0, 1));
  CHECK_FALSE(alpha_admissible(0.1, 1.0, 1));
}

TEST_CASE("q_window") {
  const auto [lo, hi] = q_window(0.25, 2.0, 1);
  CHECK(lo == 1.0);
  CHECK(hi == doctest::Approx(2.0));
  const auto w2 = q_window(0.5, 2.0, 3);
  CHECK(w2.first == 1.5);
  CHECK(w2.second == doctest::Approx(3.0));
  CHECK_THROWS_AS(q_window(0.7, 2.0, 1), AlphaInadmissible);
}

TEST_CASE("weighted_lq_norm closed form") {
  // gamma = alpha p/(p-1) = 0.25 for alpha = 0.125, p = 2.
  CHECK(weighted_lq_norm(1.0, 0.125, 2.0, 2.0) == doctest::Approx(2.0));
  CHECK(weighted_lq_norm(3.0, 0.0, 2.0, 1.5) == doctest::Approx(std::pow(6.0, 1.0 / 1.5)));
  // gamma q = 1
  CHECK_THROWS_AS(weighted_lq_norm(1.0, 0.25, 2.0, 2.0), NotIntegrable);
  CHECK_THROWS_AS(weighted_lq_norm(1.0, 0.25, 2.0, 3.0), NotIntegrable);
}

TEST_CASE("weighted_lq_norm agrees with quadrature") {
  for (double L : {0.5, 1.0, 2.5}) {
    for (double alpha : {0.1, 0.2, 0.3}) {
      const double p = 2.0, q = 1.4, gamma = alpha * p / (p - 1.0);
      if (gamma * q >= 1.0) continue;
      CHECK(weighted_lq_norm(L, alpha, p, q) ==
            doctest::Approx(weighted_norm_quadrature(L, gamma, q)).epsilon(1e-6));
    }
  }
}

TEST_CASE("smoothing_time_factor") {
  CHECK(smoothing_time_factor(1.0, 1.5, 1) == doctest::Approx(1.0 + 1.5));
  CHECK(smoothing_time_factor(4.0, 1.0, 1) == doctest::Approx(4.0 + 2.0 * 2.0));
  CHECK_THROWS_AS(smoothing_time_factor(1.0, 0.5, 1), DomainError);
}

TEST_CASE("build_bound_context: threshold with F0 = 1") {
  // kappa/b = 1 and Cq = 0 give R0 = 1 and F0 = f(1) = 1.
  const Params prm{0.0, 1.0, 2.0, 1.0, 1.0, 1.0};
  const Grid1D g(1.0, 64);
  const auto ctx = build_bound_context(prm, Kinetics::identity(), g, 0.25, 0.3, 1.0, 0.0);
  CHECK(ctx.F0 == doctest::Approx(1.0));
  CHECK(ctx.u0_threshold == doctest::Approx(1.0 / (1.0 - std::exp(-1.0))).epsilon(1e-12));
  CHECK(ctx.u0_threshold == doctest::Approx(1.5819767).epsilon(1e-7));
}

TEST_CASE("build_bound_context assembles the constants") {
  const Grid1D g(1.0, 256);
  const double cq = 0.5, eps = 0.2;
  const auto ctx = build_bound_context(kDefault, Kinetics::identity(), g, 0.25, eps, 3.0, cq);
  CHECK(ctx.q == doctest::Approx(1.5));
  CHECK(ctx.weighted_norm == doctest::Approx(4.0));
  CHECK(ctx.R1 == 3.0);
  CHECK(ctx.f_sup_R1 == 3.0);
  CHECK(ctx.C0 == doctest::Approx(0.5 * 3.0 * 4.0 * 2.5));
  CHECK(ctx.R0 == doctest::Approx(3.0 - eps * eps * ctx.C0));
  CHECK(ctx.F0 == doctest::Approx(ctx.R0));
  CHECK(ctx.R0 > 0.0);
  CHECK(ctx.Tmax_bound == 1.0);
  const double lo = std::max(1.0, 0.5), hi = (2.0 - 1.0) / (0.25 * 2.0);
  CHECK(ctx.q > lo);
  CHECK(ctx.q < hi);
}

TEST_CASE("build_bound_context limits and errors") {
  const Grid1D g(1.0, 64);
  const auto k = Kinetics::identity();
  const auto tiny = build_bound_context(kDefault, k, g, 0.25, 1e-9, 2.0, 0.5);
  CHECK(tiny.R0 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(build_bound_context(kDefault, k, g, 0.25, 10.0, 3.0, 0.5), FloorNotPositive);
  CHECK_THROWS_AS(build_bound_context(kDefault, k, g, 0.6, 0.1, 3.0, 0.5), AlphaInadmissible);
  CHECK_THROWS_AS(build_bound_context(kDefault, k, g, 0.25, 0.1, 0.0, 0.5), DomainError);
}

TEST_CASE("C0 is monotone in Cq and eps selection halves the floor") {
  const Grid1D g(1.0, 64);
  const auto k = Kinetics::identity();
  double prev = 0.0;
  for (double cq : {0.1, 0.2, 0.4, 0.8}) {
    const double c0 = c0_constant(kDefault, k, 1.0, 0.25, 3.0, cq);
    CHECK(c0 > prev);
    prev = c0;
    const double eps = largest_admissible_eps(c0, 3.0, kDefault);
    CHECK(std::pow(eps, 2.0) * c0 == doctest::Approx(1.5));
    const auto ctx = build_bound_context(kDefault, k, g, 0.25, eps, 3.0, cq);
    CHECK(ctx.R0 == doctest::Approx(1.5));
  }
}

TEST_CASE("blowup_time_upper_bound") {
  BoundContext ctx;
  ctx.p = 2.0;
  ctx.a = 1.0;
  ctx.F0 = 1.0;
  CHECK(blowup_time_upper_bound(2.0, ctx).value() == doctest::Approx(std::log(2.0)));
  CHECK_FALSE(blowup_time_upper_bound(1.0, ctx).has_value());
  CHECK_FALSE(blowup_time_upper_bound(0.5, ctx).has_value());
  CHECK_THROWS_AS(blowup_time_upper_bound(0.0, ctx), DomainError);

  const Params prm{0.0, 1.0, 2.0, 1.0, 1.0, 1.0};
  const auto c = build_bound_context(prm, Kinetics::identity(), Grid1D(1.0, 8), 0.25, 0.1, 1.0,
                                     0.0);
  CHECK(blowup_time_upper_bound(c.u0_threshold, c).value() == doctest::Approx(1.0));

  double prev = 10.0;
  for (double u0 : {1.2, 1.5, 2.0, 4.0, 10.0}) {
    const double t = blowup_time_upper_bound(u0, ctx).value();
    CHECK(t < prev);
    prev = t;
  }
  BoundContext stronger = ctx;
  stronger.F0 = 2.0;
  CHECK(blowup_time_upper_bound(2.0, stronger).value() < blowup_time_upper_bound(2.0, ctx).value());
}

TEST_CASE("envelope, floor and ceiling margins") {
  const Grid1D g(1.0, 16);
  BoundContext ctx;
  ctx.p = 2.0;
  ctx.alpha = 0.25;
  ctx.eps = 0.3;
  ctx.R0 = 1.0;
  State s{Field(g.size()), Field(g.size(), 2.0), 0.0};
  CHECK(envelope_check(s, g, ctx) == doctest::Approx(0.3));
  const std::size_t i = 3;
  s.u[i] = 2.0 * ctx.eps * std::pow(std::abs(g.x(i)), -0.25);
  CHECK(envelope_check(s, g, ctx) == doctest::Approx(-0.3));
  CHECK(v_floor_check(s, ctx) == doctest::Approx(1.0));

  const Field v0(g.size(), 1.0);
  State c{Field(g.size()), Field(g.size(), 1.0), 0.0};
  c.v[5] = kDefault.kappa / kDefault.b + 1.0;
  CHECK(v_ceiling_check(c, v0, kDefault) == doctest::Approx(-1.0));
}

TEST_CASE("mass functional and bound") {
  const Grid1D g(1.0, 32);
  const State zero{Field(g.size()), Field(g.size()), 0.0};
  const Params none{0.0, 1.0, 2.0, 1.0, 1.0, 0.0};
  CHECK(mass_functional(zero, g) == 0.0);
  CHECK(mass_bound(zero, none, g) == 0.0);
  const State s{Field(g.size()), Field(g.size(), 1.0), 0.0};
  CHECK(mass_functional(s, g) == doctest::Approx(2.0));
  CHECK(mass_bound(s, kDefault, g) == doctest::Approx(6.0));
}

TEST_CASE("holder_modulus examples") {
  const Grid1D g(1.0, 64);
  CHECK(holder_modulus(Field(g.size(), 3.0), g, 0.5) == 0.0);

  Field spike(g.size());
  spike[10] = 1.0;
  CHECK(holder_modulus(spike, g, 0.4) == doctest::Approx(std::pow(g.spacing(), -0.4)));

  for (std::size_t n : {16u, 64u, 256u}) {
    const Grid1D gn(1.0, n);
    Field w(gn.size());
    for (std::size_t i = 0; i < gn.size(); ++i) w[i] = std::pow(std::abs(gn.x(i)), 0.3);
    const double m = holder_modulus(w, gn, 0.3);
    CHECK(m <= 1.0 + 1e-12);
    CHECK(m > 0.99);
  }

  Field w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) w[i] = std::sin(3.0 * g.x(i));
  Field scaled = w;
  for (double& x : scaled.values) x *= -2.5;
  CHECK(holder_modulus(scaled, g, 0.5) == doctest::Approx(2.5 * holder_modulus(w, g, 0.5)));
  CHECK_THROWS_AS(holder_modulus(w, g, 0.0), DomainError);
}

TEST_CASE("monitors and trace queries") {
  const Grid1D g(1.0, 8);
  const State s0{Field(g.size()), Field(g.size(), 1.0), 0.0};
  const auto mass = mass_monitor(s0, kDefault, g);
  CHECK(mass.name == "mass");
  CHECK(mass.margin(s0) == doctest::Approx(4.0));
  CHECK(mass.tolerance == doctest::Approx(6e-6));
  const auto ceil = v_ceiling_monitor(s0.v, kDefault);
  CHECK(ceil.margin(s0) == doctest::Approx(2.0));

  DiagnosticTrace tr;
  tr.monitor_names = {"a", "b"};
  tr.rows.push_back({0.0, 0.0, 0, 0, 0, 0, {1.0, -2.0}, 2u});
  tr.rows.push_back({0.1, 0.1, 0, 0, 0, 0, {0.5, 3.0}, 0u});
  CHECK(tr.min_margin("a").value() == 0.5);
  CHECK(tr.min_margin("b").value() == -2.0);
  CHECK(tr.violation_count("b") == 1);
  CHECK(tr.violation_count("a") == 0);
  CHECK_FALSE(tr.min_margin("c").has_value());
}
