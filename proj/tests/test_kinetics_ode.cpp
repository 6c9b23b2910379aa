#include <cmath>
#include <random>

#include "doctest.h"
#include "rdode/kinetics_ode.hpp"

using namespace rdode;

namespace {

// Fine-step RK4 of u' = -a u + u^p F, the oracle for the closed form.
double rk4_frozen(double u, double F, double p, double a, double tau, int steps) {
  auto f = [&](double x) { return -a * x + std::pow(x, p) * F; };
  const double h = tau / steps;
  for (int i = 0; i < steps; ++i) {
    const double k1 = f(u), k2 = f(u + h / 2 * k1), k3 = f(u + h / 2 * k2), k4 = f(u + h * k3);
    u += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return u;
}

}  // namespace

TEST_CASE("exact_u_step matches fine RK4") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double p = 1.2 + 2.0 * U(rng);
    const double a = 0.1 + 2.0 * U(rng);
    const double F = 0.1 + 3.0 * U(rng);
    const double u = 0.05 + 1.0 * U(rng);
    const double tau = 0.3 * U(rng) + 1e-3;
    auto r = exact_u_step(u, F, p, a, tau);
    if (!std::holds_alternative<double>(r)) continue;
    const double ref = rk4_frozen(u, F, p, a, tau, 4000);
    CHECK(std::get<double>(r) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("exact_u_step special cases") {
  CHECK(std::get<double>(exact_u_step(0.0, 2.0, 2.0, 1.0, 0.5)) == 0.0);
  CHECK(std::get<double>(exact_u_step(2.0, 0.0, 2.0, 1.0, 0.5)) ==
        doctest::Approx(2.0 * std::exp(-0.5)));
  // p = 2, a = 1, F = 1, u = 2: singularity at ln 2.
  const auto r = exact_u_step(2.0, 1.0, 2.0, 1.0, 1.0);
  REQUIRE(std::holds_alternative<BlowupInStep>(r));
  CHECK(std::get<BlowupInStep>(r).t_star == doctest::Approx(std::log(2.0)));
  CHECK(frozen_blowup_time(2.0, 1.0, 2.0, 1.0).value() == doctest::Approx(std::log(2.0)));
  CHECK_FALSE(frozen_blowup_time(1.0, 1.0, 2.0, 1.0).has_value());
  CHECK_FALSE(frozen_blowup_time(0.0, 1.0, 2.0, 1.0).has_value());
  CHECK_THROWS_AS(exact_u_step(-1.0, 1.0, 2.0, 1.0, 0.1), DomainError);
  CHECK_THROWS_AS(exact_u_step(1.0, 1.0, 2.0, 1.0, 0.0), DomainError);
}

TEST_CASE("exact_u_step composes as a flow") {
  const double u = 0.8, F = 1.7, p = 2.5, a = 0.9;
  const double two = std::get<double>(exact_u_step(u, F, p, a, 0.2));
  const double one = std::get<double>(
      exact_u_step(std::get<double>(exact_u_step(u, F, p, a, 0.1)), F, p, a, 0.1));
  CHECK(two == doctest::Approx(one).epsilon(1e-13));
}

TEST_CASE("kinetic_integrate recovers the scalar v relaxation when u = 0") {
  const Params prm{0.0, 1.0, 2.0, 1.0, 2.0, 3.0};
  const auto traj = kinetic_integrate({0.0, 0.5, 0.0}, prm, Kinetics::identity(), 2.0, 1e-3);
  CHECK(traj.back().t == 2.0);
  const double exact = std::exp(-4.0) * 0.5 + 1.5 * (1.0 - std::exp(-4.0));
  CHECK(traj.back().v_bar == doctest::Approx(exact).epsilon(1e-12));
  for (const auto& s : traj) CHECK(s.u_bar == 0.0);
}

TEST_CASE("kinetic_integrate is fourth order") {
  const Params prm{0.0, 1.0, 2.0, 1.0, 1.0, 3.0};
  const auto k = Kinetics::identity();
  auto end = [&](double dt) {
    return kinetic_integrate({0.3, 1.0, 0.0}, prm, k, 1.0, dt).back();
  };
  const auto ref = end(1e-4);
  const double e1 = std::abs(end(0.02).u_bar - ref.u_bar);
  const double e2 = std::abs(end(0.01).u_bar - ref.u_bar);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("kinetic_integrate errors") {
  const Params prm{0.0, 1.0, 2.0, 1.0, 1.0, 0.0};
  CHECK_THROWS_AS(kinetic_integrate({1.0, 1.0, 0.0}, prm, Kinetics::identity(), 1.0, 0.0),
                  DomainError);
  CHECK_THROWS_AS(kinetic_integrate({-1.0, 1.0, 0.0}, prm, Kinetics::identity(), 1.0, 0.1),
                  DomainError);
  // Huge reaction with a coarse step drives v negative.
  CHECK_THROWS_AS(kinetic_integrate({50.0, 50.0, 0.0}, prm, Kinetics::identity(), 1.0, 0.5),
                  StepTooLarge);
}

TEST_CASE("steady states for a = b = 1, kappa = 3") {
  const Params prm{0.0, 1.0, 2.0, 1.0, 1.0, 3.0};
  const auto ss = steady_states(prm, Kinetics::identity());
  REQUIRE(ss.size() == 3);
  CHECK(ss[0].kind == SteadyKind::Trivial);
  CHECK(ss[0].v_bar == 3.0);
  CHECK(ss[1].v_bar == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-14));
  CHECK(ss[2].v_bar == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-14));
  for (const auto& s : ss) {
    const auto r = stationary_residual(s, prm, Kinetics::identity());
    CHECK(std::abs(r[0]) < 1e-12);
    CHECK(std::abs(r[1]) < 1e-12);
  }
  CHECK(std::string(to_string(SteadyKind::NontrivialPlus)) == "nontrivial_plus");
}

TEST_CASE("steady states: degenerate and absent branches") {
  const Params tangent{0.0, 1.0, 2.0, 1.0, 1.0, 2.0};
  const auto one = steady_states(tangent, Kinetics::identity());
  REQUIRE(one.size() == 2);
  CHECK(one[1].v_bar == doctest::Approx(1.0));
  const Params none{0.0, 1.0, 2.0, 1.0, 1.0, 1.0};
  CHECK(steady_states(none, Kinetics::identity()).size() == 1);
  CHECK_THROWS_AS(steady_states(tangent, Kinetics::saturating()), UnsupportedKinetics);
  CHECK_THROWS_AS(steady_states(Params{0, 1, 3, 1, 1, 3}, Kinetics::identity()),
                  UnsupportedKinetics);
}

TEST_CASE("Jacobian matches finite differences of the kinetic rhs") {
  const Params prm{0.0, 1.0, 2.5, 0.7, 1.3, 2.0};
  const auto k = Kinetics::saturating();
  const double u = 0.9, v = 1.7, h = 1e-6;
  const auto J = kinetic_jacobian(u, v, prm, k);
  const auto fu1 = kinetic_rhs(u + h, v, prm, k), fu0 = kinetic_rhs(u - h, v, prm, k);
  const auto fv1 = kinetic_rhs(u, v + h, prm, k), fv0 = kinetic_rhs(u, v - h, prm, k);
  CHECK(J[0] == doctest::Approx((fu1[0] - fu0[0]) / (2 * h)).epsilon(1e-7));
  CHECK(J[1] == doctest::Approx((fv1[0] - fv0[0]) / (2 * h)).epsilon(1e-7));
  CHECK(J[2] == doctest::Approx((fu1[1] - fu0[1]) / (2 * h)).epsilon(1e-7));
  CHECK(J[3] == doctest::Approx((fv1[1] - fv0[1]) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("dispersion relation: autocatalysis dominates at high wavenumber when d = 0") {
  const Params prm{0.0, 1.0, 2.0, 1.0, 1.0, 3.0};
  const auto k = Kinetics::identity();
  const auto ss = steady_states(prm, k);
  const std::vector<double> ks{0.0, 1.0, 10.0, 100.0, 1000.0};
  for (std::size_t i = 1; i < ss.size(); ++i) {
    const auto d = dispersion_relation(ss[i], prm, k, ks);
    // J11 = -a + 2 u v = a at a nontrivial state.
    CHECK(std::abs(d.back().growth - 1.0) < 1e-4);
  }
  for (const auto& pt : dispersion_relation(ss[0], prm, k, ks)) CHECK(pt.growth < 0.0);
}

TEST_CASE("dispersion eigenvalues satisfy the characteristic polynomial") {
  const Params prm{0.3, 2.0, 2.0, 1.0, 1.0, 3.0};
  const auto k = Kinetics::identity();
  const auto ss = steady_states(prm, k)[2];
  const auto J = kinetic_jacobian(ss.u_bar, ss.v_bar, prm, k);
  const std::vector<double> ks{0.0, 0.5, 2.0, 7.0};
  for (const auto& pt : dispersion_relation(ss, prm, k, ks)) {
    const double m11 = J[0] - prm.d * pt.k * pt.k, m22 = J[3] - prm.D * pt.k * pt.k;
    for (auto lam : {pt.lambda_plus, pt.lambda_minus}) {
      const auto c = (m11 - lam) * (m22 - lam) - J[1] * J[2];
      CHECK(std::abs(c) < 1e-10);
    }
    CHECK(pt.growth == std::max(pt.lambda_plus.real(), pt.lambda_minus.real()));
  }
}
