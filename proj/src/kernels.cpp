#include "rdode/kernels.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "rdode/kinetics_ode.hpp"

namespace rdode::kernels {

namespace {

inline double row_dot(const double* row, const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
  return acc;
}

inline double pair_sweep(std::span<const double> w, std::span<const double> x, double alpha,
                         std::size_t i) {
  double best = 0.0;
  for (std::size_t j = i + 1; j < w.size(); ++j) {
    const double q = std::abs(w[i] - w[j]) / std::pow(std::abs(x[i] - x[j]), alpha);
    if (q > best) best = q;
  }
  return best;
}

}  // namespace

void matvec(std::span<const double> A, std::span<const double> x, std::span<double> y,
            Exec exec) {
  const std::size_t n = x.size();
  if (A.size() != n * n || y.size() != n) throw SizeMismatch("matvec: dimension mismatch");
  const double* a = A.data();
  const double* xv = x.data();
  double* yv = y.data();
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) yv[i] = row_dot(a + i * n, xv, n);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) yv[i] = row_dot(a + i * n, xv, n);
}

ReactionOutcome reaction_substep(std::span<double> u, std::span<const double> v,
                                 const Kinetics& kinetics, double p, double a, double tau,
                                 Exec exec) {
  const std::size_t n = u.size();
  if (v.size() != n) throw SizeMismatch("reaction_substep: u and v differ in size");
  constexpr double kNone = std::numeric_limits<double>::infinity();
  std::vector<double> t_star(n, kNone);

  auto node = [&](std::size_t i) {
    const UStepResult r = exact_u_step(u[i], kinetics.value(v[i]), p, a, tau);
    if (const double* next = std::get_if<double>(&r)) {
      u[i] = *next;
    } else {
      t_star[i] = std::get<BlowupInStep>(r).t_star;
    }
  };

  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) node(i);
  } else {
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) node(i);
  }

  ReactionOutcome out;
  for (std::size_t i = 0; i < n; ++i) {
    if (t_star[i] != kNone && (!out.blew_up || t_star[i] < out.t_star)) {
      out.blew_up = true;
      out.t_star = t_star[i];
      out.node = i;
    }
  }
  return out;
}

double holder_modulus(std::span<const double> w, std::span<const double> x, double alpha,
                      Exec exec) {
  if (w.size() != x.size()) throw SizeMismatch("holder_modulus: field and grid differ in size");
  const std::size_t n = w.size();
  double best = 0.0;
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) {
      const double q = pair_sweep(w, x, alpha, i);
      if (q > best) best = q;
    }
    return best;
  }
#pragma omp parallel for schedule(dynamic, 16) reduction(max : best)
  for (std::size_t i = 0; i < n; ++i) {
    const double q = pair_sweep(w, x, alpha, i);
    if (q > best) best = q;
  }
  return best;
}

}  // namespace rdode::kernels
