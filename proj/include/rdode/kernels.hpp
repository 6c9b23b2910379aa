#pragma once

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP version that performs the same floating-point operations in the
// same order per output element, so both produce bit-identical results.

#include <cstddef>
#include <span>

#include "rdode/core.hpp"

namespace rdode::kernels {

enum class Exec { Serial, Parallel };

/// y = A x for a dense row-major n-by-n matrix.
void matvec(std::span<const double> A, std::span<const double> x, std::span<double> y, Exec exec);

struct ReactionOutcome {
  bool blew_up = false;
  double t_star = 0.0;       // earliest singularity inside the step
  std::size_t node = 0;      // node where it occurs (lowest index on ties)
};

/// Applies the exact frozen-v u-flow over tau at every node. On blow-up the
/// contents of u are unspecified.
ReactionOutcome reaction_substep(std::span<double> u, std::span<const double> v,
                                 const Kinetics& kinetics, double p, double a, double tau,
                                 Exec exec);

/// max over node pairs of |w_i - w_j| / |x_i - x_j|^alpha.
double holder_modulus(std::span<const double> w, std::span<const double> x, double alpha,
                      Exec exec);

}  // namespace rdode::kernels
