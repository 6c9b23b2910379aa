#pragma once

// Discrete Neumann Laplacian on a Grid1D and the linear semigroup
// e^{tau (D Lap - b I)}.
//
// The second difference with mirrored ghost nodes is diagonal in the
// DCT-I basis phi_k(j) = cos(pi k j / N), k = 0..N, with eigenvalues
// -mu_k, mu_k = (4 / h^2) sin^2(pi k / (2N)). The basis is orthogonal in the
// trapezoid inner product; mode 0 carries the mean, so the mass integral is
// untouched when b = 0.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "rdode/core.hpp"
#include "rdode/kernels.hpp"

namespace rdode {

enum class TransformBackend {
  Direct,  // dense cosine matrix, O(N^2) per transform
  Fast,    // FFTW REDFT00, O(N log N); falls back to Direct when unavailable
};

TransformBackend default_backend() noexcept;
bool fast_backend_available() noexcept;

/// Coefficients a_k of w = sum_k a_k cos(pi k j / N).
struct ModeVector {
  std::vector<double> coeffs;
  std::size_t size() const noexcept { return coeffs.size(); }
};

class NeumannOperator {
 public:
  NeumannOperator(const Grid1D& grid, double D, double b,
                  TransformBackend backend = default_backend(),
                  kernels::Exec exec = kernels::Exec::Parallel);

  const Grid1D& grid() const noexcept { return grid_; }
  double diffusion() const noexcept { return D_; }
  double decay() const noexcept { return b_; }
  TransformBackend backend() const noexcept { return backend_; }
  std::size_t size() const noexcept { return grid_.size(); }

  /// Nonnegative eigenvalues of -Lap, increasing, mu_0 = 0.
  std::span<const double> eigenvalues() const noexcept { return mu_; }
  /// Decay rate of mode k under the semigroup: D mu_k + b.
  double rate(std::size_t k) const noexcept { return D_ * mu_[k] + b_; }

  ModeVector to_modes(const Field& w) const;
  Field from_modes(const ModeVector& m) const;

  /// e^{tau (D Lap - b I)} w.
  Field apply_semigroup(const Field& w, double tau) const;

  /// e^{tau A} w + int_0^tau e^{s A} g ds with A = D Lap - b I and g held
  /// fixed over the step (exponential Euler).
  Field apply_with_source(const Field& w, const Field& g, double tau) const;

  /// Same with a source varying linearly from g0 at s = 0 to g1 at s = tau:
  /// e^{tau A} w + tau phi1(tau A) g0 + tau phi2(tau A) (g1 - g0).
  Field apply_with_linear_source(const Field& w, const Field& g0, const Field& g1,
                                 double tau) const;

 private:
  void check(std::size_t n) const;
  void forward(std::span<const double> in, std::span<double> out) const;
  void inverse(std::span<const double> in, std::span<double> out) const;

  Grid1D grid_;
  double D_;
  double b_;
  TransformBackend backend_;
  kernels::Exec exec_;
  std::vector<double> mu_;
  std::vector<double> inv_norm_;   // 1 / sum_j c_j phi_k(j)^2
  std::vector<double> cosines_;    // dense basis for the Direct backend
  std::shared_ptr<void> plan_;     // fftw_plan for the Fast backend
};

/// Discrete L^q norm with trapezoid weights.
double lq_norm(const Field& w, const Grid1D& grid, double q);

/// ||e^{tau(D Lap - b I)} w0||_inf / ((1 + tau^{-1/(2q)}) ||w0||_q) in one
/// space dimension.
double smoothing_ratio(const NeumannOperator& op, const Field& w0, double q, double tau);

struct SmoothingSampler {
  std::size_t samples = 48;
  std::vector<double> taus;  // empty: 13 log-spaced values in [1e-6, 1]
  std::uint64_t seed = 20140401;
};

/// Empirical supremum of smoothing_ratio over random fields and the given
/// times. Sample s depends only on (seed, s), so adding samples never lowers
/// the estimate. This is a lower estimate of the true constant.
double estimate_smoothing_constant(const NeumannOperator& op, double q,
                                   const SmoothingSampler& sampler);

std::vector<double> default_smoothing_taus();

}  // namespace rdode
