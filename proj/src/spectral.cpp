#include "rdode/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>

#ifdef RDODE_HAVE_FFTW
#include <fftw3.h>
#endif

namespace rdode {

namespace {

#ifdef RDODE_HAVE_FFTW
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
#endif

// tau * phi_1(-rate * tau) = (1 - e^{-rate tau}) / rate
inline double source_weight(double rate, double tau) {
  const double z = rate * tau;
  if (std::abs(z) < 1e-300) return tau;
  return -std::expm1(-z) / rate;
}

// tau * phi_2(-rate * tau) = (e^{-z} - 1 + z) / (rate z), z = rate tau
inline double ramp_weight(double rate, double tau) {
  const double z = rate * tau;
  if (std::abs(z) < 1e-2) {
    return tau * (0.5 + z * (-1.0 / 6.0 + z * (1.0 / 24.0 + z * (-1.0 / 120.0 + z / 720.0))));
  }
  return tau * (std::expm1(-z) + z) / (z * z);
}

}  // namespace

bool fast_backend_available() noexcept {
#ifdef RDODE_HAVE_FFTW
  return true;
#else
  return false;
#endif
}

TransformBackend default_backend() noexcept {
  return fast_backend_available() ? TransformBackend::Fast : TransformBackend::Direct;
}

NeumannOperator::NeumannOperator(const Grid1D& grid, double D, double b, TransformBackend backend,
                                 kernels::Exec exec)
    : grid_(grid), D_(D), b_(b), backend_(backend), exec_(exec) {
  if (!(D >= 0.0) || !std::isfinite(D)) throw DomainError("NeumannOperator: D must be >= 0");
  if (!std::isfinite(b)) throw DomainError("NeumannOperator: b must be finite");
  if (backend_ == TransformBackend::Fast && !fast_backend_available()) {
    backend_ = TransformBackend::Direct;
  }

  const std::size_t N = grid.ncells();
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  mu_.resize(n);
  inv_norm_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = std::sin(std::numbers::pi * static_cast<double>(k) / (2.0 * N));
    mu_[k] = 4.0 / (h * h) * s * s;
    inv_norm_[k] = (k == 0 || k == N) ? 1.0 / N : 2.0 / N;
  }

  if (backend_ == TransformBackend::Direct) {
    cosines_.resize(n * n);
    const std::size_t period = 2 * N;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto m = static_cast<double>((k * j) % period);
        cosines_[k * n + j] = std::cos(std::numbers::pi * m / static_cast<double>(N));
      }
    }
  }
#ifdef RDODE_HAVE_FFTW
  if (backend_ == TransformBackend::Fast) {
    std::vector<double> in(n), out(n);
    std::lock_guard lock(planner_mutex());
    fftw_plan plan = fftw_plan_r2r_1d(static_cast<int>(n), in.data(), out.data(), FFTW_REDFT00,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT);
    if (plan == nullptr) throw Error("FFTW failed to create a REDFT00 plan");
    plan_ = std::shared_ptr<void>(plan, [](void* pl) {
      std::lock_guard inner(planner_mutex());
      fftw_destroy_plan(static_cast<fftw_plan>(pl));
    });
  }
#endif
}

void NeumannOperator::check(std::size_t n) const {
  if (n != grid_.size()) {
    throw SizeMismatch("field has " + std::to_string(n) + " entries, grid has " +
                       std::to_string(grid_.size()));
  }
}

// out_k = sum_j c_j phi_k(j) in_j with c the trapezoid factors (1/2 at ends).
void NeumannOperator::forward(std::span<const double> in, std::span<double> out) const {
#ifdef RDODE_HAVE_FFTW
  if (backend_ == TransformBackend::Fast) {
    fftw_execute_r2r(static_cast<fftw_plan>(plan_.get()), const_cast<double*>(in.data()),
                     out.data());
    for (double& y : out) y *= 0.5;
    return;
  }
#endif
  std::vector<double> scaled(in.begin(), in.end());
  scaled.front() *= 0.5;
  scaled.back() *= 0.5;
  kernels::matvec(cosines_, scaled, out, exec_);
}

// out_j = sum_k in_k phi_k(j)
void NeumannOperator::inverse(std::span<const double> in, std::span<double> out) const {
#ifdef RDODE_HAVE_FFTW
  if (backend_ == TransformBackend::Fast) {
    std::vector<double> half(in.begin(), in.end());
    for (std::size_t k = 1; k + 1 < half.size(); ++k) half[k] *= 0.5;
    fftw_execute_r2r(static_cast<fftw_plan>(plan_.get()), half.data(), out.data());
    return;
  }
#endif
  kernels::matvec(cosines_, in, out, exec_);
}

ModeVector NeumannOperator::to_modes(const Field& w) const {
  check(w.size());
  ModeVector m{std::vector<double>(w.size())};
  forward(w.span(), m.coeffs);
  for (std::size_t k = 0; k < m.size(); ++k) m.coeffs[k] *= inv_norm_[k];
  return m;
}

Field NeumannOperator::from_modes(const ModeVector& m) const {
  check(m.size());
  Field w(m.size());
  inverse(m.coeffs, w.span());
  return w;
}

Field NeumannOperator::apply_semigroup(const Field& w, double tau) const {
  if (!(tau >= 0.0)) throw NegativeTime("apply_semigroup requires tau >= 0");
  ModeVector m = to_modes(w);
  for (std::size_t k = 0; k < m.size(); ++k) m.coeffs[k] *= std::exp(-rate(k) * tau);
  return from_modes(m);
}

Field NeumannOperator::apply_with_source(const Field& w, const Field& g, double tau) const {
  if (!(tau >= 0.0)) throw NegativeTime("apply_with_source requires tau >= 0");
  ModeVector mw = to_modes(w);
  const ModeVector mg = to_modes(g);
  for (std::size_t k = 0; k < mw.size(); ++k) {
    const double r = rate(k);
    mw.coeffs[k] = std::exp(-r * tau) * mw.coeffs[k] + source_weight(r, tau) * mg.coeffs[k];
  }
  return from_modes(mw);
}

Field NeumannOperator::apply_with_linear_source(const Field& w, const Field& g0, const Field& g1,
                                                double tau) const {
  if (!(tau >= 0.0)) throw NegativeTime("apply_with_linear_source requires tau >= 0");
  ModeVector mw = to_modes(w);
  const ModeVector m0 = to_modes(g0);
  const ModeVector m1 = to_modes(g1);
  for (std::size_t k = 0; k < mw.size(); ++k) {
    const double r = rate(k);
    mw.coeffs[k] = std::exp(-r * tau) * mw.coeffs[k] + source_weight(r, tau) * m0.coeffs[k] +
                   ramp_weight(r, tau) * (m1.coeffs[k] - m0.coeffs[k]);
  }
  return from_modes(mw);
}

double lq_norm(const Field& w, const Grid1D& grid, double q) {
  if (w.size() != grid.size()) throw SizeMismatch("lq_norm: field and grid differ in size");
  if (!(q >= 1.0)) throw DomainError("lq_norm requires q >= 1");
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += grid.weight(i) * std::pow(std::abs(w[i]), q);
  }
  return std::pow(acc, 1.0 / q);
}

double smoothing_ratio(const NeumannOperator& op, const Field& w0, double q, double tau) {
  if (!(q >= 1.0)) throw DomainError("smoothing ratio requires q >= 1");
  if (!(tau > 0.0)) throw DomainError("smoothing ratio requires tau > 0");
  const double denom = (1.0 + std::pow(tau, -1.0 / (2.0 * q))) * lq_norm(w0, op.grid(), q);
  if (!(denom > 0.0)) throw DomainError("smoothing ratio requires a nonzero field");
  const Field w = op.apply_semigroup(w0, tau);
  double sup = 0.0;
  for (double x : w.values) sup = std::max(sup, std::abs(x));
  return sup / denom;
}

std::vector<double> default_smoothing_taus() {
  std::vector<double> taus;
  for (int i = 0; i <= 12; ++i) taus.push_back(std::pow(10.0, -6.0 + 0.5 * i));
  return taus;
}

double estimate_smoothing_constant(const NeumannOperator& op, double q,
                                   const SmoothingSampler& sampler) {
  if (!(q >= 1.0)) throw DomainError("estimate_smoothing_constant requires q >= 1");
  const std::vector<double> taus = sampler.taus.empty() ? default_smoothing_taus() : sampler.taus;
  for (double tau : taus) {
    if (!(tau > 0.0)) throw DomainError("estimate_smoothing_constant requires every tau > 0");
  }

  const Grid1D& grid = op.grid();
  const std::size_t n = grid.size();
  const double L = grid.half_length();
  const double h = grid.spacing();

  double best = 0.0;
  for (std::size_t s = 0; s < sampler.samples; ++s) {
    std::seed_seq seq{static_cast<std::uint32_t>(sampler.seed),
                      static_cast<std::uint32_t>(sampler.seed >> 32),
                      static_cast<std::uint32_t>(s)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Cycle through three shapes: rough noise, single-node spikes and
    // Gaussian bumps of random width (which probe the boundary reflection).
    Field w(n);
    switch (s % 3) {
      case 0:
        for (double& x : w.values) x = unit(rng);
        break;
      case 1:
        w[std::min(n - 1, static_cast<std::size_t>(unit(rng) * static_cast<double>(n)))] = 1.0;
        break;
      default: {
        const double center = -L + 2.0 * L * unit(rng);
        const double width = std::exp(std::log(h) + (std::log(L) - std::log(h)) * unit(rng));
        for (std::size_t i = 0; i < n; ++i) {
          const double z = (grid.x(i) - center) / width;
          w[i] = std::exp(-z * z);
        }
        break;
      }
    }
    if (lq_norm(w, grid, q) == 0.0) continue;

    const ModeVector m0 = op.to_modes(w);
    const double wq = lq_norm(w, grid, q);
    for (double tau : taus) {
      ModeVector m = m0;
      for (std::size_t k = 0; k < n; ++k) m.coeffs[k] *= std::exp(-op.rate(k) * tau);
      const Field evolved = op.from_modes(m);
      double sup = 0.0;
      for (double x : evolved.values) sup = std::max(sup, std::abs(x));
      best = std::max(best, sup / ((1.0 + std::pow(tau, -1.0 / (2.0 * q))) * wq));
    }
  }
  return best;
}

}  // namespace rdode
