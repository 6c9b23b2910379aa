// Wall-clock comparison of the serial and OpenMP kernels and of the two
// cosine-transform backends. Usage: rdode_bench [N ...]  (default 512 1024 2048)

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#include "rdode/kernels.hpp"
#include "rdode/spectral.hpp"

using namespace rdode;
using kernels::Exec;

namespace {

template <class F>
double best_seconds(F&& f, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void row(const char* name, std::size_t n, double serial, double parallel, bool same) {
  std::printf("%-18s %6zu %12.3e %12.3e %8.2f %s\n", name, n, serial, parallel,
              serial / parallel, same ? "identical" : "DIFFERENT");
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> sizes;
  for (int i = 1; i < argc; ++i) sizes.push_back(std::strtoul(argv[i], nullptr, 10));
  if (sizes.empty()) sizes = {512, 1024, 2048};

  std::printf("threads: %d, fast backend: %s\n", omp_get_max_threads(),
              fast_backend_available() ? "fftw" : "unavailable");
  std::printf("%-18s %6s %12s %12s %8s\n", "kernel", "N", "serial[s]", "omp[s]", "speedup");

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> U(0.0, 1.0);

  for (std::size_t ncells : sizes) {
    const Grid1D grid(1.0, ncells);
    const std::size_t n = grid.size();
    std::vector<double> x(n), w(n), v(n), A(n * n), y1(n), y2(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = grid.x(i);
      w[i] = U(rng);
      v[i] = 1.0 + U(rng);
    }
    for (auto& e : A) e = U(rng) - 0.5;

    const double ms = best_seconds([&] { kernels::matvec(A, w, y1, Exec::Serial); }, 5);
    const double mp = best_seconds([&] { kernels::matvec(A, w, y2, Exec::Parallel); }, 5);
    row("matvec", n, ms, mp, y1 == y2);

    double h1 = 0.0, h2 = 0.0;
    const double hs = best_seconds([&] { h1 = kernels::holder_modulus(w, x, 0.25, Exec::Serial); }, 3);
    const double hp = best_seconds([&] { h2 = kernels::holder_modulus(w, x, 0.25, Exec::Parallel); }, 3);
    row("holder_modulus", n, hs, hp, h1 == h2);

    const auto k = Kinetics::identity();
    std::vector<double> u1, u2;
    const double rs = best_seconds([&] {
      u1 = w;
      kernels::reaction_substep(u1, v, k, 2.0, 1.0, 1e-3, Exec::Serial);
    }, 20);
    const double rp = best_seconds([&] {
      u2 = w;
      kernels::reaction_substep(u2, v, k, 2.0, 1.0, 1e-3, Exec::Parallel);
    }, 20);
    row("reaction_substep", n, rs, rp, u1 == u2);

    const NeumannOperator direct(grid, 1.0, 1.0, TransformBackend::Direct);
    const NeumannOperator fast(grid, 1.0, 1.0, TransformBackend::Fast);
    const Field f(w);
    Field a, b;
    const double ds = best_seconds([&] { a = direct.apply_semigroup(f, 1e-3); }, 5);
    const double fs = best_seconds([&] { b = fast.apply_semigroup(f, 1e-3); }, 20);
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
    std::printf("%-18s %6zu %12.3e %12.3e %8.2f max|diff| %.2e (direct vs fast)\n",
                "semigroup", n, ds, fs, ds / fs, diff);
  }
  return 0;
}
