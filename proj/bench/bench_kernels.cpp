// Times the OpenMP grid kernels against their serial references and the sum-factorized Galerkin kernels against the
// per-mode loops. Usage: bench_kernels [cells] [modes] [repeats]
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>

#include "anematic/domain.hpp"
#include "anematic/galerkin.hpp"

using namespace anematic;

namespace {

template <class F>
double seconds_per_call(int repeats, F&& f) {
  f();  // warm-up
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < repeats; ++r) f();
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  return dt.count() / repeats;
}

double max_gap(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) m = std::max(m, std::abs(a[p] - b[p]));
  return m;
}

double max_gap(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p)
    for (int c = 0; c < 3; ++c) m = std::max(m, std::abs(a[p][c] - b[p][c]));
  return m;
}

double max_gap(const QField& a, const QField& b) {
  double m = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) m = std::max(m, frobenius(a[p] - b[p]));
  return m;
}

double max_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void report(const char* name, double fast, double slow, double gap) {
  std::printf("%-22s %12.3e %14.3e %8.2fx  max|diff| %.2e\n", name, fast, slow, slow / fast, gap);
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 32;
  const int m = argc > 2 ? std::atoi(argv[2]) : 2;
  const int repeats = argc > 3 ? std::atoi(argv[3]) : 20;
  if (n < 4 * m || repeats < 1) {
    std::fprintf(stderr, "usage: bench_kernels [cells >= 4 modes] [modes] [repeats >= 1]\n");
    return 2;
  }

  const Grid grid({1.0, 1.0, 1.0}, {n, n, n});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  ScalarField f(grid);
  QField q(grid);
  MatField a(grid);
  VectorField force(grid);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    f[p] = 1.0 + 0.5 * unit(rng);
    q[p] = {unit(rng), unit(rng), unit(rng), unit(rng), unit(rng)};
    for (int i = 0; i < 3; ++i) {
      force[p][i] = unit(rng);
      for (int j = 0; j < 3; ++j) a[p](i, j) = unit(rng);
    }
  }
  const ScalarBC sbc = ScalarBC::dirichlet(std::vector<double>(grid.boundary_size(), 1.0));
  const QBC qbc = QBC::dirichlet(std::vector<QTensor>(grid.boundary_size(), uniaxial(0.3, {1, 0, 0})));

  const VelocityBasis basis(grid, m);
  std::vector<double> v(basis.size());
  for (double& x : v) x = unit(rng);
  const VectorExpr u_b = VectorExpr::channel(0.2, grid.extent());

  std::printf("N = %d, m = %d, threads = %d, %d repeats\n", n, m, omp_get_max_threads(), repeats);
  std::printf("%-22s %12s %14s %9s\n", "kernel", "fast [s]", "reference [s]", "speedup");

  report("laplacian scalar", seconds_per_call(repeats, [&] { laplacian(f, sbc); }),
         seconds_per_call(repeats, [&] { serial::laplacian(f, sbc); }),
         max_gap(laplacian(f, sbc), serial::laplacian(f, sbc)));
  report("laplacian Q", seconds_per_call(repeats, [&] { laplacian(q, qbc); }),
         seconds_per_call(repeats, [&] { serial::laplacian(q, qbc); }),
         max_gap(laplacian(q, qbc), serial::laplacian(q, qbc)));
  report("gradient", seconds_per_call(repeats, [&] { gradient(f, sbc); }),
         seconds_per_call(repeats, [&] { serial::gradient(f, sbc); }),
         max_gap(gradient(f, sbc), serial::gradient(f, sbc)));
  report("volume_integral", seconds_per_call(repeats, [&] { volume_integral(f); }),
         seconds_per_call(repeats, [&] { serial::volume_integral(f); }),
         std::abs(volume_integral(f) - serial::volume_integral(f)));

  report("mass matrix", seconds_per_call(repeats, [&] { scalar_mass_matrix(basis, f); }),
         seconds_per_call(repeats, [&] { serial::scalar_mass_matrix(basis, f); }),
         (scalar_mass_matrix(basis, f) - serial::scalar_mass_matrix(basis, f)).cwiseAbs().maxCoeff());
  report("pair_with_modes", seconds_per_call(repeats, [&] { pair_with_modes(basis, a, force); }),
         seconds_per_call(repeats, [&] { serial::pair_with_modes(basis, a, force); }),
         max_gap(pair_with_modes(basis, a, force), serial::pair_with_modes(basis, a, force)));
  report("synthesize", seconds_per_call(repeats, [&] { synthesize(basis, v, u_b); }),
         seconds_per_call(repeats, [&] { serial::synthesize(basis, v, u_b); }),
         max_gap(synthesize(basis, v, u_b), serial::synthesize(basis, v, u_b)));
  return 0;
}
