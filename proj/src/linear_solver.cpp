#include "anematic/linear_solver.hpp"

#include <cmath>
#include <sstream>

namespace anematic {

namespace {

double inner(const std::vector<double>& a, const std::vector<double>& b) {
  const int n = static_cast<int>(a.size());
  constexpr int kChunk = 4096;
  const int chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < chunks; ++c) {
    double s = 0.0;
    const int end = std::min(n, (c + 1) * kChunk);
    for (int p = c * kChunk; p < end; ++p) s += a[p] * b[p];
    partial[c] = s;
  }
  double s = 0.0;
  for (double v : partial) s += v;
  return s;
}

}  // namespace

DiffusionProblem DiffusionProblem::neumann(const Grid& grid, double dt_kappa) {
  DiffusionProblem p;
  p.grid = grid;
  for (int a = 0; a < 3; ++a) p.alpha[a] = dt_kappa / (grid.h(a) * grid.h(a));
  p.beta.assign(grid.boundary_size(), 0.0);
  p.target.assign(grid.boundary_size(), 0.0);
  return p;
}

DiffusionProblem DiffusionProblem::dirichlet(const Grid& grid, double dt_kappa, std::vector<double> values) {
  DiffusionProblem p = neumann(grid, dt_kappa);
  if (values.size() != grid.boundary_size()) throw ShapeError("dirichlet: one value per boundary face expected");
  for (int side = 0; side < 6; ++side) {
    const int axis = side / 2;
    const std::size_t begin = [&] {
      std::size_t b = 0;
      for (int s = 0; s < side; ++s) b += grid.side_size(s);
      return b;
    }();
    for (std::size_t f = 0; f < grid.side_size(side); ++f) p.beta[begin + f] = 2.0 * p.alpha[axis];
  }
  p.target = std::move(values);
  return p;
}

namespace {

// Sum of boundary couplings per cell, walking the faces in canonical order.
std::vector<double> boundary_diagonal(const DiffusionProblem& p, std::vector<double>* source) {
  const Grid& g = p.grid;
  std::vector<double> diag(g.size(), 0.0);
  if (source) source->assign(g.size(), 0.0);
  std::size_t f = 0;
  for (int side = 0; side < 6; ++side) {
    const int axis = side / 2;
    const int t0 = axis == 0 ? 1 : 0;
    const int t1 = axis == 2 ? 1 : 2;
    for (int q = 0; q < g.n(t1); ++q)
      for (int r = 0; r < g.n(t0); ++r, ++f) {
        int c[3];
        c[axis] = side % 2 ? g.n(axis) - 1 : 0;
        c[t0] = r;
        c[t1] = q;
        const std::size_t n = g.index(c[0], c[1], c[2]);
        diag[n] += p.beta[f];
        if (source) (*source)[n] += p.beta[f] * p.target[f];
      }
  }
  return diag;
}

void apply_with(const DiffusionProblem& p, const std::vector<double>& bdiag, const std::vector<double>& x,
                std::vector<double>& out) {
  const Grid& g = p.grid;
  const int nx = g.n(0), ny = g.n(1), nz = g.n(2);
  const std::size_t sy = nx, sz = static_cast<std::size_t>(nx) * ny;
  const double ax = p.alpha[0], ay = p.alpha[1], az = p.alpha[2];
  out.resize(x.size());
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j) {
      const std::size_t row = k * sz + j * sy;
      for (int i = 0; i < nx; ++i) {
        const std::size_t n = row + i;
        const double xn = x[n];
        double acc = xn * (1.0 + bdiag[n]);
        if (i > 0) acc += ax * (xn - x[n - 1]);
        if (i < nx - 1) acc += ax * (xn - x[n + 1]);
        if (j > 0) acc += ay * (xn - x[n - sy]);
        if (j < ny - 1) acc += ay * (xn - x[n + sy]);
        if (k > 0) acc += az * (xn - x[n - sz]);
        if (k < nz - 1) acc += az * (xn - x[n + sz]);
        out[n] = acc;
      }
    }
}

}  // namespace

void DiffusionProblem::apply(const std::vector<double>& x, std::vector<double>& out) const {
  apply_with(*this, boundary_diagonal(*this, nullptr), x, out);
}

std::vector<double> DiffusionProblem::diagonal() const {
  std::vector<double> d = boundary_diagonal(*this, nullptr);
  for (int k = 0; k < grid.n(2); ++k)
    for (int j = 0; j < grid.n(1); ++j)
      for (int i = 0; i < grid.n(0); ++i) {
        const int c[3] = {i, j, k};
        double acc = 1.0;
        for (int a = 0; a < 3; ++a) acc += alpha[a] * ((c[a] > 0) + (c[a] < grid.n(a) - 1));
        d[grid.index(i, j, k)] += acc;
      }
  return d;
}

void DiffusionProblem::add_boundary_source(std::vector<double>& rhs) const {
  std::vector<double> source;
  boundary_diagonal(*this, &source);
  for (std::size_t n = 0; n < rhs.size(); ++n) rhs[n] += source[n];
}

SolveStats solve_pcg(const DiffusionProblem& problem, const std::vector<double>& rhs, std::vector<double>& x,
                     double rel_tol, int max_iter) {
  const std::size_t n = rhs.size();
  if (x.size() != n) x.assign(n, 0.0);
  const auto diag = problem.diagonal();
  const auto bdiag = boundary_diagonal(problem, nullptr);
  std::vector<double> r(n), z(n), p(n), ap(n);
  apply_with(problem, bdiag, x, ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ap[i];
  const double bnorm = std::sqrt(inner(rhs, rhs));
  const double goal = rel_tol * (bnorm > 0.0 ? bnorm : 1.0);
  double rnorm = std::sqrt(inner(r, r));
  SolveStats stats{0, rnorm};
  if (rnorm <= goal) return stats;
  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = inner(r, z);
  for (int it = 1; it <= max_iter; ++it) {
    apply_with(problem, bdiag, p, ap);
    const double alpha = rz / inner(p, ap);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    rnorm = std::sqrt(inner(r, r));
    stats = {it, rnorm};
    if (rnorm <= goal) return stats;
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    const double rz_new = inner(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  std::ostringstream msg;
  msg << "conjugate gradient stalled after " << max_iter << " iterations, residual " << rnorm << " > " << goal;
  throw ConvergenceError(msg.str());
}

}  // namespace anematic
