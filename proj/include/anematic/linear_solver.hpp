#pragma once

#include <array>
#include <vector>

#include "anematic/domain.hpp"

namespace anematic {

/// Implicit diffusion operator (I - dt kappa Lap_h) with per-face boundary coupling:
///   (A x)_n = x_n + sum_interior alpha_a (x_n - x_m) + sum_boundary beta_f x_n
/// and the right-hand side gains beta_f * target_f on every boundary face.
/// Neumann faces have beta = 0, Dirichlet faces beta = 2 alpha, Robin faces beta = dt |u.n| / h.
struct DiffusionProblem {
  Grid grid;
  std::array<double, 3> alpha{};
  std::vector<double> beta;    // per canonical boundary face
  std::vector<double> target;  // per canonical boundary face

  static DiffusionProblem neumann(const Grid& grid, double dt_kappa);
  static DiffusionProblem dirichlet(const Grid& grid, double dt_kappa, std::vector<double> values);

  void apply(const std::vector<double>& x, std::vector<double>& out) const;
  std::vector<double> diagonal() const;
  /// Adds the boundary targets to a right-hand side.
  void add_boundary_source(std::vector<double>& rhs) const;
};

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradient on A x = rhs (boundary source already included).
/// x holds the initial guess on entry. Throws ConvergenceError when the relative tolerance is not met.
SolveStats solve_pcg(const DiffusionProblem& problem, const std::vector<double>& rhs, std::vector<double>& x,
                     double rel_tol = 1e-13, int max_iter = 2000);

}  // namespace anematic
