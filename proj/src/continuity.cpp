#include "anematic/continuity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "anematic/linear_solver.hpp"

namespace anematic {

double advective_speed(const FaceVelocity& u) {
  const Grid& g = u.grid;
  double speed = 0.0;
  for (int k = 0; k < g.n(2); ++k)
    for (int j = 0; j < g.n(1); ++j)
      for (int i = 0; i < g.n(0); ++i) {
        double s = 0.0;
        for (int a = 0; a < 3; ++a) {
          int hi[3] = {i, j, k};
          ++hi[a];
          s += std::max(std::abs(u.at(a, i, j, k)), std::abs(u.at(a, hi[0], hi[1], hi[2])));
        }
        speed = std::max(speed, s);
      }
  return speed;
}

ScalarField face_divergence(const FaceVelocity& u) {
  const Grid& g = u.grid;
  ScalarField div(g);
  for (int k = 0; k < g.n(2); ++k)
    for (int j = 0; j < g.n(1); ++j)
      for (int i = 0; i < g.n(0); ++i) {
        double s = 0.0;
        for (int a = 0; a < 3; ++a) {
          int hi[3] = {i, j, k};
          ++hi[a];
          s += (u.at(a, hi[0], hi[1], hi[2]) - u.at(a, i, j, k)) / g.h(a);
        }
        div(i, j, k) = s;
      }
  return div;
}

double stable_step(const Grid& grid, double kappa, double speed) {
  const double h = grid.min_spacing();
  double bound = kappa > 0.0 ? h * h / (6.0 * kappa) : INFINITY;
  if (speed > 0.0) bound = std::min(bound, h / speed);
  return 0.9 * bound;
}

ContinuityResult step_continuity(const ContinuityConfig& cfg, const BoundaryDecomposition& bd,
                                 const std::vector<double>& rho_b, const ScalarField& rho, const FaceVelocity& u) {
  const Grid& g = rho.grid;
  if (cfg.epsilon <= 0.0) throw ConfigError("continuity: epsilon must be positive");
  if (cfg.dt <= 0.0) throw ConfigError("continuity: dt must be positive");
  if (u.grid != g || bd.grid != g) throw ShapeError("continuity: grid mismatch");
  if (rho_b.size() != g.boundary_size()) throw ShapeError("continuity: one rho_B per boundary face expected");
  const double limit = stable_step(g, cfg.epsilon, advective_speed(u));
  if (cfg.dt > limit) {
    std::ostringstream msg;
    msg << "continuity: dt = " << cfg.dt << " exceeds the stability bound " << limit;
    throw StepSizeError(msg.str());
  }

  const double dt = cfg.dt;
  std::vector<double> star(g.size());
  const int nz = g.n(2), ny = g.n(1), nx = g.n(0);
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double centre = rho(i, j, k);
        double net = 0.0;  // outgoing flux per unit volume
        for (int a = 0; a < 3; ++a) {
          int lo[3] = {i, j, k}, hi[3] = {i, j, k};
          --lo[a];
          ++hi[a];
          const double ul = u.at(a, i, j, k);
          const double uh = u.at(a, hi[0], hi[1], hi[2]);
          // Boundary faces carry the interior trace; the Robin solve supplies rho_B on inflow.
          const double left = lo[a] < 0 ? centre : rho(lo[0], lo[1], lo[2]);
          const double right = hi[a] >= g.n(a) ? centre : rho(hi[0], hi[1], hi[2]);
          const double flux_h = uh >= 0.0 ? uh * centre : uh * right;
          const double flux_l = ul >= 0.0 ? ul * left : ul * centre;
          net += (flux_h - flux_l) / g.h(a);
        }
        star[g.index(i, j, k)] = centre - dt * net;
      }

  MassFlux flux;
  DiffusionProblem problem = DiffusionProblem::neumann(g, dt * cfg.epsilon);
  for (std::size_t n = 0; n < bd.faces.size(); ++n) {
    const auto& f = bd.faces[n];
    const double un = f.normal_velocity;
    const double rc = rho[f.cell];
    if (un >= 0.0) {
      flux.outflow += dt * f.area * un * rc;
    } else {
      flux.inflow += dt * f.area * (-un) * rc;
      problem.beta[n] = dt * (-un) / g.h(f.axis);
      problem.target[n] = rho_b[n];
    }
  }
  problem.add_boundary_source(star);
  std::vector<double> next = rho.data;
  solve_pcg(problem, star, next, cfg.cg_tolerance);

  ContinuityResult out{ScalarField(g), flux};
  out.rho.data = std::move(next);
  for (std::size_t n = 0; n < bd.faces.size(); ++n) {
    const auto& f = bd.faces[n];
    if (f.inflow) out.flux.robin += dt * f.area * (-f.normal_velocity) * (rho_b[n] - out.rho[f.cell]);
  }
  return out;
}

DensityBounds::DensityBounds(const ScalarField& rho0, const BoundaryDecomposition& bd, const std::vector<double>& rho_b,
                             double u_b_sup) {
  const auto [lo, hi] = std::minmax_element(rho0.data.begin(), rho0.data.end());
  upper0_ = std::max(*hi, u_b_sup);
  lower0_ = *lo;
  for (std::size_t n = 0; n < bd.faces.size(); ++n) {
    upper0_ = std::max(upper0_, rho_b[n]);
    if (bd.faces[n].inflow) lower0_ = std::min(lower0_, rho_b[n]);
  }
}

void DensityBounds::advance(double dt, const FaceVelocity& u) {
  const auto div = face_divergence(u);
  for (double d : div.data) max_div_ = std::max(max_div_, std::abs(d));
  time_ += dt;
}

double DensityBounds::upper() const { return upper0_ * std::exp(time_ * max_div_); }
double DensityBounds::lower() const { return lower0_ * std::exp(-time_ * max_div_); }

}  // namespace anematic
