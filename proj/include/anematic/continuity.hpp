#pragma once

#include <vector>

#include "anematic/domain.hpp"
#include "anematic/galerkin.hpp"

namespace anematic {

struct ContinuityConfig {
  double epsilon = 0.1;
  double dt = 1e-3;
  double cg_tolerance = 1e-13;
};

/// Boundary fluxes of one step, each already multiplied by dt and the face area.
/// Mass change = -outflow + inflow + robin.
struct MassFlux {
  double outflow = 0.0;  // sum over u.n >= 0 of u.n rho
  double inflow = 0.0;   // sum over u.n < 0 of |u.n| rho
  double robin = 0.0;    // sum over inflow faces of |u.n| (rho_B - rho_new)
};

struct ContinuityResult {
  ScalarField rho;
  MassFlux flux;
};

/// Largest cell-wise sum over axes of the face speeds, the speed entering the explicit stability bound.
double advective_speed(const FaceVelocity& u);
/// Cell-wise discrete divergence of the face velocities.
ScalarField face_divergence(const FaceVelocity& u);

/// Largest stable step 0.9 min(h^2 / (6 kappa), h / |u|).
double stable_step(const Grid& grid, double kappa, double speed);

/// One step: explicit conservative upwind advection, then implicit diffusion with the inflow Robin condition
/// eps d_n rho = |u_B.n| (rho_B - rho). rho_b holds one value per canonical boundary face.
ContinuityResult step_continuity(const ContinuityConfig& cfg, const BoundaryDecomposition& bd,
                                 const std::vector<double>& rho_b, const ScalarField& rho, const FaceVelocity& u);

/// Running upper and lower density bounds from the initial and inflow data.
class DensityBounds {
 public:
  DensityBounds(const ScalarField& rho0, const BoundaryDecomposition& bd, const std::vector<double>& rho_b,
                double u_b_sup);

  /// Records one step of length dt taken with velocity u.
  void advance(double dt, const FaceVelocity& u);
  double upper() const;
  double lower() const;
  double max_divergence() const { return max_div_; }

  std::array<double, 4> save() const { return {upper0_, lower0_, time_, max_div_}; }
  void restore(const std::array<double, 4>& s) {
    upper0_ = s[0];
    lower0_ = s[1];
    time_ = s[2];
    max_div_ = s[3];
  }

 private:
  double upper0_ = 0.0, lower0_ = 0.0;
  double time_ = 0.0, max_div_ = 0.0;
};

}  // namespace anematic
