#pragma once

#include <vector>

#include "anematic/continuity.hpp"
#include "anematic/expressions.hpp"
#include "anematic/galerkin.hpp"
#include "anematic/momentum.hpp"
#include "anematic/nematic.hpp"
#include "anematic/pressure.hpp"
#include "anematic/rheology.hpp"

namespace anematic {

struct PicardConfig {
  double tolerance = 1e-8;
  int max_iterations = 200;
  double damping = 0.5;  // weight of the new image in the damped update
  /// Start from the polynomial extrapolation of the last three accepted states instead of v^n.
  bool extrapolate = true;
};

/// Everything fixed for the duration of a run: grid, basis, laws, boundary data.
struct Model {
  Grid grid;
  VelocityBasis basis;
  VectorExpr u_b;
  BoundaryDecomposition boundary;
  std::vector<double> rho_b;  // per boundary face
  QBC q_b;
  VectorField u_b_nodes;
  RheologyLaw law;
  PressureLaw pressure;
  ContinuityConfig continuity;
  NematicConfig nematic;
  MomentumConfig momentum;
  PicardConfig picard;

  Model(const Grid& g, int modes, const VectorExpr& boundary_velocity, const std::vector<double>& boundary_density,
        const std::vector<QTensor>& boundary_q, RheologyLaw viscosity, PressureLaw eos);

  double dt() const { return continuity.dt; }
};

struct State {
  long step = 0;
  double time = 0.0;
  ScalarField rho, c;
  QField q;
  std::vector<double> v, v_prev, v_prev2;
};

/// What one coupled step produced: the accepted iterate and the data the monitors consume.
struct StepReport {
  int iterations = 0;
  std::vector<double> increments;
  MassFlux flux;
  FlowFields iterate;  // fields of the last Picard iterate (velocity from its input coefficients)
  FaceVelocity faces;
  StressBundle stresses;
  std::vector<double> rhs;
};

/// Node velocity fields of a coefficient vector.
FlowFields velocity_fields(const Model& model, const std::vector<double>& v, const State& state);

/// One step of the Picard map: given v^k, advance rho, c, Q from `state` and return the momentum image.
struct PicardImage {
  std::vector<double> v;
  FlowFields fields;
  FaceVelocity faces;
  StressBundle stresses;
  std::vector<double> rhs;
  MassFlux flux;
};
PicardImage picard_image(const Model& model, const State& state, const std::vector<double>& guess);

/// Advances the coupled system by one step with the damped Picard iteration.
/// Throws ConvergenceError (with the last increment) when the iteration budget is exhausted.
StepReport advance(const Model& model, State& state);

}  // namespace anematic
