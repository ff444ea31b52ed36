#pragma once

#include <Eigen/Dense>
#include <vector>

#include "anematic/domain.hpp"
#include "anematic/galerkin.hpp"
#include "anematic/pressure.hpp"
#include "anematic/rheology.hpp"

namespace anematic {

struct MomentumConfig {
  double dt = 1e-3;
  double epsilon = 0.1;
  double sigma_star = 0.1;
  BulkParams bulk{};
  double max_condition = 1e12;
  /// Test hook: assemble the active stress with the wrong sign.
  bool flip_active_sign = false;
};

/// Every stress entering the momentum balance, at nodes.
struct StressBundle {
  SymField viscous;      // subgradient of the viscosity potential at D u
  SymField elastic;      // G(Q) I - grad Q (.) grad Q
  SkewField rotational;  // Q Lap Q - Lap Q Q
  SymField active;       // sigma* c^2 Q
  ScalarField pressure;
};

/// Node fields of one coupled iterate.
struct FlowFields {
  ScalarField rho;
  VectorField u;
  MatField grad_u;
  ScalarField c;
  QField q;
};

/// G(Q) = 1/2 |grad Q|^2 + 1/2 tr Q^2 + c*/4 tr^2 Q^2 given the three partial derivatives.
double elastic_density(const QTensor& q, const QTensor& dq_x, const QTensor& dq_y, const QTensor& dq_z, double c_star);

StressBundle assemble_stresses(const MomentumConfig& cfg, const RheologyLaw& law, const PressureLaw& pressure,
                               const FlowFields& f, const QBC& q_b);

/// A = rho u (x) u + p I - S - tau - sigma_r - sigma_a, paired with grad w_i.
MatField momentum_flux(const StressBundle& s, const FlowFields& f);
/// -eps (grad u) grad rho, paired with w_i.
VectorField coupling_force(double epsilon, const FlowFields& f);
/// int A : grad w_i + int f . w_i.
std::vector<double> galerkin_rhs(const VelocityBasis& basis, const StressBundle& s, const FlowFields& f, double epsilon);

/// Solves M(rho_new) v = M(rho_old) v_old + b(rho_old) - b(rho_new) + dt rhs, with b_i = int rho u_B . w_i,
/// M the density-weighted mass matrix. Throws IllConditionedError when cond M exceeds the configured bound.
std::vector<double> step_momentum(const MomentumConfig& cfg, const VelocityBasis& basis, const VectorField& u_b,
                                  const ScalarField& rho_old, const std::vector<double>& v_old,
                                  const ScalarField& rho_new, const std::vector<double>& rhs);

/// 2-norm condition number of a symmetric positive matrix.
double condition_number(const Eigen::MatrixXd& m);

}  // namespace anematic
