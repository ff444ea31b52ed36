#pragma once

#include <functional>
#include <vector>

#include "anematic/domain.hpp"

namespace anematic {

struct NematicConfig {
  double d0 = 0.1;     // concentration diffusivity
  double gamma = 0.1;  // rotational mobility
  BulkParams bulk{};   // c*, b
  double sigma_star = 0.1;
  double dt = 1e-3;
  double cg_tolerance = 1e-13;
};

/// Largest nodal l1 speed |u_x| + |u_y| + |u_z|.
double nodal_speed(const VectorField& u);

/// Upwind advection then implicit diffusion with zero-flux walls.
ScalarField step_concentration(const NematicConfig& cfg, const ScalarField& c, const VectorField& u);

/// H[Q, c] = Lap Q + bulk field, with Dirichlet ghosts from q_b.
QField molecular_field(const NematicConfig& cfg, const QField& q, const ScalarField& c, const QBC& q_b);

/// Advection, corotation with the skew velocity gradient, then implicit Gamma Lap relaxation with the bulk field
/// evaluated explicitly at the new concentration. grad_u is (grad u)_ij = d_j u_i.
QField step_q(const NematicConfig& cfg, const QField& q, const ScalarField& c_new, const VectorField& u,
              const MatField& grad_u, const QBC& q_b);

/// int 1/2 |grad Q|^2 with face differences; Dirichlet walls sit half a cell from the boundary nodes.
double elastic_energy(const QField& q, const QBC& q_b);

/// Landau-de Gennes free energy whose negative gradient is the molecular field for spatially uniform c:
/// int 1/2 |grad Q|^2 + (c - c*)/4 tr Q^2 - b/3 tr Q^3 + c*/4 tr^2 Q^2, with face-difference gradients.
double ldg_energy(const NematicConfig& cfg, const QField& q, double c, const QBC& q_b);

/// Both sides of int (L'Q' - Q'L') : Lap Q = int div(Q' Lap Q - Lap Q Q') . U for U vanishing on the walls,
/// evaluated with grid operators on sampled fields.
struct CommutatorPairing {
  double volume_side = 0.0;
  double divergence_side = 0.0;
};

CommutatorPairing commutator_pairings(const Grid& grid, const std::function<QTensor(const Vec3&)>& q,
                                      const std::function<QTensor(const Vec3&)>& q_prime,
                                      const std::function<Vec3(const Vec3&)>& u);

}  // namespace anematic
