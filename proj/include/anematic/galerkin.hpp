#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "anematic/domain.hpp"
#include "anematic/expressions.hpp"

namespace anematic {

/// Normal velocity on every grid face, one array per face orientation.
/// normal[a] has (N_a + 1) entries along axis a and N entries along the others, x fastest.
struct FaceVelocity {
  Grid grid;
  std::array<std::vector<double>, 3> normal;

  std::size_t index(int axis, int i, int j, int k) const;
  double at(int axis, int i, int j, int k) const { return normal[axis][index(axis, i, j, k)]; }
  /// Largest |u . n| over all faces.
  double max_abs() const;
};

/// Orthonormal sine modes sqrt(8 / |Omega|) sin(k x) sin(l y) sin(m z) e_alpha, wavenumbers 1..m per axis.
/// Mode index = alpha m^3 + (kz m + ky) m + kx with zero-based wavenumber offsets.
class VelocityBasis {
 public:
  VelocityBasis(const Grid& grid, int modes_per_axis);

  const Grid& grid() const { return grid_; }
  int modes_per_axis() const { return m_; }
  int scalar_size() const { return m_ * m_ * m_; }
  int size() const { return 3 * scalar_size(); }

  /// Scalar mode value at an arbitrary point.
  double scalar_mode(int s, const Vec3& x) const;
  Vec3 scalar_mode_gradient(int s, const Vec3& x) const;
  /// w_i at an arbitrary point.
  Vec3 mode(int i, const Vec3& x) const;

  /// Per-axis tables: value[a][k * n + i] = X_k(x_i) at nodes; slope is the derivative;
  /// face tables are sampled at the N_a + 1 face positions.
  const std::vector<double>& node_value(int a) const { return node_value_[a]; }
  const std::vector<double>& node_slope(int a) const { return node_slope_[a]; }
  const std::vector<double>& face_value(int a) const { return face_value_[a]; }

 private:
  Grid grid_;
  int m_;
  std::array<double, 3> norm_{};
  std::array<std::vector<double>, 3> node_value_, node_slope_, face_value_;
};

/// u = sum v_i w_i + u_B at nodes.
VectorField synthesize(const VelocityBasis& basis, const std::vector<double>& v, const VectorExpr& u_b);
/// grad u at nodes, exact for the synthesized field.
MatField synthesize_gradient(const VelocityBasis& basis, const std::vector<double>& v, const VectorExpr& u_b);
/// u . e_a at face centres.
FaceVelocity synthesize_faces(const VelocityBasis& basis, const std::vector<double>& v, const VectorExpr& u_b);
/// Coefficients <f, w_i> by midpoint quadrature.
std::vector<double> project(const VelocityBasis& basis, const VectorField& f);

/// Scalar mass matrix M_ab = int rho phi_a phi_b (the vector mass matrix is three copies of it).
Eigen::MatrixXd scalar_mass_matrix(const VelocityBasis& basis, const ScalarField& rho);
/// Gram matrix of all vector modes by quadrature.
Eigen::MatrixXd gram_matrix(const VelocityBasis& basis);
/// int A : grad w_i + int f . w_i for every mode.
std::vector<double> pair_with_modes(const VelocityBasis& basis, const MatField& a, const VectorField& f);
/// int rho u_B . w_i.
std::vector<double> boundary_momentum(const VelocityBasis& basis, const ScalarField& rho, const VectorField& u_b);

namespace serial {
/// Per-mode quadrature loops over the whole grid.
Eigen::MatrixXd scalar_mass_matrix(const VelocityBasis& basis, const ScalarField& rho);
std::vector<double> pair_with_modes(const VelocityBasis& basis, const MatField& a, const VectorField& f);
VectorField synthesize(const VelocityBasis& basis, const std::vector<double>& v, const VectorExpr& u_b);
}  // namespace serial

}  // namespace anematic
