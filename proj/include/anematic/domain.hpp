#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "anematic/error.hpp"
#include "anematic/tensor.hpp"

namespace anematic {

/// Uniform box [0, Lx] x [0, Ly] x [0, Lz] with nodes at cell centres.
class Grid {
 public:
  Grid() = default;
  Grid(std::array<double, 3> extent, std::array<int, 3> cells);

  const std::array<double, 3>& extent() const { return extent_; }
  const std::array<int, 3>& cells() const { return cells_; }
  int n(int axis) const { return cells_[axis]; }
  double h(int axis) const { return extent_[axis] / cells_[axis]; }
  double cell_volume() const { return h(0) * h(1) * h(2); }
  double min_spacing() const;
  std::size_t size() const { return static_cast<std::size_t>(cells_[0]) * cells_[1] * cells_[2]; }

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * cells_[1] + j) * cells_[0] + i;
  }
  std::array<int, 3> coords(std::size_t idx) const;
  Vec3 node(int i, int j, int k) const {
    return {(i + 0.5) * h(0), (j + 0.5) * h(1), (k + 0.5) * h(2)};
  }

  /// Number of boundary face cells on one side (side = 2 axis + high).
  std::size_t side_size(int side) const;
  std::size_t boundary_size() const;
  /// Canonical index of the boundary face of cell (i, j, k) on the given side.
  std::size_t face_index(int side, int i, int j, int k) const;

  bool operator==(const Grid& o) const { return extent_ == o.extent_ && cells_ == o.cells_; }
  bool operator!=(const Grid& o) const { return !(*this == o); }

 private:
  std::array<double, 3> extent_{1.0, 1.0, 1.0};
  std::array<int, 3> cells_{4, 4, 4};
};

/// Per-node samples of T on a grid.
template <class T>
struct Field {
  Grid grid;
  std::vector<T> data;

  Field() = default;
  explicit Field(const Grid& g, const T& init = T{}) : grid(g), data(g.size(), init) {}

  T& operator[](std::size_t n) { return data[n]; }
  const T& operator[](std::size_t n) const { return data[n]; }
  T& operator()(int i, int j, int k) { return data[grid.index(i, j, k)]; }
  const T& operator()(int i, int j, int k) const { return data[grid.index(i, j, k)]; }
  std::size_t size() const { return data.size(); }
};

using ScalarField = Field<double>;
using VectorField = Field<Vec3>;
using QField = Field<QTensor>;
using SymField = Field<SymTensor>;
using SkewField = Field<SkewTensor>;
using MatField = Field<Mat3>;

template <class A, class B>
void require_same_grid(const Field<A>& a, const Field<B>& b, const char* what) {
  if (a.grid != b.grid) throw ShapeError(std::string(what) + ": grid mismatch");
}

/// One boundary face cell.
struct BoundaryFace {
  int side = 0;
  int axis = 0;
  bool high = false;
  std::size_t cell = 0;
  Vec3 centroid{};
  Vec3 normal{};
  double area = 0.0;
  double normal_velocity = 0.0;  // u_B . n at the centroid
  bool inflow = false;
};

/// Boundary faces in canonical order, flagged inflow where u_B . n < 0.
struct BoundaryDecomposition {
  Grid grid;
  std::vector<BoundaryFace> faces;

  std::size_t inflow_count() const;
};

enum class BoundarySubset { inflow, outflow, all };

/// Canonical boundary faces with geometry only.
std::vector<BoundaryFace> boundary_faces(const Grid& grid);
BoundaryDecomposition decompose_boundary(const Grid& grid, const std::function<Vec3(const Vec3&)>& u_b);

/// Ghost-cell rule of a scalar or component field.
/// Dirichlet ghosts reflect through the face value, Neumann ghosts mirror the interior.
template <class T>
struct GhostRule {
  enum class Kind { neumann, dirichlet };
  Kind kind = Kind::neumann;
  std::vector<T> values;  // per boundary face, Dirichlet only

  static GhostRule neumann() { return {}; }
  static GhostRule dirichlet(std::vector<T> v) { return {Kind::dirichlet, std::move(v)}; }
  T ghost(const T& interior, std::size_t face) const {
    if (kind == Kind::neumann) return interior;
    return 2.0 * values[face] - interior;
  }
};

using ScalarBC = GhostRule<double>;
using QBC = GhostRule<QTensor>;

/// Vector fields carry Dirichlet data only (velocity equals u_B on the boundary).
struct VectorBC {
  std::vector<Vec3> values;
  Vec3 ghost(const Vec3& interior, std::size_t face) const {
    const Vec3& g = values[face];
    return {2.0 * g[0] - interior[0], 2.0 * g[1] - interior[1], 2.0 * g[2] - interior[2]};
  }
};

/// Sample a function at the centroids of the canonical boundary faces.
template <class T>
std::vector<T> sample_boundary(const Grid& grid, const std::function<T(const Vec3&)>& f) {
  const auto faces = boundary_faces(grid);
  std::vector<T> out(faces.size());
  for (std::size_t n = 0; n < faces.size(); ++n) out[n] = f(faces[n].centroid);
  return out;
}

template <class T>
Field<T> sample_field(const Grid& grid, const std::function<T(const Vec3&)>& f) {
  Field<T> out(grid);
  for (int k = 0; k < grid.n(2); ++k)
    for (int j = 0; j < grid.n(1); ++j)
      for (int i = 0; i < grid.n(0); ++i) out(i, j, k) = f(grid.node(i, j, k));
  return out;
}

// Second-order central-difference operators with ghost cells.
VectorField gradient(const ScalarField& f, const ScalarBC& bc);
ScalarField divergence(const VectorField& v, const VectorBC& bc);
ScalarField laplacian(const ScalarField& f, const ScalarBC& bc);
VectorField laplacian(const VectorField& v, const VectorBC& bc);
QField laplacian(const QField& q, const QBC& bc);
/// Partial derivatives (d/dx, d/dy, d/dz) of a Q field.
std::array<QField, 3> gradient(const QField& q, const QBC& bc);
/// (grad v)_ij = d_j v_i.
MatField gradient_matrix(const VectorField& v, const VectorBC& bc);
std::pair<SymField, SkewField> sym_skew_gradient(const VectorField& v, const VectorBC& bc);
std::pair<SymField, SkewField> sym_skew_split(const MatField& grad);

/// Deterministic midpoint-rule volume integral (slab partial sums added serially).
double volume_integral(const ScalarField& f);
/// Volume integral of a per-node integrand evaluated on the fly.
double volume_integral(const Grid& grid, const std::function<double(std::size_t)>& integrand);
/// Midpoint-rule surface integral of per-face values over a subset of the boundary.
double surface_integral(const BoundaryDecomposition& bd, const std::vector<double>& values, BoundarySubset subset);

/// Single-threaded reference implementations with padded ghost arrays, kept for testing the OpenMP kernels.
namespace serial {
ScalarField laplacian(const ScalarField& f, const ScalarBC& bc);
VectorField gradient(const ScalarField& f, const ScalarBC& bc);
QField laplacian(const QField& q, const QBC& bc);
double volume_integral(const ScalarField& f);
}  // namespace serial

}  // namespace anematic
