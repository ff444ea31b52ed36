#include "anematic/domain.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace anematic {

Grid::Grid(std::array<double, 3> extent, std::array<int, 3> cells) : extent_(extent), cells_(cells) {
  for (int a = 0; a < 3; ++a) {
    if (!(extent[a] > 0.0)) throw ConfigError("grid extent must be positive");
    if (cells[a] < 4) {
      std::ostringstream msg;
      msg << "grid needs at least 4 cells per axis, got " << cells[a] << " on axis " << a;
      throw ConfigError(msg.str());
    }
  }
}

double Grid::min_spacing() const { return std::min({h(0), h(1), h(2)}); }

std::array<int, 3> Grid::coords(std::size_t idx) const {
  const int i = static_cast<int>(idx % cells_[0]);
  const std::size_t rest = idx / cells_[0];
  return {i, static_cast<int>(rest % cells_[1]), static_cast<int>(rest / cells_[1])};
}

namespace {

// The two tangential axes of a face normal to `axis`, in increasing order.
std::array<int, 2> tangential(int axis) {
  if (axis == 0) return {1, 2};
  if (axis == 1) return {0, 2};
  return {0, 1};
}

}  // namespace

std::size_t Grid::side_size(int side) const {
  const auto t = tangential(side / 2);
  return static_cast<std::size_t>(cells_[t[0]]) * cells_[t[1]];
}

std::size_t Grid::boundary_size() const {
  std::size_t n = 0;
  for (int s = 0; s < 6; ++s) n += side_size(s);
  return n;
}

std::size_t Grid::face_index(int side, int i, int j, int k) const {
  std::size_t offset = 0;
  for (int s = 0; s < side; ++s) offset += side_size(s);
  const int c[3] = {i, j, k};
  const auto t = tangential(side / 2);
  return offset + static_cast<std::size_t>(c[t[1]]) * cells_[t[0]] + c[t[0]];
}

std::size_t BoundaryDecomposition::inflow_count() const {
  std::size_t n = 0;
  for (const auto& f : faces) n += f.inflow ? 1 : 0;
  return n;
}

std::vector<BoundaryFace> boundary_faces(const Grid& grid) {
  std::vector<BoundaryFace> faces;
  faces.reserve(grid.boundary_size());
  for (int side = 0; side < 6; ++side) {
    const int axis = side / 2;
    const bool high = side % 2 == 1;
    const auto t = tangential(axis);
    for (int q = 0; q < grid.n(t[1]); ++q) {
      for (int p = 0; p < grid.n(t[0]); ++p) {
        int c[3];
        c[axis] = high ? grid.n(axis) - 1 : 0;
        c[t[0]] = p;
        c[t[1]] = q;
        BoundaryFace f;
        f.side = side;
        f.axis = axis;
        f.high = high;
        f.cell = grid.index(c[0], c[1], c[2]);
        f.centroid = grid.node(c[0], c[1], c[2]);
        f.centroid[axis] = high ? grid.extent()[axis] : 0.0;
        f.normal = {0.0, 0.0, 0.0};
        f.normal[axis] = high ? 1.0 : -1.0;
        f.area = grid.h(t[0]) * grid.h(t[1]);
        faces.push_back(f);
      }
    }
  }
  return faces;
}

BoundaryDecomposition decompose_boundary(const Grid& grid, const std::function<Vec3(const Vec3&)>& u_b) {
  BoundaryDecomposition bd{grid, boundary_faces(grid)};
  for (auto& f : bd.faces) {
    f.normal_velocity = dot(u_b(f.centroid), f.normal);
    f.inflow = f.normal_velocity < 0.0;
  }
  return bd;
}

namespace {

// Values of f at the lower and upper neighbours of (i, j, k) along `axis`, ghosts at the boundary.
template <class T, class BC>
inline void neighbours(const Field<T>& f, const BC& bc, int i, int j, int k, int axis, T& lo, T& hi) {
  const Grid& g = f.grid;
  int c[3] = {i, j, k};
  const T& centre = f(i, j, k);
  if (c[axis] > 0) {
    --c[axis];
    lo = f(c[0], c[1], c[2]);
    ++c[axis];
  } else {
    lo = bc.ghost(centre, g.face_index(2 * axis, i, j, k));
  }
  if (c[axis] < g.n(axis) - 1) {
    ++c[axis];
    hi = f(c[0], c[1], c[2]);
  } else {
    hi = bc.ghost(centre, g.face_index(2 * axis + 1, i, j, k));
  }
}

template <class T, class BC>
Field<T> laplacian_impl(const Field<T>& f, const BC& bc) {
  const Grid& g = f.grid;
  Field<T> out(g);
  const double w[3] = {1.0 / (g.h(0) * g.h(0)), 1.0 / (g.h(1) * g.h(1)), 1.0 / (g.h(2) * g.h(2))};
  const int nz = g.n(2), ny = g.n(1), nx = g.n(0);
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const T& c = f(i, j, k);
        T acc{};
        for (int a = 0; a < 3; ++a) {
          T lo, hi;
          neighbours(f, bc, i, j, k, a, lo, hi);
          acc += w[a] * ((lo - c) + (hi - c));
        }
        out(i, j, k) = acc;
      }
    }
  }
  return out;
}

// A padded copy of a field with one ghost layer, filled from the boundary rule.
template <class T>
struct Padded {
  std::array<int, 3> n;
  std::vector<T> v;
  T& at(int i, int j, int k) { return v[(static_cast<std::size_t>(k + 1) * (n[1] + 2) + (j + 1)) * (n[0] + 2) + (i + 1)]; }
};

template <class T, class BC>
Padded<T> pad(const Field<T>& f, const BC& bc) {
  const Grid& g = f.grid;
  Padded<T> p{g.cells(), std::vector<T>(static_cast<std::size_t>(g.n(0) + 2) * (g.n(1) + 2) * (g.n(2) + 2))};
  for (int k = 0; k < g.n(2); ++k)
    for (int j = 0; j < g.n(1); ++j)
      for (int i = 0; i < g.n(0); ++i) p.at(i, j, k) = f(i, j, k);
  for (int k = 0; k < g.n(2); ++k)
    for (int j = 0; j < g.n(1); ++j) {
      p.at(-1, j, k) = bc.ghost(f(0, j, k), g.face_index(0, 0, j, k));
      p.at(g.n(0), j, k) = bc.ghost(f(g.n(0) - 1, j, k), g.face_index(1, g.n(0) - 1, j, k));
    }
  for (int k = 0; k < g.n(2); ++k)
    for (int i = 0; i < g.n(0); ++i) {
      p.at(i, -1, k) = bc.ghost(f(i, 0, k), g.face_index(2, i, 0, k));
      p.at(i, g.n(1), k) = bc.ghost(f(i, g.n(1) - 1, k), g.face_index(3, i, g.n(1) - 1, k));
    }
  for (int j = 0; j < g.n(1); ++j)
    for (int i = 0; i < g.n(0); ++i) {
      p.at(i, j, -1) = bc.ghost(f(i, j, 0), g.face_index(4, i, j, 0));
      p.at(i, j, g.n(2)) = bc.ghost(f(i, j, g.n(2) - 1), g.face_index(5, i, j, g.n(2) - 1));
    }
  return p;
}

template <class T, class BC>
Field<T> serial_laplacian_impl(const Field<T>& f, const BC& bc) {
  const Grid& g = f.grid;
  Padded<T> p = pad(f, bc);
  Field<T> out(g);
  const double wx = 1.0 / (g.h(0) * g.h(0)), wy = 1.0 / (g.h(1) * g.h(1)), wz = 1.0 / (g.h(2) * g.h(2));
  for (int k = 0; k < g.n(2); ++k)
    for (int j = 0; j < g.n(1); ++j)
      for (int i = 0; i < g.n(0); ++i) {
        const T c = p.at(i, j, k);
        T acc = wx * ((p.at(i - 1, j, k) - c) + (p.at(i + 1, j, k) - c));
        acc += wy * ((p.at(i, j - 1, k) - c) + (p.at(i, j + 1, k) - c));
        acc += wz * ((p.at(i, j, k - 1) - c) + (p.at(i, j, k + 1) - c));
        out(i, j, k) = acc;
      }
  return out;
}

}  // namespace

VectorField gradient(const ScalarField& f, const ScalarBC& bc) {
  const Grid& g = f.grid;
  VectorField out(g);
  const int nz = g.n(2), ny = g.n(1), nx = g.n(0);
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        Vec3 d{};
        for (int a = 0; a < 3; ++a) {
          double lo, hi;
          neighbours(f, bc, i, j, k, a, lo, hi);
          d[a] = (hi - lo) / (2.0 * g.h(a));
        }
        out(i, j, k) = d;
      }
  return out;
}

ScalarField divergence(const VectorField& v, const VectorBC& bc) {
  const Grid& g = v.grid;
  ScalarField out(g);
  const int nz = g.n(2), ny = g.n(1), nx = g.n(0);
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        double s = 0.0;
        for (int a = 0; a < 3; ++a) {
          Vec3 lo, hi;
          neighbours(v, bc, i, j, k, a, lo, hi);
          s += (hi[a] - lo[a]) / (2.0 * g.h(a));
        }
        out(i, j, k) = s;
      }
  return out;
}

MatField gradient_matrix(const VectorField& v, const VectorBC& bc) {
  const Grid& g = v.grid;
  MatField out(g);
  const int nz = g.n(2), ny = g.n(1), nx = g.n(0);
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        Mat3 m;
        for (int a = 0; a < 3; ++a) {
          Vec3 lo, hi;
          neighbours(v, bc, i, j, k, a, lo, hi);
          for (int c = 0; c < 3; ++c) m(c, a) = (hi[c] - lo[c]) / (2.0 * g.h(a));
        }
        out(i, j, k) = m;
      }
  return out;
}

std::pair<SymField, SkewField> sym_skew_split(const MatField& grad) {
  SymField sym(grad.grid);
  SkewField skew(grad.grid);
  const std::size_t n = grad.size();
#pragma omp parallel for schedule(static)
  for (std::size_t p = 0; p < n; ++p) {
    sym[p] = SymTensor::sym_part(grad[p]);
    skew[p] = SkewTensor::skew_part(grad[p]);
  }
  return {std::move(sym), std::move(skew)};
}

std::pair<SymField, SkewField> sym_skew_gradient(const VectorField& v, const VectorBC& bc) {
  return sym_skew_split(gradient_matrix(v, bc));
}

std::array<QField, 3> gradient(const QField& q, const QBC& bc) {
  const Grid& g = q.grid;
  std::array<QField, 3> out{QField(g), QField(g), QField(g)};
  const int nz = g.n(2), ny = g.n(1), nx = g.n(0);
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        for (int a = 0; a < 3; ++a) {
          QTensor lo, hi;
          neighbours(q, bc, i, j, k, a, lo, hi);
          out[a](i, j, k) = (0.5 / g.h(a)) * (hi - lo);
        }
  return out;
}

ScalarField laplacian(const ScalarField& f, const ScalarBC& bc) { return laplacian_impl(f, bc); }
VectorField laplacian(const VectorField& v, const VectorBC& bc) {
  const Grid& g = v.grid;
  VectorField out(g);
  const double w[3] = {1.0 / (g.h(0) * g.h(0)), 1.0 / (g.h(1) * g.h(1)), 1.0 / (g.h(2) * g.h(2))};
  const int nz = g.n(2), ny = g.n(1), nx = g.n(0);
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const Vec3& c = v(i, j, k);
        Vec3 acc{};
        for (int a = 0; a < 3; ++a) {
          Vec3 lo, hi;
          neighbours(v, bc, i, j, k, a, lo, hi);
          for (int m = 0; m < 3; ++m) acc[m] += w[a] * ((lo[m] - c[m]) + (hi[m] - c[m]));
        }
        out(i, j, k) = acc;
      }
  return out;
}
QField laplacian(const QField& q, const QBC& bc) { return laplacian_impl(q, bc); }

double volume_integral(const Grid& grid, const std::function<double(std::size_t)>& integrand) {
  const int nz = grid.n(2);
  const std::size_t slab = static_cast<std::size_t>(grid.n(0)) * grid.n(1);
  std::vector<double> partial(nz, 0.0);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < nz; ++k) {
    double s = 0.0;
    const std::size_t base = k * slab;
    for (std::size_t p = 0; p < slab; ++p) s += integrand(base + p);
    partial[k] = s;
  }
  return std::accumulate(partial.begin(), partial.end(), 0.0) * grid.cell_volume();
}

double volume_integral(const ScalarField& f) {
  return volume_integral(f.grid, [&f](std::size_t p) { return f[p]; });
}

double surface_integral(const BoundaryDecomposition& bd, const std::vector<double>& values, BoundarySubset subset) {
  if (values.size() != bd.faces.size()) throw ShapeError("surface_integral: one value per boundary face expected");
  double s = 0.0;
  for (std::size_t n = 0; n < values.size(); ++n) {
    const auto& f = bd.faces[n];
    if (subset == BoundarySubset::inflow && !f.inflow) continue;
    if (subset == BoundarySubset::outflow && f.inflow) continue;
    s += values[n] * f.area;
  }
  return s;
}

namespace serial {

ScalarField laplacian(const ScalarField& f, const ScalarBC& bc) { return serial_laplacian_impl(f, bc); }
QField laplacian(const QField& q, const QBC& bc) { return serial_laplacian_impl(q, bc); }

VectorField gradient(const ScalarField& f, const ScalarBC& bc) {
  const Grid& g = f.grid;
  Padded<double> p = pad(f, bc);
  VectorField out(g);
  for (int k = 0; k < g.n(2); ++k)
    for (int j = 0; j < g.n(1); ++j)
      for (int i = 0; i < g.n(0); ++i)
        out(i, j, k) = {(p.at(i + 1, j, k) - p.at(i - 1, j, k)) / (2.0 * g.h(0)),
                        (p.at(i, j + 1, k) - p.at(i, j - 1, k)) / (2.0 * g.h(1)),
                        (p.at(i, j, k + 1) - p.at(i, j, k - 1)) / (2.0 * g.h(2))};
  return out;
}

double volume_integral(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.data) s += v;
  return s * f.grid.cell_volume();
}

}  // namespace serial

}  // namespace anematic
