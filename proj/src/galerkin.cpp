#include "anematic/galerkin.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace anematic {

namespace {

constexpr double kPi = std::numbers::pi;

// A 1-D table with `rows` functions sampled at `cols` points: t[r * cols + c].
struct Table1D {
  const double* t;
  int rows;
  int cols;
};

// f[k][j][i] = sum coef[cz][cy][cx] X[cx][i] Y[cy][j] Z[cz][k].
std::vector<double> evaluate_separable(const std::vector<double>& coef, Table1D x, Table1D y, Table1D z) {
  const int nx = x.cols, ny = y.cols, nz = z.cols;
  const int rx = x.rows, ry = y.rows, rz = z.rows;
  std::vector<double> t1(static_cast<std::size_t>(rz) * ry * nx, 0.0);
  for (int cz = 0; cz < rz; ++cz)
    for (int cy = 0; cy < ry; ++cy)
      for (int cx = 0; cx < rx; ++cx) {
        const double c = coef[(static_cast<std::size_t>(cz) * ry + cy) * rx + cx];
        if (c == 0.0) continue;
        double* row = &t1[(static_cast<std::size_t>(cz) * ry + cy) * nx];
        for (int i = 0; i < nx; ++i) row[i] += c * x.t[cx * nx + i];
      }
  std::vector<double> t2(static_cast<std::size_t>(rz) * ny * nx, 0.0);
  for (int cz = 0; cz < rz; ++cz)
    for (int j = 0; j < ny; ++j) {
      double* out = &t2[(static_cast<std::size_t>(cz) * ny + j) * nx];
      for (int cy = 0; cy < ry; ++cy) {
        const double w = y.t[cy * ny + j];
        const double* in = &t1[(static_cast<std::size_t>(cz) * ry + cy) * nx];
        for (int i = 0; i < nx; ++i) out[i] += w * in[i];
      }
    }
  std::vector<double> f(static_cast<std::size_t>(nz) * ny * nx, 0.0);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < nz; ++k) {
    double* out = &f[static_cast<std::size_t>(k) * ny * nx];
    for (int cz = 0; cz < rz; ++cz) {
      const double w = z.t[cz * nz + k];
      const double* in = &t2[static_cast<std::size_t>(cz) * ny * nx];
      for (std::size_t p = 0; p < static_cast<std::size_t>(ny) * nx; ++p) out[p] += w * in[p];
    }
  }
  return f;
}

// coef[cz][cy][cx] = sum_{ijk} g[k][j][i] X[cx][i] Y[cy][j] Z[cz][k], deterministic in the thread count.
std::vector<double> contract_separable(const double* g, Table1D x, Table1D y, Table1D z) {
  const int nx = x.cols, ny = y.cols, nz = z.cols;
  const int rx = x.rows, ry = y.rows, rz = z.rows;
  std::vector<double> a2(static_cast<std::size_t>(nz) * ry * rx, 0.0);
#pragma omp parallel
  {
    std::vector<double> a1(static_cast<std::size_t>(ny) * rx);
#pragma omp for schedule(static)
    for (int k = 0; k < nz; ++k) {
      for (int j = 0; j < ny; ++j) {
        const double* row = g + (static_cast<std::size_t>(k) * ny + j) * nx;
        for (int cx = 0; cx < rx; ++cx) {
          const double* tx = x.t + cx * nx;
          double s = 0.0;
          for (int i = 0; i < nx; ++i) s += row[i] * tx[i];
          a1[static_cast<std::size_t>(j) * rx + cx] = s;
        }
      }
      double* out = &a2[static_cast<std::size_t>(k) * ry * rx];
      for (int cy = 0; cy < ry; ++cy)
        for (int cx = 0; cx < rx; ++cx) {
          double s = 0.0;
          for (int j = 0; j < ny; ++j) s += a1[static_cast<std::size_t>(j) * rx + cx] * y.t[cy * ny + j];
          out[cy * rx + cx] = s;
        }
    }
  }
  std::vector<double> coef(static_cast<std::size_t>(rz) * ry * rx, 0.0);
  for (int cz = 0; cz < rz; ++cz)
    for (int k = 0; k < nz; ++k) {
      const double w = z.t[cz * nz + k];
      const double* in = &a2[static_cast<std::size_t>(k) * ry * rx];
      double* out = &coef[static_cast<std::size_t>(cz) * ry * rx];
      for (int p = 0; p < ry * rx; ++p) out[p] += w * in[p];
    }
  return coef;
}

std::vector<double> component_coefficients(const VelocityBasis& basis, const std::vector<double>& v, int alpha) {
  const int ns = basis.scalar_size();
  return std::vector<double>(v.begin() + alpha * ns, v.begin() + (alpha + 1) * ns);
}

Table1D node_table(const VelocityBasis& b, int a, bool slope) {
  return {slope ? b.node_slope(a).data() : b.node_value(a).data(), b.modes_per_axis(), b.grid().n(a)};
}

void check_coefficients(const VelocityBasis& basis, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != basis.size()) {
    std::ostringstream msg;
    msg << "Galerkin state has " << v.size() << " coefficients, basis has " << basis.size();
    throw ShapeError(msg.str());
  }
}

}  // namespace

std::size_t FaceVelocity::index(int axis, int i, int j, int k) const {
  std::array<int, 3> f = grid.cells();
  f[axis] += 1;
  return (static_cast<std::size_t>(k) * f[1] + j) * f[0] + i;
}

double FaceVelocity::max_abs() const {
  double m = 0.0;
  for (const auto& arr : normal)
    for (double u : arr) m = std::max(m, std::abs(u));
  return m;
}

VelocityBasis::VelocityBasis(const Grid& grid, int modes_per_axis) : grid_(grid), m_(modes_per_axis) {
  if (m_ < 1) throw ConfigError("galerkin.modes_per_axis must be >= 1");
  for (int a = 0; a < 3; ++a) {
    if (grid.n(a) < 4 * m_) {
      std::ostringstream msg;
      msg << "grid with " << grid.n(a) << " cells on axis " << a << " under-resolves " << m_
          << " modes per axis (needs N >= 4m)";
      throw ConfigError(msg.str());
    }
    const double len = grid.extent()[a];
    const int n = grid.n(a);
    norm_[a] = std::sqrt(2.0 / len);
    node_value_[a].resize(static_cast<std::size_t>(m_) * n);
    node_slope_[a].resize(static_cast<std::size_t>(m_) * n);
    face_value_[a].resize(static_cast<std::size_t>(m_) * (n + 1));
    for (int k = 0; k < m_; ++k) {
      const double w = (k + 1) * kPi / len;
      for (int i = 0; i < n; ++i) {
        const double x = (i + 0.5) * grid.h(a);
        node_value_[a][k * n + i] = norm_[a] * std::sin(w * x);
        node_slope_[a][k * n + i] = norm_[a] * w * std::cos(w * x);
      }
      for (int i = 0; i <= n; ++i) {
        // Modes vanish exactly on the boundary faces.
        face_value_[a][k * (n + 1) + i] = (i == 0 || i == n) ? 0.0 : norm_[a] * std::sin(w * i * grid.h(a));
      }
    }
  }
}

double VelocityBasis::scalar_mode(int s, const Vec3& x) const {
  const int idx[3] = {s % m_, (s / m_) % m_, s / (m_ * m_)};
  double v = 1.0;
  for (int a = 0; a < 3; ++a) {
    const double len = grid_.extent()[a];
    if (x[a] <= 0.0 || x[a] >= len) return 0.0;
    v *= norm_[a] * std::sin((idx[a] + 1) * kPi * x[a] / len);
  }
  return v;
}

Vec3 VelocityBasis::scalar_mode_gradient(int s, const Vec3& x) const {
  const int idx[3] = {s % m_, (s / m_) % m_, s / (m_ * m_)};
  double f[3], df[3];
  for (int a = 0; a < 3; ++a) {
    const double len = grid_.extent()[a];
    const double w = (idx[a] + 1) * kPi / len;
    f[a] = norm_[a] * std::sin(w * x[a]);
    df[a] = norm_[a] * w * std::cos(w * x[a]);
  }
  return {df[0] * f[1] * f[2], f[0] * df[1] * f[2], f[0] * f[1] * df[2]};
}

Vec3 VelocityBasis::mode(int i, const Vec3& x) const {
  Vec3 out{0, 0, 0};
  out[i / scalar_size()] = scalar_mode(i % scalar_size(), x);
  return out;
}

VectorField synthesize(const VelocityBasis& basis, const std::vector<double>& v, const VectorExpr& u_b) {
  check_coefficients(basis, v);
  const Grid& g = basis.grid();
  VectorField u = sample_field<Vec3>(g, [&u_b](const Vec3& x) { return u_b.value(x); });
  for (int alpha = 0; alpha < 3; ++alpha) {
    const auto part = evaluate_separable(component_coefficients(basis, v, alpha), node_table(basis, 0, false),
                                         node_table(basis, 1, false), node_table(basis, 2, false));
    for (std::size_t p = 0; p < u.size(); ++p) u[p][alpha] += part[p];
  }
  return u;
}

MatField synthesize_gradient(const VelocityBasis& basis, const std::vector<double>& v, const VectorExpr& u_b) {
  check_coefficients(basis, v);
  const Grid& g = basis.grid();
  MatField grad = sample_field<Mat3>(g, [&u_b](const Vec3& x) { return u_b.jacobian(x); });
  for (int alpha = 0; alpha < 3; ++alpha) {
    const auto coef = component_coefficients(basis, v, alpha);
    for (int beta = 0; beta < 3; ++beta) {
      const auto part = evaluate_separable(coef, node_table(basis, 0, beta == 0), node_table(basis, 1, beta == 1),
                                           node_table(basis, 2, beta == 2));
      for (std::size_t p = 0; p < grad.size(); ++p) grad[p](alpha, beta) += part[p];
    }
  }
  return grad;
}

FaceVelocity synthesize_faces(const VelocityBasis& basis, const std::vector<double>& v, const VectorExpr& u_b) {
  check_coefficients(basis, v);
  const Grid& g = basis.grid();
  FaceVelocity fv{g, {}};
  for (int a = 0; a < 3; ++a) {
    Table1D t[3];
    for (int b = 0; b < 3; ++b) t[b] = node_table(basis, b, false);
    t[a] = {basis.face_value(a).data(), basis.modes_per_axis(), g.n(a) + 1};
    auto vals = evaluate_separable(component_coefficients(basis, v, a), t[0], t[1], t[2]);
    std::array<int, 3> f = g.cells();
    f[a] += 1;
    for (int k = 0; k < f[2]; ++k)
      for (int j = 0; j < f[1]; ++j)
        for (int i = 0; i < f[0]; ++i) {
          Vec3 x = g.node(i, j, k);
          const int c[3] = {i, j, k};
          x[a] = c[a] * g.h(a);
          vals[fv.index(a, i, j, k)] += u_b.value(x)[a];
        }
    fv.normal[a] = std::move(vals);
  }
  return fv;
}

std::vector<double> project(const VelocityBasis& basis, const VectorField& f) {
  if (f.grid != basis.grid()) throw ShapeError("project: grid mismatch");
  const int ns = basis.scalar_size();
  std::vector<double> out(basis.size());
  std::vector<double> comp(f.size());
  for (int alpha = 0; alpha < 3; ++alpha) {
    for (std::size_t p = 0; p < f.size(); ++p) comp[p] = f[p][alpha];
    const auto c = contract_separable(comp.data(), node_table(basis, 0, false), node_table(basis, 1, false),
                                      node_table(basis, 2, false));
    for (int s = 0; s < ns; ++s) out[alpha * ns + s] = c[s] * f.grid.cell_volume();
  }
  return out;
}

Eigen::MatrixXd scalar_mass_matrix(const VelocityBasis& basis, const ScalarField& rho) {
  if (rho.grid != basis.grid()) throw ShapeError("scalar_mass_matrix: grid mismatch");
  const Grid& g = basis.grid();
  const int m = basis.modes_per_axis();
  std::array<std::vector<double>, 3> products;
  Table1D t[3];
  for (int a = 0; a < 3; ++a) {
    const int n = g.n(a);
    const auto& x = basis.node_value(a);
    products[a].resize(static_cast<std::size_t>(m) * m * n);
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q)
        for (int i = 0; i < n; ++i) products[a][(p * m + q) * n + i] = x[p * n + i] * x[q * n + i];
    t[a] = {products[a].data(), m * m, n};
  }
  const auto c = contract_separable(rho.data.data(), t[0], t[1], t[2]);
  const int ns = basis.scalar_size();
  Eigen::MatrixXd mass(ns, ns);
  const double vol = g.cell_volume();
  for (int a = 0; a < ns; ++a) {
    const int ax = a % m, ay = (a / m) % m, az = a / (m * m);
    for (int b = 0; b < ns; ++b) {
      const int bx = b % m, by = (b / m) % m, bz = b / (m * m);
      const std::size_t pos = (static_cast<std::size_t>(az * m + bz) * (m * m) + (ay * m + by)) * (m * m) + (ax * m + bx);
      mass(a, b) = c[pos] * vol;
    }
  }
  return mass;
}

Eigen::MatrixXd gram_matrix(const VelocityBasis& basis) {
  const Eigen::MatrixXd s = serial::scalar_mass_matrix(basis, ScalarField(basis.grid(), 1.0));
  const int ns = basis.scalar_size();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(3 * ns, 3 * ns);
  for (int a = 0; a < 3; ++a) gram.block(a * ns, a * ns, ns, ns) = s;
  return gram;
}

std::vector<double> pair_with_modes(const VelocityBasis& basis, const MatField& a, const VectorField& f) {
  if (a.grid != basis.grid() || f.grid != basis.grid()) throw ShapeError("pair_with_modes: grid mismatch");
  const int ns = basis.scalar_size();
  const double vol = basis.grid().cell_volume();
  std::vector<double> out(basis.size(), 0.0);
  std::vector<double> comp(a.size());
  for (int alpha = 0; alpha < 3; ++alpha) {
    for (int beta = 0; beta < 3; ++beta) {
      for (std::size_t p = 0; p < a.size(); ++p) comp[p] = a[p](alpha, beta);
      const auto c = contract_separable(comp.data(), node_table(basis, 0, beta == 0), node_table(basis, 1, beta == 1),
                                        node_table(basis, 2, beta == 2));
      for (int s = 0; s < ns; ++s) out[alpha * ns + s] += c[s] * vol;
    }
    for (std::size_t p = 0; p < f.size(); ++p) comp[p] = f[p][alpha];
    const auto c = contract_separable(comp.data(), node_table(basis, 0, false), node_table(basis, 1, false),
                                      node_table(basis, 2, false));
    for (int s = 0; s < ns; ++s) out[alpha * ns + s] += c[s] * vol;
  }
  return out;
}

std::vector<double> boundary_momentum(const VelocityBasis& basis, const ScalarField& rho, const VectorField& u_b) {
  VectorField m(rho.grid);
  for (std::size_t p = 0; p < m.size(); ++p)
    for (int a = 0; a < 3; ++a) m[p][a] = rho[p] * u_b[p][a];
  return project(basis, m);
}

namespace serial {

namespace {

double node_mode(const VelocityBasis& b, int s, int i, int j, int k, int deriv_axis) {
  const int m = b.modes_per_axis();
  const int idx[3] = {s % m, (s / m) % m, s / (m * m)};
  const int c[3] = {i, j, k};
  double v = 1.0;
  for (int a = 0; a < 3; ++a) {
    const auto& t = a == deriv_axis ? b.node_slope(a) : b.node_value(a);
    v *= t[idx[a] * b.grid().n(a) + c[a]];
  }
  return v;
}

}  // namespace

Eigen::MatrixXd scalar_mass_matrix(const VelocityBasis& basis, const ScalarField& rho) {
  const Grid& g = basis.grid();
  const int ns = basis.scalar_size();
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(ns, ns);
  for (int a = 0; a < ns; ++a)
    for (int b = 0; b < ns; ++b) {
      double s = 0.0;
      for (int k = 0; k < g.n(2); ++k)
        for (int j = 0; j < g.n(1); ++j)
          for (int i = 0; i < g.n(0); ++i)
            s += rho(i, j, k) * node_mode(basis, a, i, j, k, -1) * node_mode(basis, b, i, j, k, -1);
      mass(a, b) = s * g.cell_volume();
    }
  return mass;
}

std::vector<double> pair_with_modes(const VelocityBasis& basis, const MatField& a, const VectorField& f) {
  const Grid& g = basis.grid();
  const int ns = basis.scalar_size();
  std::vector<double> out(basis.size(), 0.0);
  for (int alpha = 0; alpha < 3; ++alpha)
    for (int s = 0; s < ns; ++s) {
      double sum = 0.0;
      for (int k = 0; k < g.n(2); ++k)
        for (int j = 0; j < g.n(1); ++j)
          for (int i = 0; i < g.n(0); ++i) {
            double local = f(i, j, k)[alpha] * node_mode(basis, s, i, j, k, -1);
            for (int beta = 0; beta < 3; ++beta) local += a(i, j, k)(alpha, beta) * node_mode(basis, s, i, j, k, beta);
            sum += local;
          }
      out[alpha * ns + s] = sum * g.cell_volume();
    }
  return out;
}

VectorField synthesize(const VelocityBasis& basis, const std::vector<double>& v, const VectorExpr& u_b) {
  const Grid& g = basis.grid();
  const int ns = basis.scalar_size();
  VectorField u(g);
  for (int k = 0; k < g.n(2); ++k)
    for (int j = 0; j < g.n(1); ++j)
      for (int i = 0; i < g.n(0); ++i) {
        Vec3 val = u_b.value(g.node(i, j, k));
        for (int alpha = 0; alpha < 3; ++alpha)
          for (int s = 0; s < ns; ++s) val[alpha] += v[alpha * ns + s] * node_mode(basis, s, i, j, k, -1);
        u(i, j, k) = val;
      }
  return u;
}

}  // namespace serial

}  // namespace anematic
