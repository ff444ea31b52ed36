#include "ns_reference.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nsref {

using anematic::Vec3;

Reference::Reference(const anematic::Scenario& s)
    : s_(s), u_b_(anematic::make_vector(s.boundary_u, s.length)), rho_b_(anematic::make_scalar(s.boundary_rho, s.length)) {
  if (s.rheology_kind != "newtonian" || s.pressure_kind != "isentropic")
    throw std::invalid_argument("reference: newtonian isentropic scenarios only");
  for (int a = 0; a < 3; ++a) {
    n_[a] = s.cells[a];
    len_[a] = s.length[a];
    h_[a] = len_[a] / n_[a];
  }
  m_ = s.modes;
  ns_ = m_ * m_ * m_;
  a_ = s.pressure_a;
  gamma_ = s.pressure_gamma;
  mu_ = s.mu;
  lambda_ = s.lambda;
}

void Reference::set_state(const std::vector<double>& rho, const std::vector<double>& v) {
  rho_ = rho;
  v_ = v;
  v1_.clear();
  v2_.clear();
}

double Reference::mode_1d(int axis, int k, double x) const {
  return std::sqrt(2.0 / len_[axis]) * std::sin((k + 1) * std::numbers::pi * x / len_[axis]);
}

double Reference::slope_1d(int axis, int k, double x) const {
  const double w = (k + 1) * std::numbers::pi / len_[axis];
  return std::sqrt(2.0 / len_[axis]) * w * std::cos(w * x);
}

std::vector<double> Reference::continuity(const std::vector<double>& guess) const {
  const std::size_t size = std::size_t(n_[0]) * n_[1] * n_[2];
  const double dt = s_.dt, eps = s_.epsilon;

  // Normal velocity on the face between cell c-1 and c along `axis` (c = 0 and c = n are walls).
  auto face_u = [&](int axis, int i, int j, int k) {
    const int c[3] = {i, j, k};
    Vec3 x{(i + 0.5) * h_[0], (j + 0.5) * h_[1], (k + 0.5) * h_[2]};
    x[axis] = c[axis] * h_[axis];
    double u = u_b_.value(x)[axis];
    if (c[axis] == 0 || c[axis] == n_[axis]) return u;
    for (int s = 0; s < ns_; ++s) {
      const int idx[3] = {s % m_, (s / m_) % m_, s / (m_ * m_)};
      u += guess[axis * ns_ + s] * mode_1d(0, idx[0], x[0]) * mode_1d(1, idx[1], x[1]) * mode_1d(2, idx[2], x[2]);
    }
    return u;
  };

  std::vector<double> rhs(size);
  for (int k = 0; k < n_[2]; ++k)
    for (int j = 0; j < n_[1]; ++j)
      for (int i = 0; i < n_[0]; ++i) {
        const double r = rho_[at(i, j, k)];
        double div = 0.0;
        for (int a = 0; a < 3; ++a) {
          int lo[3] = {i, j, k}, hi[3] = {i, j, k};
          --lo[a];
          ++hi[a];
          const double ul = face_u(a, i, j, k);
          const double uh = face_u(a, hi[0], hi[1], hi[2]);
          const double rl = lo[a] < 0 ? r : rho_[at(lo[0], lo[1], lo[2])];
          const double rh = hi[a] >= n_[a] ? r : rho_[at(hi[0], hi[1], hi[2])];
          div += ((uh >= 0.0 ? uh * r : uh * rh) - (ul >= 0.0 ? ul * rl : ul * r)) / h_[a];
        }
        rhs[at(i, j, k)] = r - dt * div;
      }

  // (1 - dt eps Lap) rho with zero-flux walls, plus the Robin coupling to rho_B on inflow faces.
  std::vector<Eigen::Triplet<double>> entries;
  std::vector<double> diag(size, 1.0);
  for (int k = 0; k < n_[2]; ++k)
    for (int j = 0; j < n_[1]; ++j)
      for (int i = 0; i < n_[0]; ++i) {
        const std::size_t p = at(i, j, k);
        for (int a = 0; a < 3; ++a) {
          const double coupling = dt * eps / (h_[a] * h_[a]);
          int c[3] = {i, j, k};
          for (int side = -1; side <= 1; side += 2) {
            c[a] += side;
            if (c[a] >= 0 && c[a] < n_[a]) {
              diag[p] += coupling;
              entries.emplace_back(p, at(c[0], c[1], c[2]), -coupling);
            } else {
              int f[3] = {i, j, k};
              f[a] = side > 0 ? n_[a] : 0;
              Vec3 x{(i + 0.5) * h_[0], (j + 0.5) * h_[1], (k + 0.5) * h_[2]};
              x[a] = f[a] * h_[a];
              const double un = side * u_b_.value(x)[a];
              if (un < 0.0) {
                const double beta = dt * (-un) / h_[a];
                diag[p] += beta;
                rhs[p] += beta * rho_b_.value(x);
              }
            }
            c[a] -= side;
          }
        }
      }
  for (std::size_t p = 0; p < size; ++p) entries.emplace_back(p, p, diag[p]);
  Eigen::SparseMatrix<double> a(size, size);
  a.setFromTriplets(entries.begin(), entries.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
  const Eigen::VectorXd x = solver.solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), size));
  return std::vector<double>(x.data(), x.data() + size);
}

std::vector<double> Reference::momentum(const std::vector<double>& guess, const std::vector<double>& rho_new) const {
  const double vol = h_[0] * h_[1] * h_[2];
  const int nv = 3 * ns_;
  Eigen::MatrixXd m_old = Eigen::MatrixXd::Zero(ns_, ns_), m_new = Eigen::MatrixXd::Zero(ns_, ns_);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nv), b_old = Eigen::VectorXd::Zero(nv), b_new = Eigen::VectorXd::Zero(nv);

  auto rho_at = [&](const std::vector<double>& r, int i, int j, int k, int a, int step) {
    int c[3] = {i, j, k};
    c[a] += step;
    if (c[a] < 0 || c[a] >= n_[a]) c[a] -= step;
    return r[at(c[0], c[1], c[2])];
  };

  std::vector<double> phi(ns_);
  std::vector<Vec3> dphi(ns_);
  for (int k = 0; k < n_[2]; ++k)
    for (int j = 0; j < n_[1]; ++j)
      for (int i = 0; i < n_[0]; ++i) {
        const Vec3 x{(i + 0.5) * h_[0], (j + 0.5) * h_[1], (k + 0.5) * h_[2]};
        for (int s = 0; s < ns_; ++s) {
          const int idx[3] = {s % m_, (s / m_) % m_, s / (m_ * m_)};
          double f[3], df[3];
          for (int a = 0; a < 3; ++a) {
            f[a] = mode_1d(a, idx[a], x[a]);
            df[a] = slope_1d(a, idx[a], x[a]);
          }
          phi[s] = f[0] * f[1] * f[2];
          dphi[s] = {df[0] * f[1] * f[2], f[0] * df[1] * f[2], f[0] * f[1] * df[2]};
        }

        // Velocity and its gradient g(a, b) = d_b u_a.
        const Vec3 ub = u_b_.value(x);
        const anematic::Mat3 jb = u_b_.jacobian(x);
        double u[3], g[3][3];
        for (int a = 0; a < 3; ++a) {
          u[a] = ub[a];
          for (int b = 0; b < 3; ++b) g[a][b] = jb(a, b);
          for (int s = 0; s < ns_; ++s) {
            u[a] += guess[a * ns_ + s] * phi[s];
            for (int b = 0; b < 3; ++b) g[a][b] += guess[a * ns_ + s] * dphi[s][b];
          }
        }

        const std::size_t p = at(i, j, k);
        const double r = rho_new[p];
        const double pressure = a_ * std::pow(r, gamma_);
        const double div = g[0][0] + g[1][1] + g[2][2];
        double flux[3][3];
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) {
            const double strain = 0.5 * (g[a][b] + g[b][a]);
            flux[a][b] = r * u[a] * u[b] - mu_ * strain - (a == b ? lambda_ * div - pressure : 0.0);
          }
        double grad_rho[3];
        for (int a = 0; a < 3; ++a)
          grad_rho[a] = (rho_at(rho_new, i, j, k, a, 1) - rho_at(rho_new, i, j, k, a, -1)) / (2.0 * h_[a]);
        double force[3];
        for (int a = 0; a < 3; ++a)
          force[a] = -s_.epsilon * (g[a][0] * grad_rho[0] + g[a][1] * grad_rho[1] + g[a][2] * grad_rho[2]);

        for (int s = 0; s < ns_; ++s) {
          for (int a = 0; a < 3; ++a) {
            double w = force[a] * phi[s];
            for (int b = 0; b < 3; ++b) w += flux[a][b] * dphi[s][b];
            rhs[a * ns_ + s] += w * vol;
            b_old[a * ns_ + s] += rho_[p] * ub[a] * phi[s] * vol;
            b_new[a * ns_ + s] += r * ub[a] * phi[s] * vol;
          }
          for (int t = 0; t < ns_; ++t) {
            m_old(s, t) += rho_[p] * phi[s] * phi[t] * vol;
            m_new(s, t) += r * phi[s] * phi[t] * vol;
          }
        }
      }

  std::vector<double> out(nv);
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(m_new);
  for (int a = 0; a < 3; ++a) {
    const Eigen::VectorXd old = Eigen::Map<const Eigen::VectorXd>(v_.data() + a * ns_, ns_);
    Eigen::VectorXd r = m_old * old + b_old.segment(a * ns_, ns_) - b_new.segment(a * ns_, ns_) +
                        s_.dt * rhs.segment(a * ns_, ns_);
    const Eigen::VectorXd sol = ldlt.solve(r);
    for (int s = 0; s < ns_; ++s) out[a * ns_ + s] = sol[s];
  }
  return out;
}

Reference::Image Reference::image(const std::vector<double>& guess) const {
  Image im;
  im.rho = continuity(guess);
  im.v = momentum(guess, im.rho);
  return im;
}

void Reference::step() {
  std::vector<double> guess = v_;
  if (s_.picard_extrapolate && v2_.size() == v_.size()) {
    for (std::size_t i = 0; i < guess.size(); ++i) guess[i] = 3.0 * v_[i] - 3.0 * v1_[i] + v2_[i];
  } else if (s_.picard_extrapolate && v1_.size() == v_.size()) {
    for (std::size_t i = 0; i < guess.size(); ++i) guess[i] = 2.0 * v_[i] - v1_[i];
  }
  for (int it = 1; it <= s_.picard_max_iterations; ++it) {
    Image im = image(guess);
    double d2 = 0.0;
    for (std::size_t i = 0; i < guess.size(); ++i) d2 += (im.v[i] - guess[i]) * (im.v[i] - guess[i]);
    if (std::sqrt(d2) <= s_.picard_tolerance) {
      iterations_ = it;
      v2_ = std::move(v1_);
      v1_ = v_;
      v_ = std::move(im.v);
      rho_ = std::move(im.rho);
      return;
    }
    for (std::size_t i = 0; i < guess.size(); ++i)
      guess[i] = s_.picard_damping * im.v[i] + (1.0 - s_.picard_damping) * guess[i];
  }
  throw std::runtime_error("reference: fixed-point iteration did not converge");
}

}  // namespace nsref
