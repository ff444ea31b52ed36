#include "anematic/momentum.hpp"

#include <cmath>
#include <sstream>

namespace anematic {

double elastic_density(const QTensor& q, const QTensor& dq_x, const QTensor& dq_y, const QTensor& dq_z, double c_star) {
  const double grad2 = contract(dq_x, dq_x) + contract(dq_y, dq_y) + contract(dq_z, dq_z);
  const double tr2 = contract(q, q);
  return 0.5 * grad2 + 0.5 * tr2 + 0.25 * c_star * tr2 * tr2;
}

StressBundle assemble_stresses(const MomentumConfig& cfg, const RheologyLaw& law, const PressureLaw& pressure,
                               const FlowFields& f, const QBC& q_b) {
  const Grid& g = f.rho.grid;
  require_same_grid(f.rho, f.grad_u, "assemble_stresses");
  require_same_grid(f.rho, f.q, "assemble_stresses");
  require_same_grid(f.rho, f.c, "assemble_stresses");
  const auto dq = gradient(f.q, q_b);
  const QField lap = laplacian(f.q, q_b);
  const double active_scale = cfg.flip_active_sign ? -cfg.sigma_star : cfg.sigma_star;

  StressBundle s{SymField(g), SymField(g), SkewField(g), SymField(g), ScalarField(g)};
  const long n = static_cast<long>(g.size());
#pragma omp parallel for schedule(static)
  for (long p = 0; p < n; ++p) {
    s.viscous[p] = subgradient(law, SymTensor::sym_part(f.grad_u[p]));
    s.pressure[p] = pressure.pressure(f.rho[p]);

    const QTensor d[3] = {dq[0][p], dq[1][p], dq[2][p]};
    SymTensor tau = SymTensor::scaled_identity(elastic_density(f.q[p], d[0], d[1], d[2], cfg.bulk.c_star));
    tau.xx -= contract(d[0], d[0]);
    tau.xy -= contract(d[0], d[1]);
    tau.xz -= contract(d[0], d[2]);
    tau.yy -= contract(d[1], d[1]);
    tau.yz -= contract(d[1], d[2]);
    tau.zz -= contract(d[2], d[2]);
    s.elastic[p] = tau;

    const Mat3 qm = f.q[p].matrix(), lm = lap[p].matrix();
    s.rotational[p] = SkewTensor::skew_part(qm * lm - lm * qm);
    s.active[p] = (active_scale * f.c[p] * f.c[p]) * f.q[p].sym();
  }
  return s;
}

MatField momentum_flux(const StressBundle& s, const FlowFields& f) {
  const Grid& g = f.rho.grid;
  MatField a(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const Vec3& u = f.u[p];
    Mat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = f.rho[p] * u[i] * u[j];
    for (int i = 0; i < 3; ++i) m(i, i) += s.pressure[p];
    m -= s.viscous[p].matrix();
    m -= s.elastic[p].matrix();
    m -= s.rotational[p].matrix();
    m -= s.active[p].matrix();
    a[p] = m;
  }
  return a;
}

VectorField coupling_force(double epsilon, const FlowFields& f) {
  const VectorField grad_rho = gradient(f.rho, ScalarBC::neumann());
  VectorField out(f.rho.grid);
  for (std::size_t p = 0; p < out.size(); ++p) {
    const Vec3 v = f.grad_u[p] * grad_rho[p];
    out[p] = {-epsilon * v[0], -epsilon * v[1], -epsilon * v[2]};
  }
  return out;
}

std::vector<double> galerkin_rhs(const VelocityBasis& basis, const StressBundle& s, const FlowFields& f,
                                 double epsilon) {
  return pair_with_modes(basis, momentum_flux(s, f), coupling_force(epsilon, f));
}

double condition_number(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  if (ev.minCoeff() <= 0.0) return INFINITY;
  return ev.maxCoeff() / ev.minCoeff();
}

std::vector<double> step_momentum(const MomentumConfig& cfg, const VelocityBasis& basis, const VectorField& u_b,
                                  const ScalarField& rho_old, const std::vector<double>& v_old,
                                  const ScalarField& rho_new, const std::vector<double>& rhs) {
  const int ns = basis.scalar_size();
  if (static_cast<int>(v_old.size()) != basis.size() || static_cast<int>(rhs.size()) != basis.size())
    throw ShapeError("step_momentum: coefficient vector size mismatch");
  const Eigen::MatrixXd m_old = scalar_mass_matrix(basis, rho_old);
  const Eigen::MatrixXd m_new = scalar_mass_matrix(basis, rho_new);
  const double cond = condition_number(m_new);
  if (!(cond <= cfg.max_condition)) {
    std::ostringstream msg;
    msg << "momentum mass matrix condition number " << cond << " exceeds " << cfg.max_condition;
    throw IllConditionedError(msg.str());
  }
  const auto b_old = boundary_momentum(basis, rho_old, u_b);
  const auto b_new = boundary_momentum(basis, rho_new, u_b);
  Eigen::LLT<Eigen::MatrixXd> llt(m_new);
  if (llt.info() != Eigen::Success) throw IllConditionedError("momentum mass matrix is not positive definite");

  std::vector<double> v(basis.size());
  for (int alpha = 0; alpha < 3; ++alpha) {
    Eigen::VectorXd old = Eigen::Map<const Eigen::VectorXd>(v_old.data() + alpha * ns, ns);
    Eigen::VectorXd r = m_old * old;
    for (int s = 0; s < ns; ++s) {
      const int i = alpha * ns + s;
      r[s] += b_old[i] - b_new[i] + cfg.dt * rhs[i];
    }
    const Eigen::VectorXd x = llt.solve(r);
    for (int s = 0; s < ns; ++s) v[alpha * ns + s] = x[s];
  }
  return v;
}

}  // namespace anematic
