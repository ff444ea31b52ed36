#include "anematic/energy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace anematic {

namespace {

constexpr double pi = std::numbers::pi;

std::size_t stride(const Grid& g, int axis) {
  if (axis == 0) return 1;
  if (axis == 1) return static_cast<std::size_t>(g.n(0));
  return static_cast<std::size_t>(g.n(0)) * g.n(1);
}

// Volume integral of term(p, p + stride, axis) over the interior faces, each face attached to its low cell.
template <class Term>
double interior_face_integral(const Grid& g, Term&& term) {
  return volume_integral(g, [&](std::size_t p) {
    const auto c = g.coords(p);
    double s = 0.0;
    for (int a = 0; a < 3; ++a)
      if (c[a] + 1 < g.n(a)) s += term(p, p + stride(g, a), a);
    return s;
  });
}

double dirichlet_gradient_squared(const ScalarField& f) {
  const Grid& g = f.grid;
  return interior_face_integral(g, [&](std::size_t p, std::size_t q, int a) {
    const double d = (f[q] - f[p]) / g.h(a);
    return d * d;
  });
}

double tr_q2(const QTensor& q) { return contract(q, q); }

Mat3 outer(const Vec3& a, const Vec3& b) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = a[i] * b[j];
  return m;
}

}  // namespace

EnergyParts energy_parts(const Model& model, const State& state) {
  const Grid& g = model.grid;
  const VectorField w = synthesize(model.basis, state.v, VectorExpr::zero());
  const double cs = model.nematic.bulk.c_star;
  EnergyParts e;
  e.kinetic = volume_integral(g, [&](std::size_t p) { return 0.5 * state.rho[p] * dot(w[p], w[p]); });
  e.pressure = volume_integral(g, [&](std::size_t p) { return model.pressure.potential(state.rho[p]); });
  e.concentration = volume_integral(g, [&](std::size_t p) { return 0.5 * state.c[p] * state.c[p]; });
  e.nematic = volume_integral(g, [&](std::size_t p) {
                const double t = tr_q2(state.q[p]);
                return 0.5 * t + 0.25 * cs * t * t;
              }) +
              elastic_energy(state.q, model.q_b);
  return e;
}

// ---- ledger columns ----

namespace {

struct Column {
  const char* name;
  double (*get)(const LedgerRow&);
};

#define ANEMATIC_COL(label, expr) Column{label, [](const LedgerRow& r) -> double { return expr; }}

const std::vector<Column>& columns() {
  static const std::vector<Column> cols = {
      ANEMATIC_COL("step", static_cast<double>(r.step)),
      ANEMATIC_COL("time", r.time),
      ANEMATIC_COL("energy", r.energy.total()),
      ANEMATIC_COL("e_kin", r.energy.kinetic),
      ANEMATIC_COL("e_press", r.energy.pressure),
      ANEMATIC_COL("e_conc", r.energy.concentration),
      ANEMATIC_COL("e_q", r.energy.nematic),
      ANEMATIC_COL("energy_rate", r.energy_rate),
      ANEMATIC_COL("d_visc", r.visc_dissipation),
      ANEMATIC_COL("d_visc_fenchel", r.visc_fenchel),
      ANEMATIC_COL("visc_power", r.visc_power),
      ANEMATIC_COL("d_conc", r.conc_dissipation),
      ANEMATIC_COL("d_relax", r.relax_dissipation),
      ANEMATIC_COL("d_six", r.sextic_dissipation),
      ANEMATIC_COL("flux_out_pressure", r.outflow_pressure),
      ANEMATIC_COL("eps_pressure", r.eps_pressure),
      ANEMATIC_COL("flux_in_gap", r.inflow_gap),
      ANEMATIC_COL("min_gap", r.min_gap),
      ANEMATIC_COL("rhs_groenwall", r.groenwall),
      ANEMATIC_COL("rhs_q_boundary", r.q_boundary),
      ANEMATIC_COL("rhs_in_pressure", r.inflow_pressure),
      ANEMATIC_COL("rhs_q_normal", r.q_normal),
      ANEMATIC_COL("rhs_constant", r.constant),
      ANEMATIC_COL("lhs", r.lhs),
      ANEMATIC_COL("rhs", r.rhs),
      ANEMATIC_COL("residual", r.residual),
      ANEMATIC_COL("tolerance", r.tolerance),
      ANEMATIC_COL("cumulative_residual", r.cumulative_residual),
      ANEMATIC_COL("w_convective", r.work_convective),
      ANEMATIC_COL("w_pressure", r.work_pressure),
      ANEMATIC_COL("w_viscous", r.work_viscous),
      ANEMATIC_COL("w_elastic", r.work_elastic),
      ANEMATIC_COL("w_rotational", r.work_rotational),
      ANEMATIC_COL("w_active", r.work_active),
      ANEMATIC_COL("w_coupling", r.work_coupling),
      ANEMATIC_COL("power_assembled", r.power_assembled),
      ANEMATIC_COL("power_residual", r.power_residual),
      ANEMATIC_COL("mass", r.mass),
      ANEMATIC_COL("mass_defect", r.mass_defect),
      ANEMATIC_COL("rho_min", r.rho_min),
      ANEMATIC_COL("rho_max", r.rho_max),
      ANEMATIC_COL("rho_lower", r.rho_lower),
      ANEMATIC_COL("rho_upper", r.rho_upper),
      ANEMATIC_COL("c_min", r.c_min),
      ANEMATIC_COL("c_max", r.c_max),
      ANEMATIC_COL("q_trace", r.q_trace),
      ANEMATIC_COL("q_asymmetry", r.q_asymmetry),
      ANEMATIC_COL("renorm_eps", r.renorm_eps_term),
      ANEMATIC_COL("picard_iterations", static_cast<double>(r.picard_iterations)),
      ANEMATIC_COL("picard_increment", r.picard_increment),
  };
  return cols;
}

#undef ANEMATIC_COL

void append_number(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace

const std::vector<std::string>& ledger_columns() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& c : columns()) n.emplace_back(c.name);
    return n;
  }();
  return names;
}

std::vector<double> ledger_values(const LedgerRow& row) {
  std::vector<double> out;
  out.reserve(columns().size());
  for (const auto& c : columns()) out.push_back(c.get(row));
  return out;
}

std::string ledger_header() {
  std::string s;
  for (const auto& n : ledger_columns()) {
    if (!s.empty()) s += ',';
    s += n;
  }
  return s;
}

std::string ledger_line(const LedgerRow& row) {
  std::string s;
  bool first = true;
  for (double v : ledger_values(row)) {
    if (!first) s += ',';
    first = false;
    append_number(s, v);
  }
  return s;
}

// ---- test catalogs ----

std::vector<ScalarTest> continuity_tests(const Grid& grid) {
  const auto L = grid.extent();
  const double kx = pi / L[0], ky = pi / L[1], kz = pi / L[2];
  auto zero_rate = [](double, const Vec3&) { return 0.0; };
  std::vector<ScalarTest> t;
  t.push_back({"one", [](double, const Vec3&) { return 1.0; }, zero_rate,
               [](double, const Vec3&) { return Vec3{0, 0, 0}; }});
  t.push_back({"x", [](double, const Vec3& x) { return x[0]; }, zero_rate,
               [](double, const Vec3&) { return Vec3{1, 0, 0}; }});
  t.push_back({"y_growing", [](double s, const Vec3& x) { return x[1] * (1 + s); },
               [](double, const Vec3& x) { return x[1]; },
               [](double s, const Vec3&) { return Vec3{0, 1 + s, 0}; }});
  t.push_back({"cos_xy", [=](double, const Vec3& x) { return std::cos(kx * x[0]) * std::cos(ky * x[1]); }, zero_rate,
               [=](double, const Vec3& x) {
                 return Vec3{-kx * std::sin(kx * x[0]) * std::cos(ky * x[1]),
                             -ky * std::cos(kx * x[0]) * std::sin(ky * x[1]), 0};
               }});
  t.push_back({"z_squared", [](double, const Vec3& x) { return x[2] * x[2]; }, zero_rate,
               [](double, const Vec3& x) { return Vec3{0, 0, 2 * x[2]}; }});
  t.push_back({"cos_z_growing", [=](double s, const Vec3& x) { return (1 + s) * std::cos(kz * x[2]); },
               [=](double, const Vec3& x) { return std::cos(kz * x[2]); },
               [=](double s, const Vec3& x) { return Vec3{0, 0, -(1 + s) * kz * std::sin(kz * x[2])}; }});
  return t;
}

std::vector<ScalarTest> concentration_tests(const Grid& grid) {
  const auto L = grid.extent();
  const double kx = pi / L[0], ky = pi / L[1], kz = pi / L[2];
  auto zero_rate = [](double, const Vec3&) { return 0.0; };
  std::vector<ScalarTest> t;
  t.push_back({"one", [](double, const Vec3&) { return 1.0; }, zero_rate,
               [](double, const Vec3&) { return Vec3{0, 0, 0}; }});
  t.push_back({"x", [](double, const Vec3& x) { return x[0]; }, zero_rate,
               [](double, const Vec3&) { return Vec3{1, 0, 0}; }});
  t.push_back({"cos_x", [=](double, const Vec3& x) { return std::cos(kx * x[0]); }, zero_rate,
               [=](double, const Vec3& x) { return Vec3{-kx * std::sin(kx * x[0]), 0, 0}; }});
  t.push_back({"yz", [](double, const Vec3& x) { return x[1] * x[2]; }, zero_rate,
               [](double, const Vec3& x) { return Vec3{0, x[2], x[1]}; }});
  t.push_back({"cos_yz_growing",
               [=](double s, const Vec3& x) { return (1 + s) * std::cos(ky * x[1]) * std::cos(kz * x[2]); },
               [=](double, const Vec3& x) { return std::cos(ky * x[1]) * std::cos(kz * x[2]); },
               [=](double s, const Vec3& x) {
                 return Vec3{0, -(1 + s) * ky * std::sin(ky * x[1]) * std::cos(kz * x[2]),
                             -(1 + s) * kz * std::cos(ky * x[1]) * std::sin(kz * x[2])};
               }});
  t.push_back({"x_squared", [](double, const Vec3& x) { return x[0] * x[0]; }, zero_rate,
               [](double, const Vec3& x) { return Vec3{2 * x[0], 0, 0}; }});
  return t;
}

std::vector<ModeTest> momentum_tests(const VelocityBasis& basis) {
  const int m = basis.modes_per_axis();
  // Modes named by component and wavenumbers so the catalog is the same for every basis size.
  auto index = [&](int alpha, int kx, int ky, int kz) {
    return alpha * m * m * m + ((kz - 1) * m + (ky - 1)) * m + (kx - 1);
  };
  auto steady = [](double) { return 1.0; };
  auto steady_rate = [](double) { return 0.0; };
  auto growing = [](double s) { return 1.0 + s; };
  auto growing_rate = [](double) { return 1.0; };
  std::vector<ModeTest> t;
  t.push_back({"x_111", index(0, 1, 1, 1), steady, steady_rate});
  t.push_back({"y_111", index(1, 1, 1, 1), steady, steady_rate});
  t.push_back({"z_111", index(2, 1, 1, 1), steady, steady_rate});
  if (m >= 2) {
    t.push_back({"x_211_growing", index(0, 2, 1, 1), growing, growing_rate});
    t.push_back({"y_112_growing", index(1, 1, 1, 2), growing, growing_rate});
    t.push_back({"z_112_growing", index(2, 1, 1, 2), growing, growing_rate});
  } else {
    t.push_back({"x_111_growing", index(0, 1, 1, 1), growing, growing_rate});
    t.push_back({"y_111_growing", index(1, 1, 1, 1), growing, growing_rate});
    t.push_back({"z_111_growing", index(2, 1, 1, 1), growing, growing_rate});
  }
  return t;
}

std::vector<TensorTest> nematic_tests(const Grid& grid) {
  const auto L = grid.extent();
  auto bump = [L](const Vec3& x) {
    return std::sin(pi * x[0] / L[0]) * std::sin(pi * x[1] / L[1]) * std::sin(pi * x[2] / L[2]);
  };
  auto steady = [bump](double, const Vec3& x) { return bump(x); };
  auto steady_rate = [](double, const Vec3&) { return 0.0; };
  auto growing = [bump](double s, const Vec3& x) { return (1 + s) * bump(x); };
  auto growing_rate = [bump](double, const Vec3& x) { return bump(x); };
  auto sym = [](int i, int j) {
    Mat3 m;
    m(i, j) = 1.0;
    m(j, i) = 1.0;
    if (i == j) m(i, i) = 1.0;
    return m;
  };
  Mat3 split = Mat3::diag(1.0, -1.0, 0.0);
  std::vector<TensorTest> t;
  t.push_back({"xx", steady, steady_rate, sym(0, 0)});
  t.push_back({"xy", steady, steady_rate, sym(0, 1)});
  t.push_back({"xz_growing", growing, growing_rate, sym(0, 2)});
  t.push_back({"yy_growing", growing, growing_rate, sym(1, 1)});
  t.push_back({"yz", steady, steady_rate, sym(1, 2)});
  t.push_back({"xx_minus_yy_growing", growing, growing_rate, split});
  return t;
}

// ---- weak residuals ----

WeakResiduals::WeakResiduals(const Model& model)
    : cont_tests_(continuity_tests(model.grid)),
      conc_tests_(concentration_tests(model.grid)),
      mom_tests_(momentum_tests(model.basis)),
      nem_tests_(nematic_tests(model.grid)),
      cont_(cont_tests_.size()),
      mom_(mom_tests_.size()),
      conc_(conc_tests_.size()),
      nem_(nem_tests_.size()) {}

void WeakResiduals::push(Track& t, double pairing, double source, double dt, bool first) {
  if (first) {
    t.initial = pairing;
    t.integral = 0.0;
  } else {
    t.integral += 0.5 * dt * (t.last_source + source);
  }
  t.current = pairing;
  t.last_source = source;
}

void WeakResiduals::sample(const Model& model, const State& state) {
  const Grid& g = model.grid;
  const double t = state.time;
  const bool first = !started_;
  const double dt = first ? 0.0 : t - last_time_;
  const double eps = model.continuity.epsilon;
  const double d0 = model.nematic.d0;
  const double mobility = model.nematic.gamma;

  const FlowFields f = velocity_fields(model, state.v, state);
  const VectorField grad_rho = gradient(state.rho, ScalarBC::neumann());
  const VectorField grad_c = gradient(state.c, ScalarBC::neumann());
  const auto grad_q = gradient(state.q, model.q_b);
  const QField h_field = molecular_field(model.nematic, state.q, state.c, model.q_b);

  MomentumConfig mcfg = model.momentum;
  mcfg.flip_active_sign = false;
  const StressBundle s = assemble_stresses(mcfg, model.law, model.pressure, f, model.q_b);

  std::vector<Vec3> nodes(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto c = g.coords(p);
    nodes[p] = g.node(c[0], c[1], c[2]);
  }

  // Continuity with the artificial viscosity and the inflow Robin flux.
  for (std::size_t n = 0; n < cont_tests_.size(); ++n) {
    const auto& test = cont_tests_[n];
    const double pairing = volume_integral(g, [&](std::size_t p) { return state.rho[p] * test.value(t, nodes[p]); });
    double source = volume_integral(g, [&](std::size_t p) {
      const Vec3 gp = test.grad(t, nodes[p]);
      return state.rho[p] * test.rate(t, nodes[p]) + state.rho[p] * dot(f.u[p], gp) - eps * dot(grad_rho[p], gp);
    });
    for (std::size_t k = 0; k < model.boundary.faces.size(); ++k) {
      const auto& face = model.boundary.faces[k];
      const double phi = test.value(t, face.centroid);
      const double rc = state.rho[face.cell];
      double flux = -phi * rc * face.normal_velocity;
      if (face.inflow) flux += phi * std::abs(face.normal_velocity) * (model.rho_b[k] - rc);
      source += flux * face.area;
    }
    push(cont_[n], pairing, source, dt, first);
  }

  // Renormalized continuity with B(r) = r^2.
  {
    const double pairing = volume_integral(g, [&](std::size_t p) { return state.rho[p] * state.rho[p]; });
    double source = volume_integral(g, [&](std::size_t p) {
      const double r = state.rho[p];
      const double div_flux = dot(f.u[p], grad_rho[p]) + r * f.grad_u[p].trace();
      return -2.0 * r * div_flux - 2.0 * eps * dot(grad_rho[p], grad_rho[p]);
    });
    for (std::size_t k = 0; k < model.boundary.faces.size(); ++k) {
      const auto& face = model.boundary.faces[k];
      if (!face.inflow) continue;
      const double rc = state.rho[face.cell];
      source += 2.0 * rc * std::abs(face.normal_velocity) * (model.rho_b[k] - rc) * face.area;
    }
    push(renorm_, pairing, source, dt, first);
  }

  // Momentum against Galerkin modes.
  const int ns = model.basis.scalar_size();
  for (std::size_t n = 0; n < mom_tests_.size(); ++n) {
    const auto& test = mom_tests_[n];
    const int alpha = test.mode / ns, sm = test.mode % ns;
    const double chi = test.value(t), chi_rate = test.rate(t);
    const double pairing = chi * volume_integral(g, [&](std::size_t p) {
                             return state.rho[p] * f.u[p][alpha] * model.basis.scalar_mode(sm, nodes[p]);
                           });
    const double source = volume_integral(g, [&](std::size_t p) {
      const double w = model.basis.scalar_mode(sm, nodes[p]);
      const Vec3 dw = model.basis.scalar_mode_gradient(sm, nodes[p]);
      const Vec3& u = f.u[p];
      const double r = state.rho[p];
      // A : grad(w e_alpha) = sum_b A(alpha, b) dw_b
      Mat3 a = outer(u, u);
      a *= r;
      for (int i = 0; i < 3; ++i) a(i, i) += s.pressure[p];
      a -= s.viscous[p].matrix();
      a -= s.elastic[p].matrix();
      a -= s.rotational[p].matrix();
      a -= s.active[p].matrix();
      const double flux = a(alpha, 0) * dw[0] + a(alpha, 1) * dw[1] + a(alpha, 2) * dw[2];
      const Vec3 coupling = f.grad_u[p] * grad_rho[p];
      return r * u[alpha] * w * chi_rate + chi * (flux - eps * coupling[alpha] * w);
    });
    push(mom_[n], pairing, source, dt, first);
  }

  // Concentration.
  for (std::size_t n = 0; n < conc_tests_.size(); ++n) {
    const auto& test = conc_tests_[n];
    const double pairing = volume_integral(g, [&](std::size_t p) { return state.c[p] * test.value(t, nodes[p]); });
    const double source = volume_integral(g, [&](std::size_t p) {
      const double psi = test.value(t, nodes[p]);
      return state.c[p] * test.rate(t, nodes[p]) - dot(f.u[p], grad_c[p]) * psi -
             d0 * dot(grad_c[p], test.grad(t, nodes[p]));
    });
    push(conc_[n], pairing, source, dt, first);
  }

  // Q tensor.
  for (std::size_t n = 0; n < nem_tests_.size(); ++n) {
    const auto& test = nem_tests_[n];
    const Mat3& b = test.direction;
    const double pairing =
        volume_integral(g, [&](std::size_t p) { return contract(state.q[p].matrix(), b) * test.value(t, nodes[p]); });
    const double source = volume_integral(g, [&](std::size_t p) {
      const double psi = test.value(t, nodes[p]);
      const Vec3& u = f.u[p];
      const QTensor adv = u[0] * grad_q[0][p] + u[1] * grad_q[1][p] + u[2] * grad_q[2][p];
      const QTensor rot = commutator(state.q[p], SkewTensor::skew_part(f.grad_u[p]));
      const QTensor drive = adv + rot - mobility * h_field[p];
      return contract(state.q[p].matrix(), b) * test.rate(t, nodes[p]) - contract(drive.matrix(), b) * psi;
    });
    push(nem_[n], pairing, source, dt, first);
  }

  started_ = true;
  last_time_ = t;
}

std::vector<double> WeakResiduals::residuals(const std::vector<Track>& tracks) {
  std::vector<double> r;
  r.reserve(tracks.size());
  for (const auto& t : tracks) r.push_back(t.current - t.initial - t.integral);
  return r;
}

std::vector<double> WeakResiduals::continuity() const { return residuals(cont_); }
std::vector<double> WeakResiduals::momentum() const { return residuals(mom_); }
std::vector<double> WeakResiduals::concentration() const { return residuals(conc_); }
std::vector<double> WeakResiduals::nematic() const { return residuals(nem_); }
double WeakResiduals::renormalized() const { return renorm_.current - renorm_.initial - renorm_.integral; }

double WeakResiduals::aggregate(const std::vector<double>& r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return std::sqrt(s);
}

std::vector<double> WeakResiduals::save() const {
  std::vector<double> out{started_ ? 1.0 : 0.0, last_time_};
  auto put = [&](const Track& t) {
    out.insert(out.end(), {t.initial, t.current, t.integral, t.last_source});
  };
  for (const auto* list : {&cont_, &mom_, &conc_, &nem_})
    for (const auto& t : *list) put(t);
  put(renorm_);
  return out;
}

void WeakResiduals::restore(const std::vector<double>& data) {
  const std::size_t tracks = cont_.size() + mom_.size() + conc_.size() + nem_.size() + 1;
  if (data.size() != 2 + 4 * tracks) throw ShapeError("weak residual checkpoint has the wrong length");
  started_ = data[0] != 0.0;
  last_time_ = data[1];
  std::size_t k = 2;
  auto get = [&](Track& t) {
    t.initial = data[k];
    t.current = data[k + 1];
    t.integral = data[k + 2];
    t.last_source = data[k + 3];
    k += 4;
  };
  for (auto* list : {&cont_, &mom_, &conc_, &nem_})
    for (auto& t : *list) get(t);
  get(renorm_);
}

// ---- energy monitor ----

double default_groenwall_constant(const Model& model, const State& initial) {
  const Grid& g = model.grid;
  double grad_ub = 0.0, ub = 0.0;
  auto probe = [&](const Vec3& x) {
    grad_ub = std::max(grad_ub, frobenius(model.u_b.jacobian(x)));
    ub = std::max(ub, norm(model.u_b.value(x)));
  };
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto c = g.coords(p);
    probe(g.node(c[0], c[1], c[2]));
  }
  for (const auto& f : model.boundary.faces) probe(f.centroid);
  double c0 = 0.0;
  for (double v : initial.c.data) c0 = std::max(c0, std::abs(v));
  double qb = 0.0;
  for (const auto& q : model.q_b.values) qb = std::max(qb, frobenius(q));
  const double gamma_eff = model.pressure.kind() == PressureLaw::Kind::isentropic ? model.pressure.gamma() : 2.0;
  const auto& nc = model.nematic;
  return 1.0 + grad_ub * (2.0 + 3.0 * (gamma_eff - 1.0)) + ub * grad_ub +
         std::abs(nc.sigma_star) * c0 * c0 + nc.gamma * (1.0 + nc.bulk.c_star) * (1.0 + qb * qb) + nc.d0;
}

namespace {

double u_b_sup(const Model& model) {
  double s = 0.0;
  for (const auto& f : model.boundary.faces) s = std::max(s, norm(model.u_b.value(f.centroid)));
  return s;
}

double total_mass(const ScalarField& rho) { return volume_integral(rho); }

}  // namespace

EnergyMonitor::EnergyMonitor(const Model& model, const State& initial, double groenwall_constant)
    : c_(groenwall_constant),
      e0_(energy_parts(model, initial).total()),
      mass0_(total_mass(initial.rho)),
      bounds_(initial.rho, model.boundary, model.rho_b, u_b_sup(model)) {
  if (!(c_ > 0.0)) throw ConfigError("groenwall constant must be positive");
}

double energy_tolerance(double e0, double dt, double h, double t) {
  return 1e-6 * (e0 + 1.0) + 10.0 * (dt + h * h) * t * (1.0 + e0);
}

LedgerRow EnergyMonitor::record(const Model& model, const State& before, const State& after,
                                const StepReport& report) {
  const Grid& g = model.grid;
  const double dt = after.time - before.time;
  const auto& nc = model.nematic;
  const double cs = nc.bulk.c_star;
  const double eps = model.continuity.epsilon;
  const PressureLaw& eos = model.pressure;

  LedgerRow row;
  row.step = after.step;
  row.time = after.time;
  row.energy = energy_parts(model, after);
  const double e_before = energy_parts(model, before).total();
  row.energy_rate = (row.energy.total() - e_before) / dt;

  const MatField grad_u = synthesize_gradient(model.basis, after.v, model.u_b);
  {
    const long n = static_cast<long>(g.size());
    std::vector<double> power(g.size()), fenchel(g.size());
#pragma omp parallel for schedule(static)
    for (long p = 0; p < n; ++p) {
      const SymTensor d = SymTensor::sym_part(grad_u[p]);
      const SymTensor s = subgradient(model.law, d);
      power[p] = contract(s, d);
      double fy;
      try {
        fy = potential(model.law, d) + conjugate(model.law, s);
      } catch (const RangeError&) {
        fy = std::numeric_limits<double>::quiet_NaN();
      }
      fenchel[p] = fy;
    }
    row.visc_power = volume_integral(g, [&](std::size_t p) { return power[p]; });
    row.visc_fenchel = volume_integral(g, [&](std::size_t p) { return fenchel[p]; });
    row.visc_dissipation = 0.25 * row.visc_power;
  }
  row.conc_dissipation = 0.5 * nc.d0 * dirichlet_gradient_squared(after.c);
  const QField lap = laplacian(after.q, model.q_b);
  row.relax_dissipation = 0.25 * nc.gamma * volume_integral(g, [&](std::size_t p) { return tr_q2(lap[p]); });
  row.sextic_dissipation = 0.5 * cs * cs * nc.gamma * volume_integral(g, [&](std::size_t p) {
                             const double t = tr_q2(after.q[p]);
                             return t * t * t;
                           });
  row.eps_pressure = eps * interior_face_integral(g, [&](std::size_t p, std::size_t q, int a) {
                       const double d = (after.rho[q] - after.rho[p]) / g.h(a);
                       if (d == 0.0) return 0.0;
                       return eos.potential_curvature(0.5 * (after.rho[p] + after.rho[q])) * d * d;
                     });

  row.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < model.boundary.faces.size(); ++k) {
    const auto& face = model.boundary.faces[k];
    const double un = face.normal_velocity;
    const double r = after.rho[face.cell];
    const QTensor& qb = model.q_b.values[k];
    const double qb2 = tr_q2(qb);
    if (face.inflow) {
      const double rb = model.rho_b[k];
      const double gap = eos.potential(rb) - eos.potential_slope(r) * (rb - r) - eos.potential(r);
      row.min_gap = std::min(row.min_gap, gap);
      row.inflow_gap -= gap * un * face.area;
      row.inflow_pressure -= eos.potential(rb) * un * face.area;
    } else {
      row.outflow_pressure += eos.potential(r) * un * face.area;
    }
    row.q_boundary -= 0.5 * (0.5 * qb2 + 0.25 * cs * qb2 * qb2) * un * face.area;
    const QTensor dn = (2.0 / g.h(face.axis)) * (qb - after.q[face.cell]);
    row.q_normal += 2.0 * cs * nc.gamma * qb2 * contract(qb, dn) * face.area;
  }
  if (model.boundary.inflow_count() == 0) row.min_gap = 0.0;

  row.constant = c_;
  row.groenwall = c_ * row.energy.total();
  row.lhs = row.energy_rate + row.visc_dissipation + row.conc_dissipation + row.relax_dissipation +
            row.sextic_dissipation + row.outflow_pressure + row.eps_pressure + row.inflow_gap;
  row.rhs = row.groenwall + row.q_boundary + row.inflow_pressure + row.q_normal + row.constant;
  row.residual = row.rhs - row.lhs;
  row.tolerance = energy_tolerance(e0_, dt, g.min_spacing(), after.time);
  cumulative_ += dt * row.residual;
  row.cumulative_residual = cumulative_;

  // Power balance: v . rhs against the work of each stress of the accepted iterate on the Galerkin part.
  {
    const FlowFields& f = report.iterate;
    const MatField grad_w = synthesize_gradient(model.basis, after.v, VectorExpr::zero());
    const VectorField w = synthesize(model.basis, after.v, VectorExpr::zero());
    const auto dq = gradient(f.q, model.q_b);
    const QField lap_it = laplacian(f.q, model.q_b);
    const VectorField grad_rho = gradient(f.rho, ScalarBC::neumann());
    const long n = static_cast<long>(g.size());
    std::vector<std::array<double, 7>> work(g.size());
#pragma omp parallel for schedule(static)
    for (long p = 0; p < n; ++p) {
      const Mat3& gw = grad_w[p];
      const Vec3& u = f.u[p];
      const double r = f.rho[p];
      const SymTensor sv = subgradient(model.law, SymTensor::sym_part(f.grad_u[p]));
      const QTensor& q = f.q[p];
      Mat3 tau = elastic_density(q, dq[0][p], dq[1][p], dq[2][p], cs) * Mat3::identity();
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) tau(i, j) -= contract(dq[i][p], dq[j][p]);
      const Mat3 qm = q.matrix(), lm = lap_it[p].matrix();
      const Mat3 rot = qm * lm - lm * qm;
      const Mat3 act = (nc.sigma_star * f.c[p] * f.c[p]) * qm;
      const Vec3 cf = f.grad_u[p] * grad_rho[p];
      work[p] = {r * contract(outer(u, u), gw), eos.pressure(r) * gw.trace(), contract(sv.matrix(), gw),
                 contract(tau, gw), contract(rot, gw), contract(act, gw), -eps * dot(cf, w[p])};
    }
    double* slots[7] = {&row.work_convective, &row.work_pressure, &row.work_viscous, &row.work_elastic,
                        &row.work_rotational, &row.work_active, &row.work_coupling};
    for (int k = 0; k < 7; ++k) *slots[k] = volume_integral(g, [&](std::size_t p) { return work[p][k]; });
    double assembled = 0.0;
    for (std::size_t i = 0; i < after.v.size(); ++i) assembled += after.v[i] * report.rhs[i];
    row.power_assembled = assembled;
    row.power_residual = assembled - (row.work_convective + row.work_pressure - row.work_viscous - row.work_elastic -
                                      row.work_rotational - row.work_active + row.work_coupling);
  }

  row.mass = total_mass(after.rho);
  const double mass_before = total_mass(before.rho);
  row.mass_defect = row.mass - mass_before - (-report.flux.outflow + report.flux.inflow + report.flux.robin);

  bounds_.advance(dt, report.faces);
  row.rho_min = *std::min_element(after.rho.data.begin(), after.rho.data.end());
  row.rho_max = *std::max_element(after.rho.data.begin(), after.rho.data.end());
  row.rho_lower = bounds_.lower();
  row.rho_upper = bounds_.upper();
  row.c_min = *std::min_element(after.c.data.begin(), after.c.data.end());
  row.c_max = *std::max_element(after.c.data.begin(), after.c.data.end());
  for (const auto& q : after.q.data) {
    const Mat3 m = q.matrix();
    row.q_trace = std::max(row.q_trace, std::abs(m.trace()));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) row.q_asymmetry = std::max(row.q_asymmetry, std::abs(m(i, j) - m(j, i)));
  }
  {
    const VectorField gr = gradient(after.rho, ScalarBC::neumann());
    row.renorm_eps_term = -2.0 * eps * volume_integral(g, [&](std::size_t p) { return dot(gr[p], gr[p]); });
  }
  row.picard_iterations = report.iterations;
  row.picard_increment = report.increments.empty() ? 0.0 : report.increments.back();
  return row;
}

std::vector<double> EnergyMonitor::save() const {
  const auto b = bounds_.save();
  return {c_, e0_, mass0_, cumulative_, b[0], b[1], b[2], b[3]};
}

void EnergyMonitor::restore(const std::vector<double>& data) {
  if (data.size() != 8) throw ShapeError("energy monitor checkpoint has the wrong length");
  c_ = data[0];
  e0_ = data[1];
  mass0_ = data[2];
  cumulative_ = data[3];
  bounds_.restore({data[4], data[5], data[6], data[7]});
}

// ---- defect diagnostic ----

std::array<double, 2> defect_constants(const PressureLaw& law) {
  if (law.kind() == PressureLaw::Kind::isentropic) {
    const double k = 3.0 * (law.gamma() - 1.0);
    return {std::min(2.0, k), std::max(2.0, k)};
  }
  // a_lower p <= P <= a_upper p gives p between P / a_upper and P / a_lower.
  const auto cert = certify_s2(law);
  return {std::min(2.0, 3.0 / cert.a_upper), std::max(2.0, 3.0 / cert.a_lower)};
}

DefectEstimate defect_diagnostic(const SnapshotFields& coarse, const SnapshotFields& fine, const PressureLaw& law,
                                 double threshold) {
  const Grid& gc = coarse.grid;
  const Grid& gf = fine.grid;
  for (int a = 0; a < 3; ++a) {
    if (gf.n(a) != 2 * gc.n(a)) throw ConfigError("defect: fine grid must have twice the coarse cells per axis");
    if (std::abs(gf.extent()[a] - gc.extent()[a]) > 1e-12 * gc.extent()[a])
      throw ConfigError("defect: coarse and fine domains differ");
  }
  if (std::abs(coarse.time - fine.time) > 1e-9 * (1.0 + std::abs(coarse.time)))
    throw ConfigError("defect: snapshots are at different times");

  DefectEstimate out;
  out.coarse = gc;
  out.energy_defect = ScalarField(gc);
  out.reynolds_defect = SymField(gc);
  out.kinetic_defect = ScalarField(gc);
  out.pressure_defect = ScalarField(gc);
  const auto d = defect_constants(law);
  out.lower = d[0];
  out.upper = d[1];

  double run_diff = 0.0;
  for (int k = 0; k < gc.n(2); ++k)
    for (int j = 0; j < gc.n(1); ++j)
      for (int i = 0; i < gc.n(0); ++i) {
        double rho = 0.0, kin = 0.0, pot = 0.0, prs = 0.0;
        Vec3 mom{0, 0, 0};
        Mat3 flux;
        for (int dk = 0; dk < 2; ++dk)
          for (int dj = 0; dj < 2; ++dj)
            for (int di = 0; di < 2; ++di) {
              const std::size_t p = gf.index(2 * i + di, 2 * j + dj, 2 * k + dk);
              const double r = fine.rho[p];
              const Vec3& u = fine.u[p];
              rho += r;
              for (int a = 0; a < 3; ++a) mom[a] += r * u[a];
              kin += 0.5 * r * dot(u, u);
              pot += law.potential(r);
              prs += law.pressure(r);
              flux += r * outer(u, u);
            }
        rho /= 8.0;
        kin /= 8.0;
        pot /= 8.0;
        prs /= 8.0;
        flux *= 1.0 / 8.0;
        for (double& m : mom) m /= 8.0;

        const std::size_t c = gc.index(i, j, k);
        const double kin_bar = rho > 0.0 ? 0.5 * dot(mom, mom) / rho : 0.0;
        const double kinetic = kin - kin_bar;
        const double pressure = pot - law.potential(rho);
        const double energy = kinetic + pressure;
        Mat3 re = flux;
        if (rho > 0.0) re -= (1.0 / rho) * outer(mom, mom);
        for (int a = 0; a < 3; ++a) re(a, a) += prs - law.pressure(rho);
        out.kinetic_defect[c] = kinetic;
        out.pressure_defect[c] = pressure;
        out.energy_defect[c] = energy;
        out.reynolds_defect[c] = SymTensor::sym_part(re);

        const double slack = 1e-12 * (1.0 + std::abs(energy));
        if (energy > threshold) {
          ++out.cells_checked;
          const double tr = re.trace();
          if (d[0] * energy - slack <= tr && tr <= d[1] * energy + slack) ++out.cells_passed;
        }

        // Literal comparison with the coarse run at the same node.
        const double rc = coarse.rho[c];
        const Vec3& uc = coarse.u[c];
        const double run_energy = kin + pot - (0.5 * rc * dot(uc, uc) + law.potential(rc));
        Mat3 run_re = flux - rc * outer(uc, uc);
        for (int a = 0; a < 3; ++a) run_re(a, a) += prs - law.pressure(rc);
        run_diff += std::abs(run_energy) * gc.cell_volume();
        if (run_energy > threshold) {
          ++out.run_cells_checked;
          const double tr = run_re.trace();
          if (d[0] * run_energy <= tr && tr <= d[1] * run_energy) ++out.run_cells_passed;
        }
      }
  out.run_difference_energy = run_diff;
  return out;
}

// ---- Korn diagnostic ----

double korn_ratio(const VelocityBasis& basis, int samples, unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Grid& g = basis.grid();
  double worst = 0.0;
  std::vector<double> v(basis.size());
  for (int s = 0; s < samples; ++s) {
    for (double& x : v) x = normal(rng);
    const MatField grad = synthesize_gradient(basis, v, VectorExpr::zero());
    const double full = volume_integral(g, [&](std::size_t p) { return std::pow(frobenius(grad[p]), 4.0 / 3.0); });
    const double dev = volume_integral(g, [&](std::size_t p) {
      return std::pow(frobenius(deviator(SymTensor::sym_part(grad[p]))), 4.0 / 3.0);
    });
    if (dev > 0.0) worst = std::max(worst, std::pow(full / dev, 0.75));
  }
  return worst;
}

}  // namespace anematic
