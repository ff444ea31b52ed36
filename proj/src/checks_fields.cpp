#include <Eigen/Cholesky>
#include <cmath>
#include <numbers>

#include "anematic/continuity.hpp"
#include "anematic/galerkin.hpp"
#include "anematic/momentum.hpp"
#include "anematic/nematic.hpp"
#include "anematic/scenario.hpp"
#include "check_support.hpp"

namespace anematic::checks {

namespace {

constexpr double kPi = std::numbers::pi;

Grid cube(int n) { return Grid({1.0, 1.0, 1.0}, {n, n, n}); }

bool interior(const Grid& g, std::size_t p) {
  const auto c = g.coords(p);
  for (int a = 0; a < 3; ++a)
    if (c[a] == 0 || c[a] == g.n(a) - 1) return false;
  return true;
}

double smooth_scalar(const Vec3& x) {
  return std::sin(kPi * x[0]) * std::cos(0.5 * kPi * x[1]) + x[2] * x[2] * x[0];
}
Vec3 smooth_scalar_gradient(const Vec3& x) {
  return {kPi * std::cos(kPi * x[0]) * std::cos(0.5 * kPi * x[1]) + x[2] * x[2],
          -0.5 * kPi * std::sin(kPi * x[0]) * std::sin(0.5 * kPi * x[1]), 2.0 * x[2] * x[0]};
}
double smooth_scalar_laplacian(const Vec3& x) {
  return -1.25 * kPi * kPi * std::sin(kPi * x[0]) * std::cos(0.5 * kPi * x[1]) + 2.0 * x[0];
}
Vec3 smooth_vector(const Vec3& x) {
  return {std::cos(x[1]) + std::sin(x[0]) * x[2], std::sin(kPi * x[2]) * x[0], x[1] * x[1] - x[2]};
}
double smooth_vector_divergence(const Vec3& x) { return std::cos(x[0]) * x[2] - 1.0; }

struct OperatorErrors {
  double grad = 0, lap = 0, div = 0, parts = 0;
};

OperatorErrors operator_errors(int n) {
  const Grid g = cube(n);
  const ScalarField f = sample_field<double>(g, smooth_scalar);
  const VectorField v = sample_field<Vec3>(g, smooth_vector);
  const ScalarBC fb = ScalarBC::dirichlet(sample_boundary<double>(g, smooth_scalar));
  const VectorBC vb{sample_boundary<Vec3>(g, smooth_vector)};
  const VectorField grad = gradient(f, fb);
  const ScalarField lap = laplacian(f, fb);
  const ScalarField div = divergence(v, vb);
  OperatorErrors e;
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (!interior(g, p)) continue;
    const auto c = g.coords(p);
    const Vec3 x = g.node(c[0], c[1], c[2]);
    const Vec3 ge = smooth_scalar_gradient(x);
    for (int a = 0; a < 3; ++a) e.grad = std::max(e.grad, std::abs(grad[p][a] - ge[a]));
    e.lap = std::max(e.lap, std::abs(lap[p] - smooth_scalar_laplacian(x)));
    e.div = std::max(e.div, std::abs(div[p] - smooth_vector_divergence(x)));
  }
  // int f div v + int v . grad f - surface f v . n
  const auto bd = decompose_boundary(g, smooth_vector);
  std::vector<double> flux(bd.faces.size());
  for (std::size_t k = 0; k < flux.size(); ++k)
    flux[k] = smooth_scalar(bd.faces[k].centroid) * dot(smooth_vector(bd.faces[k].centroid), bd.faces[k].normal);
  const double vol = volume_integral(g, [&](std::size_t p) { return f[p] * div[p] + dot(v[p], grad[p]); });
  e.parts = std::abs(vol - surface_integral(bd, flux, BoundarySubset::all));
  return e;
}

}  // namespace

std::vector<CheckLine> domain(unsigned long seed) {
  Sampler rng(seed);
  std::vector<CheckLine> out;
  const OperatorErrors e16 = operator_errors(16), e32 = operator_errors(32);
  out.push_back(at_least("gradient_order", order(e16.grad, e32.grad), 1.9));
  out.push_back(at_least("laplacian_order", order(e16.lap, e32.lap), 1.9));
  out.push_back(at_least("divergence_order", order(e16.div, e32.div), 1.9));
  out.push_back(at_most("integration_by_parts_defect", e16.parts, 1e-2));
  out.push_back(at_least("integration_by_parts_order", order(e16.parts, e32.parts), 1.9));

  // Boundary partition: exhaustive, inflow exactly where u_B . n < 0.
  const Grid g = cube(8);
  int mismatched = 0;
  for (const VectorExpr& ub : {VectorExpr::channel(0.2, g.extent()), VectorExpr::shear(1.0, g.extent()),
                               VectorExpr::constant({1, -0.5, 0}), VectorExpr::rotation(1.0, g.extent()),
                               VectorExpr::zero()}) {
    const auto bd = decompose_boundary(g, [&](const Vec3& x) { return ub.value(x); });
    if (bd.faces.size() != g.boundary_size()) ++mismatched;
    for (const auto& f : bd.faces)
      if (f.inflow != (dot(ub.value(f.centroid), f.normal) < 0.0)) ++mismatched;
  }
  out.push_back(at_most("boundary_partition", mismatched, 0));

  // OpenMP kernels against the serial references.
  const Grid g16 = cube(16);
  ScalarField f(g16);
  QField q(g16);
  for (std::size_t p = 0; p < g16.size(); ++p) {
    f[p] = rng.uniform(-1, 1);
    q[p] = rng.q(1.0);
  }
  const ScalarBC fb = ScalarBC::dirichlet(std::vector<double>(g16.boundary_size(), 0.3));
  std::vector<QTensor> qvals(g16.boundary_size());
  for (auto& v : qvals) v = rng.q(0.5);
  const QBC qb = QBC::dirichlet(qvals);
  double kernel = 0.0;
  {
    const auto a = laplacian(f, fb), b = serial::laplacian(f, fb);
    for (std::size_t p = 0; p < g16.size(); ++p) kernel = std::max(kernel, std::abs(a[p] - b[p]));
    const auto ga = gradient(f, fb), gb = serial::gradient(f, fb);
    for (std::size_t p = 0; p < g16.size(); ++p)
      for (int k = 0; k < 3; ++k) kernel = std::max(kernel, std::abs(ga[p][k] - gb[p][k]));
    const auto qa = laplacian(q, qb), qs = serial::laplacian(q, qb);
    for (std::size_t p = 0; p < g16.size(); ++p) kernel = std::max(kernel, frobenius(qa[p] - qs[p]));
    kernel = std::max(kernel, std::abs(volume_integral(f) - serial::volume_integral(f)));
  }
  out.push_back(at_most("parallel_matches_serial", kernel, 1e-12));

  double quad = std::abs(volume_integral(ScalarField(g16, 1.0)) - 1.0);
  const auto bd = decompose_boundary(g16, [](const Vec3&) { return Vec3{1, 0, 0}; });
  quad = std::max(quad, std::abs(surface_integral(bd, std::vector<double>(bd.faces.size(), 1.0), BoundarySubset::all) - 6.0));
  out.push_back(at_most("unit_quadrature", quad, 1e-14));
  return out;
}

std::vector<CheckLine> galerkin(unsigned long seed) {
  Sampler rng(seed);
  std::vector<CheckLine> out;
  double gram = 0.0;
  for (int m = 1; m <= 3; ++m) {
    const VelocityBasis b(cube(16), m);
    gram = std::max(gram, (gram_matrix(b) - Eigen::MatrixXd::Identity(b.size(), b.size())).cwiseAbs().maxCoeff());
  }
  out.push_back(at_most("gram_identity", gram, 1e-10));

  const VelocityBasis basis(cube(16), 2);
  const VectorExpr zero = VectorExpr::zero();
  double parseval = 0.0, round = 0.0, trace = 0.0, kernels = 0.0;
  for (int s = 0; s < 20; ++s) {
    const auto v = rng.coefficients(basis.size(), 1.0);
    const VectorField u = synthesize(basis, v, zero);
    double norm2 = 0.0, coef2 = 0.0;
    for (double x : v) coef2 += x * x;
    norm2 = volume_integral(basis.grid(), [&](std::size_t p) { return dot(u[p], u[p]); });
    parseval = std::max(parseval, std::abs(norm2 - coef2));
    const auto back = project(basis, u);
    for (std::size_t i = 0; i < v.size(); ++i) round = std::max(round, std::abs(back[i] - v[i]));

    const FaceVelocity faces = synthesize_faces(basis, v, zero);
    const Grid& g = basis.grid();
    for (int a = 0; a < 3; ++a)
      for (int k = 0; k < g.n(2) + (a == 2); ++k)
        for (int j = 0; j < g.n(1) + (a == 1); ++j)
          for (int i = 0; i < g.n(0) + (a == 0); ++i) {
            const int c[3] = {i, j, k};
            if (c[a] == 0 || c[a] == g.n(a)) trace = std::max(trace, std::abs(faces.at(a, i, j, k)));
          }

    const VectorField us = serial::synthesize(basis, v, zero);
    for (std::size_t p = 0; p < u.size(); ++p)
      for (int a = 0; a < 3; ++a) kernels = std::max(kernels, std::abs(u[p][a] - us[p][a]));
  }
  ScalarField rho(basis.grid());
  MatField a(basis.grid());
  VectorField f(basis.grid());
  for (std::size_t p = 0; p < rho.size(); ++p) {
    rho[p] = rng.uniform(0.5, 1.5);
    a[p] = rng.mat(1.0);
    f[p] = rng.vec(1.0);
  }
  kernels = std::max(kernels, (scalar_mass_matrix(basis, rho) - serial::scalar_mass_matrix(basis, rho)).cwiseAbs().maxCoeff());
  const auto pa = pair_with_modes(basis, a, f), ps = serial::pair_with_modes(basis, a, f);
  for (std::size_t i = 0; i < pa.size(); ++i) kernels = std::max(kernels, std::abs(pa[i] - ps[i]));

  const VectorExpr channel = VectorExpr::channel(0.2, basis.grid().extent());
  const VectorField ub = synthesize(basis, std::vector<double>(basis.size(), 0.0), channel);
  double offset = 0.0;
  for (std::size_t p = 0; p < ub.size(); ++p) {
    const auto c = basis.grid().coords(p);
    const Vec3 e = channel.value(basis.grid().node(c[0], c[1], c[2]));
    for (int k = 0; k < 3; ++k) offset = std::max(offset, std::abs(ub[p][k] - e[k]));
  }
  out.push_back(at_most("parseval", parseval, 1e-8));
  out.push_back(at_most("projection_round_trip", round, 1e-8));
  out.push_back({"modes_vanish_on_walls", trace == 0.0, trace, 0.0});
  out.push_back({"zero_state_is_boundary_field", offset == 0.0, offset, 0.0});
  out.push_back(at_most("sum_factorized_matches_serial", kernels, 1e-12));
  out.push_back(throws<ConfigError>("under_resolved_basis_rejected", [] { VelocityBasis(cube(8), 3); }));
  return out;
}

std::vector<CheckLine> continuity(unsigned long seed) {
  Sampler rng(seed);
  std::vector<CheckLine> out;
  const Grid g = cube(16);
  const VelocityBasis basis(g, 2);
  ContinuityConfig cfg{0.1, 1e-3, 1e-13};

  // Uniform density equal to the inflow value at rest stays put.
  {
    const auto bd = decompose_boundary(g, [](const Vec3&) { return Vec3{0, 0, 0}; });
    const std::vector<double> rb(g.boundary_size(), 1.3);
    const auto faces = synthesize_faces(basis, std::vector<double>(basis.size(), 0.0), VectorExpr::zero());
    const auto res = step_continuity(cfg, bd, rb, ScalarField(g, 1.3), faces);
    double worst = 0.0;
    for (double r : res.rho.data) worst = std::max(worst, std::abs(r - 1.3));
    out.push_back(at_most("stationary_state", worst, 1e-14));
  }

  // Trajectory with a channel inflow and random Galerkin velocities.
  const VectorExpr ub = VectorExpr::channel(0.4, g.extent());
  const auto bd = decompose_boundary(g, [&](const Vec3& x) { return ub.value(x); });
  const std::vector<double> rb = sample_boundary<double>(g, [](const Vec3& x) { return 1.2 + 0.1 * x[1]; });
  ScalarField rho = sample_field<double>(g, [](const Vec3& x) {
    return 1.0 + 0.3 * std::cos(kPi * x[0]) * std::cos(kPi * x[2]);
  });
  double ub_sup = 0.0;
  for (const auto& f : bd.faces) ub_sup = std::max(ub_sup, norm(ub.value(f.centroid)));
  DensityBounds bounds(rho, bd, rb, ub_sup);
  const double mass0 = volume_integral(rho);
  double upper = 0.0, lower = 0.0, mass = 0.0, negative = INFINITY;
  for (int step = 0; step < 60; ++step) {
    const auto v = rng.coefficients(basis.size(), 0.1);
    const auto faces = synthesize_faces(basis, v, ub);
    const double before = volume_integral(rho);
    auto res = step_continuity(cfg, bd, rb, rho, faces);
    bounds.advance(cfg.dt, faces);
    rho = std::move(res.rho);
    const auto [lo, hi] = std::minmax_element(rho.data.begin(), rho.data.end());
    upper = std::max(upper, (*hi - bounds.upper()) / bounds.upper());
    lower = std::max(lower, (bounds.lower() - *lo) / bounds.lower());
    negative = std::min(negative, *lo);
    const double change = volume_integral(rho) - before;
    mass = std::max(mass, std::abs(change - (-res.flux.outflow + res.flux.inflow + res.flux.robin)) / mass0);
  }
  out.push_back(at_most("maximum_principle", upper, 1e-6));
  out.push_back(at_most("positivity_bound", lower, 1e-6));
  out.push_back(at_least("nonnegative", negative, 0.0));
  out.push_back(at_most("mass_ledger", mass, 1e-10));

  ContinuityConfig big = cfg;
  big.dt = 1.0;
  out.push_back(throws<StepSizeError>("unstable_step_rejected", [&] {
    step_continuity(big, bd, rb, rho, synthesize_faces(basis, std::vector<double>(basis.size(), 0.0), ub));
  }));
  return out;
}

namespace {

QTensor manufactured_q(const Vec3& x) {
  return uniaxial(0.4, {std::cos(kPi * x[0] * x[1]), std::sin(kPi * x[0] * x[1]), 0.3 * x[2]});
}
QTensor manufactured_q_prime(const Vec3& x) {
  const double s = std::sin(kPi * x[0]) * std::cos(kPi * x[2]);
  return QTensor{0.2 * s, 0.1 * x[1], 0.3 * std::cos(kPi * x[1]), -0.1 * x[2] * x[0], 0.2 * s * x[1]};
}
Vec3 wall_bump_field(const Vec3& x) {
  const double b = std::sin(kPi * x[0]) * std::sin(kPi * x[1]) * std::sin(kPi * x[2]);
  return {b * (1.0 + x[1]), -b * x[2], 2.0 * b * x[0]};
}
Vec3 wall_rotation_field(const Vec3& x) {
  const double b = std::sin(kPi * x[0]) * std::sin(kPi * x[1]) * std::sin(kPi * x[2]);
  return {-b * (x[1] - 0.5), b * (x[0] - 0.5), 0.0};
}

double pairing_gap(int n, const std::function<Vec3(const Vec3&)>& u) {
  const auto p = commutator_pairings(cube(n), manufactured_q, manufactured_q_prime, u);
  return std::abs(p.volume_side - p.divergence_side);
}

}  // namespace

std::array<double, 3> commutator_identity_gaps() {
  return {pairing_gap(16, wall_bump_field), pairing_gap(32, wall_bump_field), pairing_gap(64, wall_bump_field)};
}

std::vector<CheckLine> nematic(unsigned long seed) {
  Sampler rng(seed);
  std::vector<CheckLine> out;
  const Grid g = cube(16);
  const VelocityBasis basis(g, 2);
  NematicConfig cfg;
  cfg.d0 = 0.1;
  cfg.gamma = 0.1;
  cfg.bulk = {1.0, 0.5};
  cfg.dt = 1e-3;

  // Random transport: concentration bounds and the S30 encoding.
  const VectorExpr ub = VectorExpr::shear(0.5, g.extent());
  const QBC qb = QBC::dirichlet(sample_boundary<QTensor>(g, manufactured_q));
  ScalarField c = sample_field<double>(g, [](const Vec3& x) { return 1.0 + 0.5 * std::cos(kPi * x[0]) * std::sin(kPi * x[1]); });
  QField q = sample_field<QTensor>(g, manufactured_q);
  const auto [lo0, hi0] = std::minmax_element(c.data.begin(), c.data.end());
  const double c_lo = *lo0, c_hi = *hi0;
  double c_out = 0.0, structure = 0.0;
  for (int step = 0; step < 40; ++step) {
    const auto v = rng.coefficients(basis.size(), 0.2);
    const VectorField u = synthesize(basis, v, ub);
    const MatField gu = synthesize_gradient(basis, v, ub);
    c = step_concentration(cfg, c, u);
    q = step_q(cfg, q, c, u, gu, qb);
    const auto [lo, hi] = std::minmax_element(c.data.begin(), c.data.end());
    c_out = std::max({c_out, c_lo - *lo, *hi - c_hi});
    for (const auto& t : q.data) {
      const Mat3 m = t.matrix();
      structure = std::max({structure, std::abs(m.trace()), max_abs(m - m.transpose())});
    }
  }
  out.push_back(at_most("concentration_maximum_principle", c_out, 1e-12));
  out.push_back({"q_symmetric_traceless_exact", structure == 0.0, structure, 0.0});

  // At rest: concentration mass is conserved and the free energy decreases.
  {
    const VectorField u0(g, Vec3{0, 0, 0});
    const MatField gu0(g);
    ScalarField cc = sample_field<double>(g, [](const Vec3& x) { return 1.0 + 0.4 * std::cos(kPi * x[2]); });
    const double m0 = volume_integral(cc);
    double mass = 0.0;
    for (int s = 0; s < 20; ++s) {
      cc = step_concentration(cfg, cc, u0);
      mass = std::max(mass, std::abs(volume_integral(cc) - m0) / m0);
    }
    out.push_back(at_most("concentration_mass_at_rest", mass, 1e-12));

    const QBC zero_b = QBC::dirichlet(std::vector<QTensor>(g.boundary_size()));
    const ScalarField cu(g, 1.0);
    QField qq = sample_field<QTensor>(g, manufactured_q);
    double rise = -INFINITY;
    double e = ldg_energy(cfg, qq, 1.0, zero_b);
    for (int s = 0; s < 40; ++s) {
      qq = step_q(cfg, qq, cu, u0, gu0, zero_b);
      const double next = ldg_energy(cfg, qq, 1.0, zero_b);
      rise = std::max(rise, next - e);
      e = next;
    }
    out.push_back(at_most("free_energy_nonincreasing", rise, 1e-10));
  }

  // Uniform Q with matching wall data: the molecular field is the bulk field.
  {
    const QTensor u = uniaxial(0.5, {0.3, 1.0, -0.2});
    const QField qu(g, u);
    const ScalarField cu(g, 0.7);
    const auto h = molecular_field(cfg, qu, cu, QBC::dirichlet(std::vector<QTensor>(g.boundary_size(), u)));
    const QTensor bulk = bulk_molecular_field(u, 0.7, cfg.bulk);
    double worst = 0.0;
    for (const auto& x : h.data) worst = std::max(worst, frobenius(x - bulk));
    out.push_back(at_most("uniform_field_is_bulk", worst, 1e-12));
  }

  const auto gaps = commutator_identity_gaps();
  out.push_back(at_least("commutator_identity_order", order(gaps[1], gaps[2]), 1.9));
  return out;
}

namespace {

Scenario small_data_scenario() {
  Scenario s;
  s.cells = {8, 8, 8};
  s.modes = 2;
  s.initial_rho = "constant value=1";
  s.initial_c = "constant value=1";
  s.initial_q = "zero";
  s.initial_v = "random norm=1e-3 seed=7";
  s.boundary_u = "zero";
  s.boundary_q = "zero";
  s.boundary_rho = "constant value=1";
  s.picard_extrapolate = false;
  return s;
}

}  // namespace

std::vector<CheckLine> momentum(unsigned long seed) {
  Sampler rng(seed);
  std::vector<CheckLine> out;
  const Grid g = cube(16);
  const VelocityBasis basis(g, 2);

  ScalarField rho(g);
  for (auto& r : rho.data) r = rng.uniform(0.2, 2.0);
  const Eigen::MatrixXd m = scalar_mass_matrix(basis, rho);
  out.push_back(at_most("mass_matrix_symmetric", (m - m.transpose()).cwiseAbs().maxCoeff(), 1e-14));
  out.push_back({"mass_matrix_cholesky", m.llt().info() == Eigen::Success, 0.0, 0.0});
  const Eigen::MatrixXd unit = scalar_mass_matrix(basis, ScalarField(g, 1.0));
  out.push_back(at_most("unit_density_mass_identity",
                        (unit - Eigen::MatrixXd::Identity(unit.rows(), unit.cols())).cwiseAbs().maxCoeff(), 1e-10));

  const RheologyLaw newton = RheologyLaw::newtonian(1.0, 0.0);
  const PressureLaw eos = PressureLaw::isentropic(1.0, 2.0);
  const QBC zero_b = QBC::dirichlet(std::vector<QTensor>(g.boundary_size()));
  MomentumConfig cfg;

  // Everything at rest: no force on any mode.
  {
    FlowFields f{ScalarField(g, 1.0), VectorField(g, Vec3{0, 0, 0}), MatField(g), ScalarField(g, 1.0), QField(g)};
    const auto s = assemble_stresses(cfg, newton, eos, f, zero_b);
    const auto rhs = galerkin_rhs(basis, s, f, 0.1);
    double worst = 0.0;
    for (double x : rhs) worst = std::max(worst, std::abs(x));
    out.push_back(at_most("rest_state_no_force", worst, 1e-12));
  }

  // Generic fields: stress structure and linearity in the activity.
  const VectorExpr ub = VectorExpr::shear(0.3, g.extent());
  const auto v = rng.coefficients(basis.size(), 0.2);
  FlowFields f{sample_field<double>(g, [](const Vec3& x) { return 1.0 + 0.2 * std::sin(kPi * x[0]) * x[1]; }),
               synthesize(basis, v, ub), synthesize_gradient(basis, v, ub),
               sample_field<double>(g, [](const Vec3& x) { return 1.0 + 0.3 * x[2]; }),
               sample_field<QTensor>(g, manufactured_q)};
  const QBC qb = QBC::dirichlet(sample_boundary<QTensor>(g, manufactured_q));
  auto rhs_for = [&](double sigma) {
    MomentumConfig c = cfg;
    c.sigma_star = sigma;
    return galerkin_rhs(basis, assemble_stresses(c, newton, eos, f, qb), f, 0.1);
  };
  {
    MomentumConfig c = cfg;
    c.sigma_star = -0.7;
    const auto s = assemble_stresses(c, newton, eos, f, qb);
    double tr = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p)
      tr = std::max(tr, std::abs(s.active[p].trace()) / (1.0 + frobenius(s.active[p])));
    out.push_back(at_most("active_stress_traceless", tr, 1e-15));
    double rot = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) {
      const Mat3 r = s.rotational[p].matrix();
      rot = std::max(rot, max_abs(r + r.transpose()));
    }
    out.push_back({"rotational_stress_skew_exact", rot == 0.0, rot, 0.0});
  }
  {
    const auto r0 = rhs_for(0.0), r1 = rhs_for(0.1), r2 = rhs_for(0.2);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < r0.size(); ++i) {
      worst = std::max(worst, std::abs((r2[i] - r0[i]) - 2.0 * (r1[i] - r0[i])));
      scale = std::max(scale, std::abs(r1[i] - r0[i]));
    }
    out.push_back(at_most("activity_linear", worst / (1e-300 + scale), 1e-10));
  }

  // Without Q and c the nematic stresses vanish identically.
  {
    FlowFields plain = f;
    plain.q = QField(g);
    plain.c = ScalarField(g, 0.0);
    const auto s = assemble_stresses(cfg, newton, eos, plain, zero_b);
    double worst = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p)
      worst = std::max({worst, frobenius(s.elastic[p]), max_abs(s.rotational[p].matrix()), frobenius(s.active[p])});
    out.push_back({"nematic_stresses_vanish_without_order", worst == 0.0, worst, 0.0});
  }

  // Skew pairing against a rotation confined by a wall bump.
  out.push_back(
      at_least("skew_pairing_order", order(pairing_gap(16, wall_rotation_field), pairing_gap(32, wall_rotation_field)), 1.9));

  // Picard iteration on small data.
  {
    const Scenario s = small_data_scenario();
    Model model = build_model(s);
    State st = initial_state(s, model);
    const auto rep = advance(model, st);
    double worst = 0.0;
    bool monotone = true;
    for (std::size_t i = 1; i < rep.increments.size(); ++i) {
      if (rep.increments[i] <= model.picard.tolerance) break;
      const double ratio = rep.increments[i] / rep.increments[i - 1];
      worst = std::max(worst, ratio);
      monotone = monotone && ratio < 1.0;
    }
    out.push_back({"picard_contraction", monotone && worst <= 0.5, worst, 0.5});

    int spread = 0;
    for (double tol : {1e-9, 1e-10, 1e-11}) {
      Model a = build_model(s), b = build_model(s);
      a.picard.tolerance = tol;
      b.picard.tolerance = 2.0 * tol;
      State sa = initial_state(s, a), sb = initial_state(s, b);
      spread = std::max(spread, std::abs(advance(a, sa).iterations - advance(b, sb).iterations));
    }
    out.push_back(at_most("picard_tolerance_doubling", spread, 1));
  }
  {
    Scenario s = small_data_scenario();
    s.initial_v = "zero";
    Model model = build_model(s);
    State st = initial_state(s, model);
    const int it = advance(model, st).iterations;
    double vmax = 0.0;
    for (double x : st.v) vmax = std::max(vmax, std::abs(x));
    // Uniform pressure work on the sine modes cancels only to rounding.
    out.push_back({"zero_data_one_iteration", it == 1 && vmax <= 1e-14, vmax, 1e-14});
  }
  return out;
}

}  // namespace anematic::checks
