#include "anematic/nematic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "anematic/continuity.hpp"
#include "anematic/linear_solver.hpp"

namespace anematic {

namespace {

void check_step(const char* what, const Grid& g, double dt, double kappa, double speed) {
  if (dt <= 0.0) throw ConfigError(std::string(what) + ": dt must be positive");
  const double limit = stable_step(g, kappa, speed);
  if (dt > limit) {
    std::ostringstream msg;
    msg << what << ": dt = " << dt << " exceeds the stability bound " << limit;
    throw StepSizeError(msg.str());
  }
}

// First-order upwind (u . grad) f with ghost values supplied by bc.
template <class T, class BC>
Field<T> upwind_transport(const Field<T>& f, const VectorField& u, const BC& bc) {
  const Grid& g = f.grid;
  Field<T> out(g);
  const int nz = g.n(2), ny = g.n(1), nx = g.n(0);
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const T& centre = f(i, j, k);
        const Vec3& vel = u(i, j, k);
        T acc{};
        for (int a = 0; a < 3; ++a) {
          const int c[3] = {i, j, k};
          int nb[3] = {i, j, k};
          T diff{};
          if (vel[a] > 0.0) {
            --nb[a];
            const T lo = nb[a] < 0 ? bc.ghost(centre, g.face_index(2 * a, c[0], c[1], c[2])) : f(nb[0], nb[1], nb[2]);
            diff = centre - lo;
          } else if (vel[a] < 0.0) {
            ++nb[a];
            const T hi = nb[a] >= g.n(a) ? bc.ghost(centre, g.face_index(2 * a + 1, c[0], c[1], c[2]))
                                         : f(nb[0], nb[1], nb[2]);
            diff = hi - centre;
          } else {
            continue;
          }
          acc += (vel[a] / g.h(a)) * diff;
        }
        out(i, j, k) = acc;
      }
  return out;
}

std::vector<double> q_component_values(const std::vector<QTensor>& values, int comp) {
  std::vector<double> out(values.size());
  for (std::size_t n = 0; n < values.size(); ++n) out[n] = values[n].component(comp);
  return out;
}

}  // namespace

double nodal_speed(const VectorField& u) {
  double s = 0.0;
  for (const auto& v : u.data) s = std::max(s, std::abs(v[0]) + std::abs(v[1]) + std::abs(v[2]));
  return s;
}

ScalarField step_concentration(const NematicConfig& cfg, const ScalarField& c, const VectorField& u) {
  require_same_grid(c, u, "step_concentration");
  if (cfg.d0 <= 0.0) throw ConfigError("concentration diffusivity must be positive");
  const Grid& g = c.grid;
  check_step("concentration", g, cfg.dt, cfg.d0, nodal_speed(u));
  const auto transport = upwind_transport(c, u, ScalarBC::neumann());
  std::vector<double> rhs(g.size());
  for (std::size_t n = 0; n < rhs.size(); ++n) rhs[n] = c[n] - cfg.dt * transport[n];
  const auto problem = DiffusionProblem::neumann(g, cfg.dt * cfg.d0);
  ScalarField out = c;
  solve_pcg(problem, rhs, out.data, cfg.cg_tolerance);
  return out;
}

QField molecular_field(const NematicConfig& cfg, const QField& q, const ScalarField& c, const QBC& q_b) {
  require_same_grid(q, c, "molecular_field");
  QField h = laplacian(q, q_b);
  for (std::size_t n = 0; n < h.size(); ++n) h[n] += bulk_molecular_field(q[n], c[n], cfg.bulk);
  return h;
}

QField step_q(const NematicConfig& cfg, const QField& q, const ScalarField& c_new, const VectorField& u,
              const MatField& grad_u, const QBC& q_b) {
  require_same_grid(q, u, "step_q");
  require_same_grid(q, c_new, "step_q");
  require_same_grid(q, grad_u, "step_q");
  if (cfg.gamma <= 0.0) throw ConfigError("rotational mobility must be positive");
  const Grid& g = q.grid;
  check_step("nematic", g, cfg.dt, cfg.gamma, nodal_speed(u));
  const double dt = cfg.dt;

  const auto transport = upwind_transport(q, u, q_b);
  QField star(g);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const QTensor advected = q[n] - dt * transport[n];
    const SkewTensor lambda = SkewTensor::skew_part(grad_u[n]);
    const QTensor rotated = advected - dt * commutator(advected, lambda);
    star[n] = rotated + (dt * cfg.gamma) * bulk_molecular_field(rotated, c_new[n], cfg.bulk);
  }

  QField out(g);
  for (int comp = 0; comp < 5; ++comp) {
    DiffusionProblem problem = q_b.kind == QBC::Kind::dirichlet
                                   ? DiffusionProblem::dirichlet(g, dt * cfg.gamma, q_component_values(q_b.values, comp))
                                   : DiffusionProblem::neumann(g, dt * cfg.gamma);
    std::vector<double> rhs(g.size()), x(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
      rhs[n] = star[n].component(comp);
      x[n] = q[n].component(comp);
    }
    problem.add_boundary_source(rhs);
    solve_pcg(problem, rhs, x, cfg.cg_tolerance);
    for (std::size_t n = 0; n < g.size(); ++n) out[n].component(comp) = x[n];
  }
  for (auto& v : out.data) v = project_s30(v.matrix());
  return out;
}

double elastic_energy(const QField& q, const QBC& q_b) {
  const Grid& g = q.grid;
  double elastic = 0.0;
  for (int k = 0; k < g.n(2); ++k)
    for (int j = 0; j < g.n(1); ++j)
      for (int i = 0; i < g.n(0); ++i) {
        const QTensor& centre = q(i, j, k);
        const int cc[3] = {i, j, k};
        for (int a = 0; a < 3; ++a) {
          const double h2 = g.h(a) * g.h(a);
          int nb[3] = {i, j, k};
          ++nb[a];
          if (nb[a] < g.n(a)) {
            const QTensor d = q(nb[0], nb[1], nb[2]) - centre;
            elastic += 0.5 * contract(d, d) / h2;
          }
          if (q_b.kind == QBC::Kind::dirichlet) {
            if (cc[a] == 0) {
              const QTensor d = q_b.values[g.face_index(2 * a, i, j, k)] - centre;
              elastic += contract(d, d) / h2;
            }
            if (cc[a] == g.n(a) - 1) {
              const QTensor d = q_b.values[g.face_index(2 * a + 1, i, j, k)] - centre;
              elastic += contract(d, d) / h2;
            }
          }
        }
      }
  return elastic * g.cell_volume();
}

double ldg_energy(const NematicConfig& cfg, const QField& q, double c, const QBC& q_b) {
  double bulk = 0.0;
  for (const auto& v : q.data) {
    const auto inv = scalar_invariants(v);
    bulk += 0.25 * (c - cfg.bulk.c_star) * inv.tr_q2 - cfg.bulk.b / 3.0 * inv.tr_q3 +
            0.25 * cfg.bulk.c_star * inv.tr_q2 * inv.tr_q2;
  }
  return bulk * q.grid.cell_volume() + elastic_energy(q, q_b);
}

CommutatorPairing commutator_pairings(const Grid& grid, const std::function<QTensor(const Vec3&)>& q,
                                      const std::function<QTensor(const Vec3&)>& q_prime,
                                      const std::function<Vec3(const Vec3&)>& u) {
  const QField qf = sample_field<QTensor>(grid, q);
  const QField qp = sample_field<QTensor>(grid, q_prime);
  const VectorField uf = sample_field<Vec3>(grid, u);
  const QBC q_b = QBC::dirichlet(sample_boundary<QTensor>(grid, q));
  QField lap = laplacian(qf, q_b);
  // Cubic wall ghost (16 g - 15 q0 + 5 q1 - q2) / 5 instead of 2 g - q0, so the Laplacian is second order up to the
  // wall and both pairings converge at second order.
  for (int k = 0; k < grid.n(2); ++k)
    for (int j = 0; j < grid.n(1); ++j)
      for (int i = 0; i < grid.n(0); ++i) {
        const int c[3] = {i, j, k};
        const std::size_t n = grid.index(i, j, k);
        for (int ax = 0; ax < 3; ++ax) {
          for (int high = 0; high < 2; ++high) {
            if (c[ax] != (high ? grid.n(ax) - 1 : 0)) continue;
            const int dir = high ? -1 : 1;
            int in1[3] = {i, j, k}, in2[3] = {i, j, k};
            in1[ax] += dir;
            in2[ax] += 2 * dir;
            Vec3 wall = grid.node(i, j, k);
            wall[ax] = high ? grid.extent()[ax] : 0.0;
            const double h2 = grid.h(ax) * grid.h(ax);
            lap[n] += (1.0 / (5.0 * h2)) * (6.0 * q(wall) - 10.0 * qf[n] + 5.0 * qf(in1[0], in1[1], in1[2]) -
                                            qf(in2[0], in2[1], in2[2]));
          }
        }
      }
  const VectorBC u_b{sample_boundary<Vec3>(grid, u)};
  const MatField grad_u = gradient_matrix(uf, u_b);

  MatField m(grid);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const Mat3 a = qp[n].matrix(), l = lap[n].matrix();
    m[n] = a * l - l * a;
  }

  const double vol = grid.cell_volume();
  CommutatorPairing out;
  for (int k = 0; k < grid.n(2); ++k)
    for (int j = 0; j < grid.n(1); ++j)
      for (int i = 0; i < grid.n(0); ++i) {
        const std::size_t n = grid.index(i, j, k);
        const Mat3 lam = SkewTensor::skew_part(grad_u[n]).matrix();
        const Mat3 a = qp[n].matrix();
        out.volume_side += contract(lam * a - a * lam, lap[n].matrix()) * vol;

        // Row-wise divergence of m; quadratic extrapolation supplies the ghost rows at the walls.
        Vec3 div{0, 0, 0};
        const int c[3] = {i, j, k};
        for (int ax = 0; ax < 3; ++ax) {
          int lo[3] = {i, j, k}, hi[3] = {i, j, k};
          --lo[ax];
          ++hi[ax];
          Mat3 ml, mh;
          if (c[ax] == 0) {
            int far[3] = {i, j, k};
            far[ax] += 2;
            mh = m(hi[0], hi[1], hi[2]);
            ml = 3.0 * m[n] - 3.0 * mh + m(far[0], far[1], far[2]);
          } else if (c[ax] == grid.n(ax) - 1) {
            int far[3] = {i, j, k};
            far[ax] -= 2;
            ml = m(lo[0], lo[1], lo[2]);
            mh = 3.0 * m[n] - 3.0 * ml + m(far[0], far[1], far[2]);
          } else {
            ml = m(lo[0], lo[1], lo[2]);
            mh = m(hi[0], hi[1], hi[2]);
          }
          for (int r = 0; r < 3; ++r) div[r] += (mh(r, ax) - ml(r, ax)) / (2.0 * grid.h(ax));
        }
        out.divergence_side += dot(div, uf[n]) * vol;
      }
  return out;
}

}  // namespace anematic
