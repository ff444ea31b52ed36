#include "doctest.h"

#include <cmath>
#include <numbers>

#include "anematic/nematic.hpp"

using namespace anematic;

namespace {

const Grid kSmall({1.0, 1.0, 1.0}, {6, 6, 6});
const QTensor kUniaxialZ{-1.0 / 3.0, 0, 0, -1.0 / 3.0, 0};

QBC uniform_wall(const Grid& g, const QTensor& q) { return QBC::dirichlet(std::vector<QTensor>(g.boundary_size(), q)); }

}  // namespace

TEST_CASE("constant concentration is unchanged") {
  NematicConfig cfg;
  const ScalarField c(kSmall, 0.8);
  const VectorField u = sample_field<Vec3>(kSmall, [](const Vec3& x) -> Vec3 { return {0.1 * x[1], 0.0, 0.0}; });
  const ScalarField out = step_concentration(cfg, c, u);
  for (std::size_t p = 0; p < c.size(); ++p) REQUIRE(out[p] == 0.8);
}

TEST_CASE("zero order stays zero") {
  NematicConfig cfg;
  const QField q(kSmall);
  const VectorField u = sample_field<Vec3>(kSmall, [](const Vec3& x) -> Vec3 { return {-x[1], x[0], 0.0}; });
  MatField grad(kSmall);
  for (std::size_t p = 0; p < grad.size(); ++p) {
    grad[p](0, 1) = -1.0;
    grad[p](1, 0) = 1.0;
  }
  const QBC wall = uniform_wall(kSmall, QTensor{});
  const QField out = step_q(cfg, q, ScalarField(kSmall, 1.0), u, grad, wall);
  for (std::size_t p = 0; p < out.size(); ++p) REQUIRE(frobenius(out[p]) == 0.0);
  const QField h = molecular_field(cfg, q, ScalarField(kSmall, 1.0), wall);
  for (std::size_t p = 0; p < h.size(); ++p) REQUIRE(frobenius(h[p]) == 0.0);
}

TEST_CASE("uniform order feels only the bulk field") {
  NematicConfig cfg;
  cfg.bulk = {1.0, 1.0};
  const QField q(kSmall, kUniaxialZ);
  const QField h = molecular_field(cfg, q, ScalarField(kSmall, 1.0), uniform_wall(kSmall, kUniaxialZ));
  for (std::size_t p = 0; p < h.size(); ++p)
    REQUIRE(frobenius(h[p] - QTensor{1.0 / 9, 0, 0, 1.0 / 9, 0}) <= 1e-14);
}

TEST_CASE("molecular field Laplacian is second order") {
  const double pi = std::numbers::pi;
  const QTensor dir{0.2, 0.1, -0.3, 0.05, 0.15};
  auto gap = [&](int n) {
    const Grid g({1.0, 1.0, 1.0}, {n, n, n});
    NematicConfig cfg;
    cfg.bulk = {1.0, 0.0};
    const ScalarField c(g, 1.0);
    const auto profile = [&](const Vec3& x) { return std::sin(pi * x[0]) * std::sin(pi * x[1]) * std::sin(pi * x[2]); };
    const QField q = sample_field<QTensor>(g, [&](const Vec3& x) { return profile(x) * dir; });
    const QField h = molecular_field(cfg, q, c, uniform_wall(g, QTensor{}));
    double worst = 0.0;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const QTensor qq = q(i, j, k);
          const QTensor want = (-3.0 * pi * pi * profile(g.node(i, j, k))) * dir + bulk_molecular_field(qq, 1.0, cfg.bulk);
          worst = std::max(worst, frobenius(h(i, j, k) - want));
        }
    return worst;
  };
  const double e16 = gap(16), e32 = gap(32);
  CAPTURE(e16);
  CAPTURE(e32);
  CHECK(std::log2(e16 / e32) >= 1.9);
}

TEST_CASE("uniform order relaxes along the amplitude ODE") {
  // u = 0, b = 0, c = c*: |Q(t)| = |Q0| / sqrt(1 + 2 Gamma c* |Q0|^2 t).
  NematicConfig cfg;
  cfg.gamma = 1.0;
  cfg.bulk = {1.0, 0.0};
  cfg.dt = 1e-3;
  const Grid g({1.0, 1.0, 1.0}, {4, 4, 4});
  QField q(g, kUniaxialZ);
  const ScalarField c(g, 1.0);
  const VectorField u(g);
  const MatField grad(g);
  const double q0 = frobenius(kUniaxialZ);
  const auto amplitude = [q0](double t) { return q0 / std::sqrt(1.0 + 2.0 * q0 * q0 * t); };
  // Wall data follow the uniform solution at the new time level.
  for (int s = 1; s <= 1000; ++s)
    q = step_q(cfg, q, c, u, grad, uniform_wall(g, (amplitude(s * cfg.dt) / q0) * kUniaxialZ));
  const double want = amplitude(1.0);
  for (std::size_t p = 0; p < q.size(); ++p) REQUIRE(std::abs(frobenius(q[p]) - want) <= 0.01 * want);
}
