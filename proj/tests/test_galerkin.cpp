#include "doctest.h"

#include <cmath>
#include <random>

#include "anematic/error.hpp"
#include "anematic/galerkin.hpp"

using namespace anematic;

TEST_CASE("sine modes are orthonormal under the midpoint rule") {
  for (auto [n, m] : {std::pair{4, 1}, std::pair{16, 2}}) {
    const VelocityBasis basis(Grid({1.0, 1.0, 1.0}, {n, n, n}), m);
    CHECK(basis.size() == 3 * m * m * m);
    const Eigen::MatrixXd gram = gram_matrix(basis);
    CHECK((gram - Eigen::MatrixXd::Identity(basis.size(), basis.size())).cwiseAbs().maxCoeff() <= 1e-10);
  }
  CHECK_THROWS_AS(VelocityBasis(Grid({1.0, 1.0, 1.0}, {7, 8, 8}), 2), ConfigError);
}

TEST_CASE("modes vanish on the walls") {
  const Grid g({1.0, 2.0, 0.5}, {8, 8, 8});
  const VelocityBasis basis(g, 2);
  for (const auto& f : boundary_faces(g))
    for (int i = 0; i < basis.size(); ++i) REQUIRE(norm(basis.mode(i, f.centroid)) == 0.0);
  for (int a = 0; a < 3; ++a)
    for (int k = 0; k < 2; ++k) {
      REQUIRE(basis.face_value(a)[k * (g.n(a) + 1)] == 0.0);
      REQUIRE(basis.face_value(a)[k * (g.n(a) + 1) + g.n(a)] == 0.0);
    }
}

TEST_CASE("synthesis and projection") {
  const Grid g({1.0, 1.0, 1.0}, {16, 16, 16});
  const VelocityBasis basis(g, 2);
  const VectorExpr channel = VectorExpr::channel(0.2, g.extent());

  const VectorField rest = synthesize(basis, std::vector<double>(basis.size(), 0.0), channel);
  for (int k = 0; k < 16; ++k)
    for (int j = 0; j < 16; ++j)
      for (int i = 0; i < 16; ++i) REQUIRE(rest(i, j, k) == channel.value(g.node(i, j, k)));

  std::vector<double> first(basis.size(), 0.0);
  first[0] = 1.0;
  const VectorField w = synthesize(basis, first, VectorExpr::zero());
  for (int k = 0; k < 16; ++k)
    for (int j = 0; j < 16; ++j)
      for (int i = 0; i < 16; ++i) {
        const Vec3 want = basis.mode(0, g.node(i, j, k));
        for (int c = 0; c < 3; ++c) REQUIRE(std::abs(w(i, j, k)[c] - want[c]) <= 1e-14);
      }

  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  std::vector<double> v(basis.size());
  for (double& x : v) x = nd(rng);
  const auto back = project(basis, synthesize(basis, v, VectorExpr::zero()));
  for (int i = 0; i < basis.size(); ++i) REQUIRE(std::abs(back[i] - v[i]) <= 1e-8);
}

TEST_CASE("sum-factorized kernels agree with the per-mode loops") {
  const Grid g({1.0, 1.5, 2.0}, {12, 8, 10});
  const VelocityBasis basis(g, 2);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  ScalarField rho(g);
  MatField a(g);
  VectorField f(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    rho[p] = 1.0 + 0.5 * u(rng);
    for (int i = 0; i < 3; ++i) {
      f[p][i] = u(rng);
      for (int j = 0; j < 3; ++j) a[p](i, j) = u(rng);
    }
  }
  std::vector<double> v(basis.size());
  for (double& x : v) x = u(rng);
  const VectorExpr ub = VectorExpr::shear(0.3, g.extent());

  CHECK((scalar_mass_matrix(basis, rho) - serial::scalar_mass_matrix(basis, rho)).cwiseAbs().maxCoeff() <= 1e-13);
  const auto pa = pair_with_modes(basis, a, f), pb = serial::pair_with_modes(basis, a, f);
  for (int i = 0; i < basis.size(); ++i) REQUIRE(std::abs(pa[i] - pb[i]) <= 1e-12);
  const auto sa = synthesize(basis, v, ub), sb = serial::synthesize(basis, v, ub);
  for (std::size_t p = 0; p < g.size(); ++p)
    for (int c = 0; c < 3; ++c) REQUIRE(std::abs(sa[p][c] - sb[p][c]) <= 1e-13);
}
