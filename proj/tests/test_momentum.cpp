#include "doctest.h"

#include <cmath>
#include <numbers>

#include "anematic/error.hpp"
#include "anematic/momentum.hpp"

using namespace anematic;

namespace {

const Grid kGrid({1.0, 1.0, 1.0}, {16, 16, 16});
const QTensor kUniaxialZ{-1.0 / 3.0, 0, 0, -1.0 / 3.0, 0};

FlowFields resting(const Grid& g, double rho, double c, const QTensor& q) {
  return {ScalarField(g, rho), VectorField(g), MatField(g), ScalarField(g, c), QField(g, q)};
}

QBC wall(const Grid& g, const QTensor& q) { return QBC::dirichlet(std::vector<QTensor>(g.boundary_size(), q)); }

}  // namespace

TEST_CASE("active stress") {
  MomentumConfig cfg;
  cfg.sigma_star = -1.0;
  const auto s = assemble_stresses(cfg, RheologyLaw::newtonian(1.0, 0.0), PressureLaw::isentropic(1.0, 2.0),
                                   resting(kGrid, 1.0, 1.0, kUniaxialZ), wall(kGrid, kUniaxialZ));
  for (std::size_t p = 0; p < kGrid.size(); ++p) REQUIRE(frobenius(s.active[p] + kUniaxialZ.sym()) <= 1e-15);
}

TEST_CASE("newtonian shear stress") {
  FlowFields f = resting(kGrid, 1.0, 1.0, QTensor{});
  for (std::size_t p = 0; p < kGrid.size(); ++p) {
    f.u[p] = {kGrid.node(0, 0, 0)[1], 0, 0};
    f.grad_u[p](0, 1) = 1.0;
  }
  const auto s = assemble_stresses(MomentumConfig{}, RheologyLaw::newtonian(2.0, 0.0), PressureLaw::isentropic(1.0, 2.0),
                                   f, wall(kGrid, QTensor{}));
  for (std::size_t p = 0; p < kGrid.size(); ++p) REQUIRE(frobenius(s.viscous[p] - SymTensor{0, 1.0, 0, 0, 0, 0}) <= 1e-15);
}

TEST_CASE("resting fields exert no net force on the modes") {
  const VelocityBasis basis(kGrid, 2);
  const FlowFields f = resting(kGrid, 1.2, 0.7, QTensor{});
  const auto s = assemble_stresses(MomentumConfig{}, RheologyLaw::newtonian(1.0, 0.0), PressureLaw::isentropic(1.0, 2.0),
                                   f, wall(kGrid, QTensor{}));
  for (double r : galerkin_rhs(basis, s, f, 0.1)) REQUIRE(std::abs(r) <= 1e-12);
}

TEST_CASE("pressure gradient pairing matches a separable quadrature") {
  const double pi = std::numbers::pi;
  const VelocityBasis basis(kGrid, 2);
  FlowFields f = resting(kGrid, 1.0, 0.0, QTensor{});
  for (int k = 0; k < 16; ++k)
    for (int j = 0; j < 16; ++j)
      for (int i = 0; i < 16; ++i) f.rho(i, j, k) = 1.0 + 0.1 * std::sin(pi * kGrid.node(i, j, k)[0]);
  MomentumConfig cfg;
  cfg.sigma_star = 0.0;
  const auto s = assemble_stresses(cfg, RheologyLaw::newtonian(1.0, 0.0), PressureLaw::isentropic(1.0, 2.0), f,
                                   wall(kGrid, QTensor{}));
  const auto rhs = pair_with_modes(basis, momentum_flux(s, f), VectorField(kGrid));

  // Mode 0 is sqrt(8) sin(pi x) sin(pi y) sin(pi z) e1; the x factor pairs with p through its slope.
  double along = 0.0, across = 0.0;
  const double h = 1.0 / 16;
  for (int i = 0; i < 16; ++i) {
    const double x = (i + 0.5) * h;
    const double rho = 1.0 + 0.1 * std::sin(pi * x);
    along += rho * rho * std::sqrt(2.0) * pi * std::cos(pi * x) * h;
    across += std::sqrt(2.0) * std::sin(pi * x) * h;
  }
  CHECK(std::abs(rhs[0] - along * across * across) <= 1e-8);
}

TEST_CASE("momentum update") {
  const VelocityBasis basis(kGrid, 2);
  const ScalarField one(kGrid, 1.0);
  CHECK((scalar_mass_matrix(basis, one) - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-10);

  const VectorField ub(kGrid);
  std::vector<double> v(basis.size());
  for (int i = 0; i < basis.size(); ++i) v[i] = 0.01 * (i + 1);
  MomentumConfig cfg;
  const auto same = step_momentum(cfg, basis, ub, one, v, one, std::vector<double>(basis.size(), 0.0));
  for (int i = 0; i < basis.size(); ++i) REQUIRE(std::abs(same[i] - v[i]) <= 1e-14);

  std::vector<double> push(basis.size(), 0.0);
  push[0] = 1.0;
  const auto moved = step_momentum(cfg, basis, ub, one, v, one, push);
  CHECK(std::abs(moved[0] - v[0] - cfg.dt) <= 1e-12);
  for (int i = 1; i < basis.size(); ++i) REQUIRE(std::abs(moved[i] - v[i]) <= 1e-10);

  CHECK_THROWS_AS(step_momentum(cfg, basis, ub, one, v, ScalarField(kGrid, 0.0), push), IllConditionedError);
}
