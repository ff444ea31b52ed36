#include "doctest.h"

#include <cmath>
#include <numbers>

#include "anematic/continuity.hpp"
#include "anematic/error.hpp"

using namespace anematic;

namespace {

FaceVelocity still(const Grid& g) {
  FaceVelocity u{g, {}};
  for (int a = 0; a < 3; ++a) {
    std::array<int, 3> f = g.cells();
    f[a] += 1;
    u.normal[a].assign(static_cast<std::size_t>(f[0]) * f[1] * f[2], 0.0);
  }
  return u;
}

BoundaryDecomposition at_rest(const Grid& g) {
  return decompose_boundary(g, [](const Vec3&) -> Vec3 { return {0, 0, 0}; });
}

// Largest nodal error at t = 0.2 against rho = 1 + 0.1 cos(pi x) exp(-t), driven by the matching source.
double manufactured_error(int n, double dt) {
  const double eps = 0.01, pi = std::numbers::pi;
  const Grid g({1.0, 1.0, 1.0}, {n, 4, 4});
  const ContinuityConfig cfg{eps, dt, 1e-13};
  const auto exact = [&](double t) {
    return sample_field<double>(g, [&](const Vec3& x) { return 1.0 + 0.1 * std::cos(pi * x[0]) * std::exp(-t); });
  };
  const auto bd = at_rest(g);
  const std::vector<double> rho_b(g.boundary_size(), 1.0);
  ScalarField rho = exact(0.0);
  const int steps = static_cast<int>(std::lround(0.2 / dt));
  for (int s = 1; s <= steps; ++s) {
    const double t = s * dt;
    for (int k = 0; k < g.n(2); ++k)
      for (int j = 0; j < g.n(1); ++j)
        for (int i = 0; i < g.n(0); ++i) {
          const double x = g.node(i, j, k)[0];
          rho(i, j, k) += dt * 0.1 * std::cos(pi * x) * std::exp(-t) * (eps * pi * pi - 1.0);
        }
    rho = step_continuity(cfg, bd, rho_b, rho, still(g)).rho;
  }
  const ScalarField want = exact(steps * dt);
  double err = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) err = std::max(err, std::abs(rho[p] - want[p]));
  return err;
}

}  // namespace

TEST_CASE("uniform density at rest is stationary") {
  const Grid g({1.0, 1.0, 1.0}, {8, 8, 8});
  const ScalarField rho(g, 1.3);
  const auto out = step_continuity({0.1, 1e-3, 1e-13}, at_rest(g), std::vector<double>(g.boundary_size(), 1.3), rho,
                                   still(g));
  for (std::size_t p = 0; p < g.size(); ++p) REQUIRE(std::abs(out.rho[p] - 1.3) <= 1e-14);
  CHECK(out.flux.inflow == 0.0);
  CHECK(out.flux.outflow == 0.0);
}

TEST_CASE("oversized steps are rejected") {
  const Grid g({1.0, 1.0, 1.0}, {16, 16, 16});
  CHECK_THROWS_AS(step_continuity({0.1, 1e-2, 1e-13}, at_rest(g), std::vector<double>(g.boundary_size(), 1.0),
                                  ScalarField(g, 1.0), still(g)),
                  StepSizeError);
}

TEST_CASE("manufactured solution converges at first order under joint refinement") {
  const double coarse = manufactured_error(16, 0.01);
  const double fine = manufactured_error(32, 0.005);
  CAPTURE(coarse);
  CAPTURE(fine);
  CHECK(coarse / fine >= 1.6);
  CHECK(coarse / fine <= 2.4);
}
