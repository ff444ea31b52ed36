#include "doctest.h"

#include <cmath>

#include "anematic/domain.hpp"

using namespace anematic;

namespace {

const Grid kUnit({1.0, 1.0, 1.0}, {16, 16, 16});

bool interior(const Grid& g, int i, int j, int k) {
  return i > 0 && j > 0 && k > 0 && i < g.n(0) - 1 && j < g.n(1) - 1 && k < g.n(2) - 1;
}

VectorBC wall_values(const Grid& g, Vec3 (*f)(const Vec3&)) {
  return {sample_boundary<Vec3>(g, f)};
}

}  // namespace

TEST_CASE("central differences are exact on low-order polynomials") {
  const auto lin = sample_field<double>(kUnit, [](const Vec3& x) { return x[0]; });
  const auto quad = sample_field<double>(kUnit, [](const Vec3& x) { return x[0] * x[0]; });
  const auto g = gradient(lin, ScalarBC::neumann());
  const auto l = laplacian(quad, ScalarBC::neumann());
  for (int k = 0; k < 16; ++k)
    for (int j = 0; j < 16; ++j)
      for (int i = 0; i < 16; ++i) {
        if (!interior(kUnit, i, j, k)) continue;
        REQUIRE(std::abs(g(i, j, k)[0] - 1.0) <= 1e-12);
        REQUIRE(std::abs(g(i, j, k)[1]) <= 1e-12);
        REQUIRE(std::abs(l(i, j, k) - 2.0) <= 1e-12);
      }
}

TEST_CASE("strain and spin of simple flows") {
  auto rotation = [](const Vec3& x) -> Vec3 { return {-x[1], x[0], 0.0}; };
  auto dilation = [](const Vec3& x) -> Vec3 { return x; };
  auto shear = [](const Vec3& x) -> Vec3 { return {x[1], 0.0, 0.0}; };

  const auto [dr, wr] = sym_skew_gradient(sample_field<Vec3>(kUnit, rotation), wall_values(kUnit, rotation));
  const auto [dd, wd] = sym_skew_gradient(sample_field<Vec3>(kUnit, dilation), wall_values(kUnit, dilation));
  const auto [ds, ws] = sym_skew_gradient(sample_field<Vec3>(kUnit, shear), wall_values(kUnit, shear));
  const auto div = divergence(sample_field<Vec3>(kUnit, shear), wall_values(kUnit, shear));
  for (std::size_t p = 0; p < kUnit.size(); ++p) {
    REQUIRE(frobenius(dr[p]) <= 1e-12);
    REQUIRE(std::abs(wr[p].xy + 1.0) <= 1e-12);
    REQUIRE(frobenius(dd[p] - SymTensor::scaled_identity(1.0)) <= 1e-12);
    REQUIRE(std::abs(wd[p].xy) + std::abs(wd[p].xz) + std::abs(wd[p].yz) <= 1e-12);
    REQUIRE(std::abs(ds[p].xy - 0.5) <= 1e-12);
    REQUIRE(std::abs(std::abs(ws[p].xy) - 0.5) <= 1e-12);
    REQUIRE(std::abs(div[p]) <= 1e-12);
  }
}

TEST_CASE("inflow and outflow split of the boundary") {
  const Grid g({1.0, 1.0, 1.0}, {4, 4, 4});
  const auto bd = decompose_boundary(g, [](const Vec3&) -> Vec3 { return {1.0, 0.0, 0.0}; });
  for (const auto& f : bd.faces) {
    if (f.axis == 0 && !f.high) {
      REQUIRE(f.inflow);
      REQUIRE(f.normal_velocity == -1.0);
    } else {
      REQUIRE_FALSE(f.inflow);
    }
  }
  CHECK(bd.inflow_count() == 16);

  const auto back = decompose_boundary(g, [](const Vec3&) -> Vec3 { return {-1.0, 0.0, 0.0}; });
  for (const auto& f : back.faces) REQUIRE(f.inflow == (f.axis == 0 && f.high));

  const auto still = decompose_boundary(g, [](const Vec3&) -> Vec3 { return {0.0, 0.0, 0.0}; });
  CHECK(still.inflow_count() == 0);
}

TEST_CASE("midpoint quadrature") {
  CHECK(std::abs(volume_integral(ScalarField(kUnit, 1.0)) - 1.0) <= 1e-14);
  const auto bd = decompose_boundary(kUnit, [](const Vec3&) -> Vec3 { return {0.0, 0.0, 0.0}; });
  CHECK(std::abs(surface_integral(bd, std::vector<double>(kUnit.boundary_size(), 1.0), BoundarySubset::all) - 6.0) <=
        1e-14);
  const auto x = sample_field<double>(kUnit, [](const Vec3& p) { return p[0]; });
  CHECK(std::abs(volume_integral(x) - 0.5) <= 1e-3);
}

TEST_CASE("OpenMP kernels agree with the serial references") {
  const Grid g({1.0, 2.0, 1.5}, {12, 10, 8});
  const auto f = sample_field<double>(g, [](const Vec3& x) { return std::sin(3 * x[0]) * std::cos(x[1]) + x[2] * x[2]; });
  const auto q = sample_field<QTensor>(g, [](const Vec3& x) {
    return QTensor{std::sin(x[0]), x[1] * x[2], std::cos(x[2]), x[0] * x[1], 0.3};
  });
  const ScalarBC sbc = ScalarBC::dirichlet(std::vector<double>(g.boundary_size(), 0.4));
  const QBC qbc = QBC::dirichlet(std::vector<QTensor>(g.boundary_size(), QTensor{0.1, 0, 0, -0.05, 0}));

  const auto a = laplacian(f, sbc), b = serial::laplacian(f, sbc);
  const auto ga = gradient(f, sbc), gb = serial::gradient(f, sbc);
  const auto qa = laplacian(q, qbc), qb = serial::laplacian(q, qbc);
  for (std::size_t p = 0; p < g.size(); ++p) {
    REQUIRE(a[p] == b[p]);
    REQUIRE(ga[p] == gb[p]);
    REQUIRE(frobenius(qa[p] - qb[p]) == 0.0);
  }
  CHECK(std::abs(volume_integral(f) - serial::volume_integral(f)) <= 1e-13);
}
