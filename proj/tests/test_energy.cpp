#include "doctest.h"

#include <cmath>
#include <random>

#include "anematic/energy.hpp"
#include "anematic/scenario.hpp"

using namespace anematic;

namespace {

Scenario resting() {
  Scenario s;
  s.cells = {8, 8, 8};
  s.initial_rho = "constant value=1.5";
  s.initial_c = "constant value=0.7";
  s.initial_q = "zero";
  s.initial_v = "zero";
  s.boundary_u = "zero";
  s.boundary_rho = "constant value=1.5";
  s.boundary_q = "zero";
  return s;
}

}  // namespace

TEST_CASE("energy of a resting uniform state") {
  const Scenario s = resting();
  const Model model = build_model(s);
  const State st = initial_state(s, model);
  const EnergyParts e = energy_parts(model, st);
  CHECK(e.kinetic == 0.0);
  CHECK(e.nematic == 0.0);
  CHECK(e.pressure == doctest::Approx(PressureLaw::isentropic(1.0, 2.0).potential(1.5)).epsilon(1e-14));
  CHECK(e.concentration == doctest::Approx(0.5 * 0.7 * 0.7).epsilon(1e-14));
}

TEST_CASE("ledger columns") {
  const auto& cols = ledger_columns();
  CHECK(cols.front() == "step");
  CHECK(cols.size() == ledger_values(LedgerRow{}).size());
  CHECK(ledger_header().find("residual") != std::string::npos);
}

TEST_CASE("defect compatibility constants") {
  const auto quad = defect_constants(PressureLaw::isentropic(1.0, 2.0));
  CHECK(quad[0] == 2.0);
  CHECK(quad[1] == 3.0);
  const auto stiff = defect_constants(PressureLaw::isentropic(1.0, 3.0));
  CHECK(stiff[0] == 2.0);
  CHECK(stiff[1] == 6.0);
}

TEST_CASE("identical resolutions leave no defect") {
  const Grid g({1.0, 1.0, 1.0}, {4, 4, 4});
  const Grid fine({1.0, 1.0, 1.0}, {8, 8, 8});
  SnapshotFields f{fine, 0.0, ScalarField(fine, 1.0), ScalarField(fine), VectorField(fine, {0.1, 0.0, -0.2}),
                   QField(fine)};
  SnapshotFields c{g, 0.0, ScalarField(g, 1.0), ScalarField(g), VectorField(g, {0.1, 0.0, -0.2}), QField(g)};
  const auto est = defect_diagnostic(c, f, PressureLaw::isentropic(1.0, 2.0));
  for (std::size_t p = 0; p < g.size(); ++p) {
    REQUIRE(std::abs(est.energy_defect[p]) <= 1e-14);
    REQUIRE(frobenius(est.reynolds_defect[p]) <= 1e-14);
  }
}

TEST_CASE("defect trace splits into kinetic and pressure parts") {
  const Grid g({1.0, 1.0, 1.0}, {4, 4, 4});
  const Grid fine({1.0, 1.0, 1.0}, {8, 8, 8});
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-0.5, 0.5), r(0.5, 2.0);
  SnapshotFields f{fine, 0.0, ScalarField(fine), ScalarField(fine), VectorField(fine), QField(fine)};
  for (std::size_t p = 0; p < fine.size(); ++p) {
    f.rho[p] = r(rng);
    f.u[p] = {u(rng), u(rng), u(rng)};
  }
  SnapshotFields c{g, 0.0, ScalarField(g, 1.0), ScalarField(g), VectorField(g), QField(g)};
  const auto est = defect_diagnostic(c, f, PressureLaw::isentropic(1.0, 2.0));
  for (std::size_t p = 0; p < g.size(); ++p) {
    REQUIRE(est.kinetic_defect[p] >= -1e-14);
    REQUIRE(est.pressure_defect[p] >= -1e-14);
    REQUIRE(std::abs(est.reynolds_defect[p].trace() - 2.0 * est.kinetic_defect[p] - 3.0 * est.pressure_defect[p]) <=
            1e-12);
  }
  CHECK(est.pass_rate() == 1.0);
}
