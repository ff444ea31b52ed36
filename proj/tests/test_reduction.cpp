#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "anematic/scenario.hpp"
#include "anematic/simulation.hpp"
#include "ns_reference.hpp"

using namespace anematic;

TEST_CASE("without order, concentration and activity the solver is compressible Navier-Stokes") {
  Scenario s;
  s.cells = {8, 8, 8};
  s.initial_c = "constant value=0";
  s.initial_q = "zero";
  s.boundary_q = "zero";
  s.sigma_star = 0.0;
  s.picard_tolerance = 1e-13;
  s.end_time = 0.01;

  const Model model = build_model(s);
  State state = initial_state(s, model);
  nsref::Reference ref(s);
  ref.set_state(state.rho.data, state.v);

  double worst = 0.0;
  for (long n = 0; n < s.steps(); ++n) {
    advance(model, state);
    ref.step();
    double drho = 0.0, dv = 0.0, qmax = 0.0;
    for (std::size_t p = 0; p < state.rho.size(); ++p) {
      drho = std::max(drho, std::abs(state.rho[p] - ref.rho()[p]));
      qmax = std::max(qmax, frobenius(state.q[p]) + std::abs(state.c[p]));
    }
    for (std::size_t i = 0; i < state.v.size(); ++i) dv = std::max(dv, std::abs(state.v[i] - ref.v()[i]));
    CAPTURE(n);
    CHECK(drho <= 1e-10);
    CHECK(dv <= 1e-10);
    CHECK(qmax == 0.0);
    worst = std::max({worst, drho, dv});
  }
  MESSAGE("largest gap ", worst);
  double vmax = 0.0;
  for (double x : state.v) vmax = std::max(vmax, std::abs(x));
  CHECK(vmax > 1e-4);
}
