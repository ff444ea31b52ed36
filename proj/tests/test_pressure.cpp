#include "doctest.h"

#include <cmath>

#include "anematic/error.hpp"
#include "anematic/pressure.hpp"

using namespace anematic;

TEST_CASE("isentropic pressure and potential") {
  const PressureLaw quad = PressureLaw::isentropic(1.0, 2.0);
  CHECK(quad.pressure(2.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(quad.potential(2.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(quad.pressure(0.0) == 0.0);
  CHECK(quad.potential(0.0) == 0.0);
  CHECK(PressureLaw::isentropic(1.0, 1.4).pressure(1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("potential solves P' rho - P = p") {
  for (double gamma : {1.2, 1.4, 2.0}) {
    const PressureLaw law = PressureLaw::isentropic(1.0, gamma, 10.0);
    for (int i = 1; i <= 100; ++i) {
      const double rho = 0.1 * i * 0.99;
      const double slope = law.potential_slope(rho);
      REQUIRE(std::abs(slope * rho - law.potential(rho) - law.pressure(rho)) <= 1e-10 * (1.0 + law.pressure(rho)));
    }
  }
}

TEST_CASE("S2 certificate of isentropic laws") {
  for (double gamma : {1.2, 1.4, 2.0}) {
    CAPTURE(gamma);
    const S2Certificate c = certify_s2(PressureLaw::isentropic(1.0, gamma));
    CHECK(c.pass);
    CHECK(c.a_lower == doctest::Approx(1.0 / (gamma - 1.0)).epsilon(1e-9));
    CHECK(c.a_upper == doctest::Approx(1.0 / (gamma - 1.0)).epsilon(1e-9));
  }
  const S2Certificate c = certify_s2(PressureLaw::isentropic(1.0, 2.0));
  CHECK(c.a_tilde == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("growth exponent recovered from a log-log fit") {
  for (double gamma : {1.2, 1.4, 2.0}) {
    const double fit = fit_growth_exponent(PressureLaw::isentropic(1.0, gamma), 1.0, 10.0);
    CHECK(std::abs(fit - gamma) <= 0.01 * gamma);
  }
}

TEST_CASE("a concave tabulated law is not certified") {
  std::vector<double> rho{0.0}, p{0.0};
  for (int i = 1; i <= 40; ++i) {
    rho.push_back(0.25 * i);
    p.push_back(std::sqrt(0.25 * i));
  }
  CHECK_FALSE(certify_s2(PressureLaw::general(rho, p)).pass);
}

TEST_CASE("general law rejects malformed tables") {
  CHECK_THROWS_AS(PressureLaw::general({0.0, 1.0, 0.5}, {0.0, 1.0, 2.0}), ConfigError);
  CHECK_THROWS_AS(PressureLaw::general({0.1, 1.0}, {0.0, 1.0}), ConfigError);
}
