#include "doctest.h"

#include <cmath>
#include <random>

#include "anematic/error.hpp"
#include "anematic/rheology.hpp"

using namespace anematic;

namespace {

const SymTensor kPlanar{1, 0, 0, -1, 0, 0};

SymTensor random_sym(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
}

// sup_r (s r - r^q) by brute force; for s <= 1 the maximand is negative beyond r = 1.
double legendre_1d(double s, double q) {
  double best = 0.0;
  for (double r = 0.0; r <= 1.0; r += 1e-6) best = std::max(best, s * r - std::pow(r, q));
  return best;
}

}  // namespace

TEST_CASE("potential values") {
  CHECK(potential(RheologyLaw::newtonian(2.0, 0.5), SymTensor{}) == 0.0);
  CHECK(potential(RheologyLaw::power_law(1.0, 4.0 / 3.0), SymTensor{}) == 0.0);
  CHECK(potential(RheologyLaw::newtonian(2.0, 0.0), kPlanar) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(potential(RheologyLaw::power_law(1.0, 4.0 / 3.0), kPlanar) ==
        doctest::Approx(std::pow(2.0, 2.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("subgradient values") {
  const SymTensor s = subgradient(RheologyLaw::newtonian(1.0, 1.0), SymTensor::scaled_identity(1.0));
  CHECK(frobenius(s - SymTensor::scaled_identity(4.0)) <= 1e-14);
  CHECK(frobenius(subgradient(RheologyLaw::power_law(1.0, 4.0 / 3.0), SymTensor{})) == 0.0);

  const SymTensor d{0.3, 0.1, -0.2, -0.1, 0.4, -0.2};
  CHECK(frobenius(subgradient(RheologyLaw::power_law(1.0, 2.0), d) - 2.0 * d) <= 1e-14);
}

TEST_CASE("newtonian subgradient is linear") {
  const RheologyLaw law = RheologyLaw::newtonian(1.3, 0.4);
  std::mt19937_64 rng(11);
  for (int n = 0; n < 100; ++n) {
    const SymTensor a = random_sym(rng, 2.0), b = random_sym(rng, 2.0);
    const SymTensor lhs = subgradient(law, 0.7 * a + (-1.9) * b);
    const SymTensor rhs = 0.7 * subgradient(law, a) + (-1.9) * subgradient(law, b);
    REQUIRE(frobenius(lhs - rhs) <= 1e-14);
  }
}

TEST_CASE("conjugate against one-dimensional Legendre transforms") {
  CHECK(conjugate(RheologyLaw::power_law(1.0, 4.0 / 3.0), SymTensor{}) == doctest::Approx(0.0).scale(1e-12));

  // Deviatoric unit stress: sup_r r - r^(4/3) = 27/256.
  const SymTensor s = (1.0 / std::sqrt(2.0)) * kPlanar;
  const double got = conjugate(RheologyLaw::power_law(1.0, 4.0 / 3.0), s);
  CHECK(got == doctest::Approx(legendre_1d(1.0, 4.0 / 3.0)).epsilon(1e-9));
  CHECK(got == doctest::Approx(27.0 / 256.0).epsilon(1e-9));

  // Quadratic self-duality for a deviatoric pair S = D.
  const RheologyLaw unit = RheologyLaw::newtonian(1.0, 0.0);
  CHECK(potential(unit, kPlanar) + conjugate(unit, kPlanar) == doctest::Approx(contract(kPlanar, kPlanar)).epsilon(1e-10));
}

TEST_CASE("Fenchel-Young equality and inequality") {
  std::mt19937_64 rng(5);
  for (const RheologyLaw& law : {RheologyLaw::newtonian(1.0, 0.2), RheologyLaw::power_law(1.0, 4.0 / 3.0)}) {
    for (int n = 0; n < 50; ++n) {
      const SymTensor d = random_sym(rng, 1.0);
      REQUIRE(std::abs(fenchel_young_residual(law, d, subgradient(law, d))) <= 1e-10);
      REQUIRE(fenchel_young_residual(law, d, random_sym(rng, 1.0)) <= 1e-12);
    }
  }
  CHECK(fenchel_young_residual(RheologyLaw::newtonian(1.0, 0.0), SymTensor{}, SymTensor{}) ==
        doctest::Approx(0.0).scale(1e-14));
}

TEST_CASE("mollification") {
  const RheologyLaw newtonian = RheologyLaw::newtonian(1.0, 0.0);
  const RheologyLaw smooth = mollify(newtonian, 0.05);
  for (const SymTensor& d : {kPlanar, SymTensor{0.2, 0.1, 0, 0.3, -0.2, 0.1}})
    CHECK(potential(smooth, d) == doctest::Approx(potential(newtonian, d)).epsilon(1e-8));

  const RheologyLaw power = RheologyLaw::power_law(1.0, 4.0 / 3.0);
  double previous = INFINITY;
  for (double delta : {0.1, 0.05, 0.025}) {
    const RheologyLaw m = mollify(power, delta);
    CHECK(std::abs(potential(m, SymTensor{})) <= 1e-10);
    double sup = 0.0;
    for (double d = 0.0; d <= 3.0; d += 0.01) sup = std::max(sup, std::abs(m.reduced(d, 0.0) - power.reduced(d, 0.0)));
    CHECK(sup < previous);
    previous = sup;
  }
}

TEST_CASE("coercivity certificate") {
  const auto raw = certify_coercivity(RheologyLaw::power_law(1.0, 4.0 / 3.0));
  CHECK(raw.pass);
  CHECK(raw.mu1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(raw.mu2 == doctest::Approx(0.0).scale(1e-12));

  const auto newtonian = certify_coercivity(RheologyLaw::newtonian(2.0, 0.0));
  CHECK(newtonian.pass);
  CHECK(newtonian.mu1 > 0.0);
  CHECK(newtonian.mu2 >= 0.0);

  const auto smooth = certify_coercivity(mollify(RheologyLaw::power_law(1.0, 4.0 / 3.0), 0.05));
  CHECK(smooth.pass);
  CHECK(smooth.mu2 > 0.0);
  CHECK(smooth.mu1 >= 0.5);
}

TEST_CASE("tabulated law needs a mollification radius") {
  RheologyTable t;
  t.d = {0.0, 1.0, 2.0, 3.0};
  t.t = {-1.0, 0.0, 1.0};
  for (double d : t.d)
    for (double tr : t.t) t.values.push_back(d * d + tr * tr);
  const RheologyLaw law = RheologyLaw::tabulated(t);
  CHECK_THROWS_AS(subgradient(law, kPlanar), ConfigError);
}
