#include "doctest.h"

#include <random>

#include "anematic/error.hpp"
#include "anematic/tensor.hpp"

using namespace anematic;

namespace {

double max_entry_gap(const Mat3& a, const Mat3& b) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

const QTensor kUniaxialZ{-1.0 / 3.0, 0, 0, -1.0 / 3.0, 0};

}  // namespace

TEST_CASE("traceless projection") {
  CHECK(frobenius(project_s30(Mat3::identity())) == 0.0);

  Mat3 m = Mat3::identity();
  m(0, 1) = 2.0;
  const Mat3 want = [] {
    Mat3 w;
    w(0, 1) = w(1, 0) = 1.0;
    return w;
  }();
  CHECK(max_entry_gap(project_s30(m).matrix(), want) <= 1e-15);

  const QTensor q{0.3, -0.1, 0.2, 0.5, 0.7};
  CHECK(frobenius(project_s30(q.matrix()) - q) <= 1e-15);

  Mat3 bad;
  bad(2, 2) = std::nan("");
  CHECK_THROWS_AS(project_s30(bad), DomainError);
}

TEST_CASE("commutator with a skew tensor") {
  const QTensor q{1, 0, 0, -1, 0};
  const SkewTensor l{1, 0, 0};
  Mat3 want;
  want(0, 1) = want(1, 0) = 2.0;
  CHECK(max_entry_gap(commutator(q, l).matrix(), want) <= 1e-15);
  CHECK(frobenius(commutator(QTensor{}, l)) == 0.0);
  CHECK(frobenius(commutator(q, SkewTensor{})) == 0.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int n = 0; n < 1000; ++n) {
    const QTensor a{u(rng), u(rng), u(rng), u(rng), u(rng)};
    const SkewTensor w{u(rng), u(rng), u(rng)};
    const Mat3 full = a.matrix() * w.matrix() - w.matrix() * a.matrix();
    REQUIRE(max_entry_gap(commutator(a, w).matrix(), full) <= 1e-15);
  }
}

TEST_CASE("bulk molecular field") {
  CHECK(frobenius(bulk_molecular_field(QTensor{}, 0.7, {1.0, 0.5})) == 0.0);

  const QTensor h = bulk_molecular_field(kUniaxialZ, 1.0, {1.0, 1.0});
  CHECK(max_entry_gap(h.matrix(), Mat3::diag(1.0 / 9, 1.0 / 9, -2.0 / 9)) <= 1e-15);

  const QTensor h0 = bulk_molecular_field(kUniaxialZ, 1.0, {1.0, 0.0});
  CHECK(max_entry_gap(h0.matrix(), Mat3::diag(2.0 / 9, 2.0 / 9, -4.0 / 9)) <= 1e-15);

  // Q commutes with any polynomial in Q, so the bulk part drops out of the rotational stress.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int n = 0; n < 200; ++n) {
    const QTensor q{u(rng), u(rng), u(rng), u(rng), u(rng)};
    const Mat3 hm = bulk_molecular_field(q, 1.0 + u(rng), {1.0, 0.5}).matrix();
    REQUIRE(max_entry_gap(q.matrix() * hm, hm * q.matrix()) <= 1e-14);
    REQUIRE(hm.trace() == 0.0);
  }
}

TEST_CASE("scalar invariants") {
  const auto z = scalar_invariants(QTensor{});
  CHECK(z.tr_q2 == 0.0);
  CHECK(z.tr_q3 == 0.0);
  CHECK(z.frob4 == 0.0);

  const auto i = scalar_invariants(kUniaxialZ);
  CHECK(i.tr_q2 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(i.tr_q3 == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
  CHECK(i.frob4 == doctest::Approx(4.0 / 9.0).epsilon(1e-15));

  const double s = 0.37;
  CHECK(scalar_invariants(uniaxial(s, {1, 2, -1})).tr_q2 == doctest::Approx(2.0 * s * s / 3.0).epsilon(1e-14));
}
