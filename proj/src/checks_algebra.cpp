#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "anematic/pressure.hpp"
#include "anematic/rheology.hpp"
#include "anematic/tensor.hpp"
#include "check_support.hpp"

namespace anematic::checks {

CheckLine at_most(const std::string& name, double worst, double limit) {
  return {name, worst <= limit, worst, limit};
}

CheckLine at_least(const std::string& name, double worst, double limit) {
  return {name, worst >= limit, worst, limit};
}

std::vector<CheckLine> tensor(unsigned long seed) {
  Sampler rng(seed);
  constexpr int kSamples = 1000;
  double trace = 0, asym = 0, idem = 0, comm = 0, bulk_trace = 0, bulk_comm = 0, skew = 0;
  for (int s = 0; s < kSamples; ++s) {
    const Mat3 m = rng.mat(2.0);
    const QTensor p = project_s30(m);
    const Mat3 pm = p.matrix();
    trace = std::max(trace, std::abs(pm.trace()));
    asym = std::max(asym, max_abs(pm - pm.transpose()));
    idem = std::max(idem, frobenius(project_s30(pm) - p));

    const QTensor q = rng.q(1.0);
    const SkewTensor lam = rng.skew(1.0);
    const Mat3 lm = lam.matrix();
    skew = std::max(skew, max_abs(lm + lm.transpose()));
    const Mat3 full = q.matrix() * lm - lm * q.matrix();
    comm = std::max(comm, max_abs(commutator(q, lam).matrix() - full) / (1.0 + max_abs(full)));

    const QTensor h = bulk_molecular_field(q, rng.uniform(0.0, 2.0), {rng.uniform(0.1, 2.0), rng.uniform(-1.0, 1.0)});
    bulk_trace = std::max(bulk_trace, std::abs(contract(h.matrix(), Mat3::identity())));
    const Mat3 hq = q.matrix() * h.matrix() - h.matrix() * q.matrix();
    bulk_comm = std::max(bulk_comm, max_abs(hq) / (1.0 + frobenius(h) * frobenius(q)));
  }
  return {
      {"projection_traceless_exact", trace == 0.0, trace, 0.0},
      {"projection_symmetric_exact", asym == 0.0, asym, 0.0},
      {"skew_reconstruction_exact", skew == 0.0, skew, 0.0},
      at_most("projection_idempotent", idem, 1e-15),
      at_most("commutator_matches_matrix_product", comm, 1e-14),
      {"bulk_field_traceless_exact", bulk_trace == 0.0, bulk_trace, 0.0},
      at_most("bulk_field_commutes_with_q", bulk_comm, 1e-14),
  };
}

namespace {

// Separable convex potential sampled on a (d, t) grid, so its bilinear interpolant stays convex.
RheologyLaw sample_table_law() {
  RheologyTable tab;
  for (int i = 0; i <= 48; ++i) tab.d.push_back(0.25 * i);
  for (int j = -48; j <= 48; ++j) tab.t.push_back(0.25 * j);
  for (double d : tab.d)
    for (double t : tab.t) tab.values.push_back(0.5 * d * d + t * t / 6.0 + 0.5 * std::pow(d, 4.0 / 3.0));
  return RheologyLaw::tabulated(std::move(tab));
}

struct NamedLaw {
  std::string name;
  RheologyLaw law;
  double fy_tol;  // Fenchel-Young equality tolerance
  double convex_tol;
};

std::vector<NamedLaw> law_catalog() {
  return {
      {"newtonian", RheologyLaw::newtonian(1.0, 0.5), 1e-10, 1e-12},
      {"power_law", RheologyLaw::power_law(1.0, 4.0 / 3.0), 1e-10, 1e-12},
      {"power_law_mollified", mollify(RheologyLaw::power_law(1.0, 4.0 / 3.0), 0.05), 1e-10, 1e-12},
      {"tabulated_mollified", mollify(sample_table_law(), 0.1), 1e-6, 1e-12},
  };
}

double sup_mollification_gap(double delta) {
  const RheologyLaw raw = RheologyLaw::power_law(1.0, 4.0 / 3.0);
  const RheologyLaw mol = mollify(raw, delta);
  double gap = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double d = 4.0 * i / 400.0;
    gap = std::max(gap, std::abs(mol.reduced(d, 0.0) - raw.reduced(d, 0.0)));
  }
  return gap;
}

}  // namespace

std::vector<CheckLine> rheology(unsigned long seed) {
  Sampler rng(seed);
  constexpr int kSamples = 1000;
  std::vector<CheckLine> out;
  for (const auto& [name, law, fy_tol, convex_tol] : law_catalog()) {
    double neg = 0.0, convex = -INFINITY, monotone = INFINITY, fy_eq = 0.0, fy_ineq = -INFINITY;
    const double origin = std::abs(potential(law, SymTensor{}));
    for (int s = 0; s < kSamples; ++s) {
      const SymTensor d1 = rng.sym(1.5), d2 = rng.sym(1.5);
      const double f1 = potential(law, d1), f2 = potential(law, d2);
      neg = std::min({neg, f1, f2});
      convex = std::max(convex, potential(law, 0.5 * (d1 + d2)) - 0.5 * (f1 + f2));
      const SymTensor s1 = subgradient(law, d1), s2 = subgradient(law, d2);
      monotone = std::min(monotone, contract(s1 - s2, d1 - d2));
      fy_eq = std::max(fy_eq, std::abs(fenchel_young_residual(law, d1, s1)) / (1.0 + f1));
      fy_ineq = std::max(fy_ineq, fenchel_young_residual(law, d1, s2));
    }
    // Superlinear growth of the conjugate along rays.
    double growth = INFINITY;
    for (int s = 0; s < 20; ++s) {
      SymTensor stress = subgradient(law, rng.sym(0.3));
      if (!law.depends_on_trace()) stress = deviator(stress);
      double prev = conjugate(law, stress);
      const double first = prev;
      for (double k : {2.0, 4.0, 8.0}) {
        const double v = conjugate(law, k * stress) / k;
        growth = std::min(growth, v - prev);
        prev = v;
      }
      if (first > 0.0) growth = std::min(growth, prev / first - 1.0);
    }
    out.push_back(at_least(name + ".potential_nonnegative", neg, 0.0));
    out.push_back(at_most(name + ".potential_zero_at_origin", origin, 1e-10));
    out.push_back(at_most(name + ".midpoint_convexity", convex, convex_tol));
    out.push_back(at_least(name + ".subgradient_monotone", monotone, -1e-10));
    out.push_back(at_most(name + ".fenchel_young_equality", fy_eq, fy_tol));
    out.push_back(at_most(name + ".fenchel_young_inequality", fy_ineq, 1e-12));
    out.push_back(at_least(name + ".conjugate_superlinear", growth, 0.0));
    const auto cert = certify_coercivity(law);
    out.push_back({name + ".coercivity_certified", cert.pass, cert.mu1, 0.5 * law.coercivity_modulus()});
  }

  // Newtonian subgradient is linear (up to one rounding per entry).
  const RheologyLaw newton = RheologyLaw::newtonian(1.3, 0.4);
  double linear = 0.0;
  for (int s = 0; s < kSamples; ++s) {
    const SymTensor d1 = rng.sym(1.0), d2 = rng.sym(1.0);
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    const SymTensor lhs = subgradient(newton, a * d1 + b * d2);
    const SymTensor rhs = a * subgradient(newton, d1) + b * subgradient(newton, d2);
    linear = std::max(linear, frobenius(lhs - rhs));
  }
  out.push_back(at_most("newtonian.subgradient_linear", linear, 1e-14));

  // Convolving a quadratic only adds a constant, which the normalization removes.
  const RheologyLaw quad = RheologyLaw::newtonian(2.0, 0.3);
  double quad_gap = 0.0;
  for (int s = 0; s < 200; ++s) {
    const double d = rng.uniform(0.0, 3.0), t = rng.uniform(-3.0, 3.0);
    const double mol = mollified_by_quadrature([&](double x, double y) { return quad.raw_reduced(x, y); }, 0.1, d, t);
    quad_gap = std::max(quad_gap, std::abs(mol - quad.raw_reduced(d, t)));
  }
  out.push_back(at_most("mollified_quadratic_unchanged", quad_gap, 1e-8));

  const double g1 = sup_mollification_gap(0.1), g2 = sup_mollification_gap(0.05), g3 = sup_mollification_gap(0.025);
  out.push_back({"mollification_gap_decreasing", g1 > g2 && g2 > g3, g3, g2});
  double origin = 0.0;
  for (double delta : {0.1, 0.05, 0.025})
    origin = std::max(origin, std::abs(potential(mollify(RheologyLaw::power_law(1.0, 4.0 / 3.0), delta), SymTensor{})));
  out.push_back(at_most("mollified_zero_at_origin", origin, 1e-10));
  return out;
}

std::vector<CheckLine> pressure(unsigned long seed) {
  (void)seed;
  std::vector<CheckLine> out;

  // Convex increasing samples of p = rho + rho^2 on [0, 10].
  std::vector<double> rho, p;
  for (int i = 0; i <= 40; ++i) {
    const double r = 0.25 * i;
    rho.push_back(r);
    p.push_back(r + r * r);
  }
  struct Named {
    std::string name;
    PressureLaw law;
  };
  const std::vector<Named> laws = {
      {"isentropic_1.2", PressureLaw::isentropic(1.0, 1.2, 10.0)},
      {"isentropic_1.4", PressureLaw::isentropic(1.0, 1.4, 10.0)},
      {"isentropic_2", PressureLaw::isentropic(1.0, 2.0, 10.0)},
      {"general", PressureLaw::general(rho, p)},
  };
  for (const auto& [name, law] : laws) {
    const double hi = law.rho_max();
    const double h = 1e-5 * hi;
    double neg = 0.0, ode = 0.0, integrated = 0.0, convex = INFINITY, mono = INFINITY;
    const double origin = std::abs(law.pressure(0.0)) + std::abs(law.potential(0.0));
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double r = hi * i / 101.0;
      neg = std::min({neg, law.pressure(r), law.potential(r)});
      const double slope = (law.potential(r + h) - law.potential(r - h)) / (2.0 * h);
      ode = std::max(ode, std::abs(slope * r - law.potential(r) - law.pressure(r)));
      // (P / rho)' = p / rho^2 between consecutive samples, scaled back to a pointwise residual.
      if (i > 1) {
        // Split at the table knots so every piece is smooth.
        double flux = 0.0, a = prev;
        while (a < r) {
          const double b = std::min(r, 0.25 * (std::floor(a / 0.25 + 1e-9) + 1.0));
          flux += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
              [&](double x) { return law.pressure(x) / (x * x); }, a, b, 8, 1e-14);
          a = b;
        }
        const double gap = law.potential(r) / r - law.potential(prev) / prev - flux;
        integrated = std::max(integrated, std::abs(gap) / (1.0 / prev - 1.0 / r));
      }
      prev = r;
    }
    constexpr int kGrid = 1000;
    const double step = hi / kGrid;
    for (int i = 1; i < kGrid; ++i) {
      const double a = law.pressure(step * (i - 1)), b = law.pressure(step * i), c = law.pressure(step * (i + 1));
      convex = std::min(convex, a - 2 * b + c);
      mono = std::min(mono, c - b);
    }
    out.push_back(at_least(name + ".nonnegative", neg, 0.0));
    out.push_back(at_most(name + ".zero_at_origin", origin, 0.0));
    out.push_back(at_most(name + ".potential_identity", ode, 1e-8));
    out.push_back(at_most(name + ".potential_identity_integrated", integrated, 1e-8));
    out.push_back({name + ".pressure_increasing", mono > 0.0, mono, 0.0});
    const auto cert = certify_s2(law);
    if (law.kind() == PressureLaw::Kind::isentropic) {
      const double expect = 1.0 / (law.gamma() - 1.0);
      out.push_back({name + ".s2_certified", cert.pass, cert.a_upper, cert.a_lower});
      out.push_back(at_most(name + ".s2_constants_exact",
                            std::max(std::abs(cert.a_lower - expect), std::abs(cert.a_upper - expect)), 0.0));
      const double fit = fit_growth_exponent(law, 1.0, 10.0);
      out.push_back(at_most(name + ".growth_exponent_fit", std::abs(fit - law.gamma()) / law.gamma(), 0.01));
    }
    // A certified law has a convex pressure.
    out.push_back({name + ".certified_implies_convex", !cert.pass || convex >= -1e-10, convex, -1e-10});
  }

  // Convex potential with a pressure that turns concave fails the certificate.
  std::vector<double> bad_p;
  for (double r : rho) bad_p.push_back(10.0 * std::sqrt(r));
  const auto bad = certify_s2(PressureLaw::general(rho, bad_p));
  out.push_back({"concave_law_rejected", !bad.pass, bad.a_upper, 1e6});
  return out;
}

}  // namespace anematic::checks
