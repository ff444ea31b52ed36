// Desk-scale acceptance: one PASS/FAIL line per criterion, nonzero exit if any line fails.
// Usage: acceptance [scenario_dir]
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "anematic/checks.hpp"
#include "anematic/energy.hpp"
#include "anematic/run.hpp"
#include "ns_reference.hpp"

using namespace anematic;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void emit(int id, const char* name, const Verdict& v) {
  if (!v.pass) ++failures;
  std::printf("%s  C%-2d %-28s %s\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

struct Run {
  Scenario scenario;
  RunReport report;
};

Run simulate(const std::string& path) {
  Run r{Scenario::load(path), {}};
  RunOptions opt;
  opt.write_files = false;
  const auto t0 = std::chrono::steady_clock::now();
  r.report = run(r.scenario, opt);
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  std::fprintf(stderr, "  %s: %zu steps, %.1f s\n", path.c_str(), r.report.rows.size(), dt.count());
  return r;
}

double ratio(double coarse, double fine) { return fine > 0.0 ? coarse / fine : INFINITY; }

SnapshotFields fields_of(const Run& r) {
  const Model model = build_model(r.scenario);
  const State& s = r.report.final_state;
  return {model.grid, s.time, s.rho, s.c, synthesize(model.basis, s.v, model.u_b), s.q};
}

Verdict q_structure(const std::vector<const Run*>& runs) {
  double worst = 0.0;
  for (const Run* r : runs)
    for (const auto& row : r->report.rows) worst = std::max({worst, row.q_trace, row.q_asymmetry});
  return {worst == 0.0, fmt("max |tr Q|, |Q - Q^T| = %.3e (exact zero required)", worst)};
}

Verdict concentration_bounds(const std::vector<const Run*>& runs) {
  double lo = INFINITY, hi = -INFINITY;
  for (const Run* r : runs)
    for (const auto& row : r->report.rows) {
      lo = std::min(lo, row.c_min);
      hi = std::max(hi, row.c_max);
    }
  return {lo >= 0.5 - 1e-12 && hi <= 1.5 + 1e-12, fmt("c in [%.15g, %.15g], allowed [0.5, 1.5] +- 1e-12", lo, hi)};
}

Verdict density_bounds(const std::vector<const Run*>& runs) {
  double worst = -INFINITY;
  for (const Run* r : runs)
    for (const auto& row : r->report.rows)
      worst = std::max({worst, (row.rho_lower - row.rho_min) / row.rho_lower, (row.rho_max - row.rho_upper) / row.rho_upper});
  return {worst <= 1e-6, fmt("worst relative excess %.3e, limit 1e-6", worst)};
}

RheologyLaw table_law() {
  RheologyTable tab;
  for (int i = 0; i <= 48; ++i) tab.d.push_back(0.25 * i);
  for (int j = -48; j <= 48; ++j) tab.t.push_back(0.25 * j);
  for (double d : tab.d)
    for (double t : tab.t) tab.values.push_back(0.5 * d * d + t * t / 6.0 + 0.5 * std::pow(d, 4.0 / 3.0));
  return mollify(RheologyLaw::tabulated(std::move(tab)), 0.1);
}

Verdict fenchel_young() {
  struct Case {
    RheologyLaw law;
    double tol;
  };
  const std::vector<Case> cases = {{RheologyLaw::newtonian(1.0, 0.0), 1e-10},
                                   {mollify(RheologyLaw::power_law(1.0, 4.0 / 3.0), 0.05), 1e-10},
                                   {table_law(), 1e-6}};
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  auto sym = [&] { return SymTensor{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)}; };
  double eq_ratio = 0.0, ineq = -INFINITY;
  for (const auto& c : cases)
    for (int n = 0; n < 1000; ++n) {
      const SymTensor d = sym();
      eq_ratio = std::max(eq_ratio, std::abs(fenchel_young_residual(c.law, d, subgradient(c.law, d))) / c.tol);
      ineq = std::max(ineq, fenchel_young_residual(c.law, d, subgradient(c.law, sym())));
    }
  return {eq_ratio <= 1.0 && ineq <= 1e-12,
          fmt("equality at %.3f of tolerance, mismatched max %.3e (limit 1e-12)", eq_ratio, ineq)};
}

Verdict mollification() {
  const RheologyLaw raw = RheologyLaw::power_law(1.0, 4.0 / 3.0);
  double gaps[3], origin = 0.0;
  bool certified = true;
  double mu1 = INFINITY;
  const double deltas[3] = {0.1, 0.05, 0.025};
  for (int k = 0; k < 3; ++k) {
    const RheologyLaw m = mollify(raw, deltas[k]);
    gaps[k] = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double d = 4.0 * i / 400.0;
      gaps[k] = std::max(gaps[k], std::abs(m.reduced(d, 0.0) - raw.reduced(d, 0.0)));
    }
    origin = std::max(origin, std::abs(potential(m, SymTensor{})));
    const auto cert = certify_coercivity(m);
    certified = certified && cert.pass;
    mu1 = std::min(mu1, cert.mu1);
  }
  const bool pass = gaps[1] < gaps[0] && gaps[2] < gaps[1] && origin <= 1e-10 && certified && mu1 >= 0.5;
  return {pass, fmt("sup gaps %.3e > %.3e > %.3e, |F(0)| %.1e", gaps[0], gaps[1], gaps[2], origin) +
                    fmt(", min mu1 %.3f (>= 0.5)", mu1)};
}

Verdict pressure_law() {
  double ode = 0.0, constants = 0.0, fit = 0.0;
  bool certified = true;
  for (double gamma : {1.2, 1.4, 2.0}) {
    const PressureLaw law = PressureLaw::isentropic(1.0, gamma, 10.0);
    const double hi = law.rho_max(), h = 1e-5 * hi;
    for (int i = 1; i <= 100; ++i) {
      const double r = hi * i / 101.0;
      const double slope = (law.potential(r + h) - law.potential(r - h)) / (2.0 * h);
      ode = std::max(ode, std::abs(slope * r - law.potential(r) - law.pressure(r)));
    }
    const auto cert = certify_s2(law);
    certified = certified && cert.pass;
    const double want = 1.0 / (gamma - 1.0);
    constants = std::max({constants, std::abs(cert.a_lower - want) / want, std::abs(cert.a_upper - want) / want});
    fit = std::max(fit, std::abs(fit_growth_exponent(law, 1.0, 10.0) - gamma) / gamma);
  }
  const bool pass = ode <= 1e-8 && certified && constants <= 1e-12 && fit <= 0.01;
  return {pass, fmt("identity residual %.3e (limit 1e-8), constants rel %.1e, exponent fit rel %.2e", ode, constants, fit)};
}

double worst_step_margin(const Run& r) {
  double w = INFINITY;
  for (const auto& row : r.report.rows) w = std::min(w, row.residual / row.tolerance);
  return w;
}

Verdict energy_inequality(const Run& contractile, const Run& extensile, const Run& refined) {
  // Residual / tolerance; -1 is the edge of the admissible band.
  const double a = worst_step_margin(contractile), b = worst_step_margin(extensile), c = worst_step_margin(refined);
  return {std::min({a, b, c}) >= -1.0,
          fmt("min residual/tol: contractile %.3g, extensile %.3g, refined %.3g (>= -1)", a, b, c)};
}

Verdict weak_residuals(const Run& coarse, const Run& fine) {
  const WeakResiduals& c = *coarse.report.residuals;
  const WeakResiduals& f = *fine.report.residuals;
  const double r[4] = {ratio(WeakResiduals::aggregate(c.continuity()), WeakResiduals::aggregate(f.continuity())),
                       ratio(WeakResiduals::aggregate(c.momentum()), WeakResiduals::aggregate(f.momentum())),
                       ratio(WeakResiduals::aggregate(c.concentration()), WeakResiduals::aggregate(f.concentration())),
                       ratio(WeakResiduals::aggregate(c.nematic()), WeakResiduals::aggregate(f.nematic()))};
  const std::size_t tests = std::min({c.continuity().size(), c.momentum().size(), c.concentration().size(),
                                      c.nematic().size()});
  bool pass = tests >= 6;
  for (double x : r) pass = pass && x >= 1.5 && x <= 3.0;
  return {pass, fmt("ratios continuity %.2f momentum %.2f concentration %.2f nematic %.2f", r[0], r[1], r[2], r[3]) +
                    " in [1.5, 3], " + std::to_string(tests) + "+ tests each"};
}

Verdict renormalization(const Run& coarse, const Run& fine) {
  const double rc = std::abs(coarse.report.residuals->renormalized());
  const double rf = std::abs(fine.report.residuals->renormalized());
  double sign = -INFINITY;
  for (const Run* r : {&coarse, &fine})
    for (const auto& row : r->report.rows) sign = std::max(sign, row.renorm_eps_term);
  const double q = ratio(rc, rf);
  return {q >= 1.5 && sign <= 0.0,
          fmt("residual %.3e -> %.3e (ratio %.2f >= 1.5), max eps-term %.3e (<= 0)", rc, rf, q, sign)};
}

Verdict defect(const Run& coarse, const Run& fine) {
  const Model model = build_model(coarse.scenario);
  const auto est = defect_diagnostic(fields_of(coarse), fields_of(fine), model.pressure);
  const auto k = defect_constants(model.pressure);
  return {est.pass_rate() >= 0.95 && k[0] == 2.0 && k[1] == 3.0,
          fmt("sandwich holds in %.4f of %.0f cells (>= 0.95), constants %g, %g", est.pass_rate(),
              double(est.cells_checked), k[0], k[1])};
}

Verdict reduction(const std::string& path) {
  const Scenario s = Scenario::load(path);
  const Model model = build_model(s);
  State state = initial_state(s, model);
  nsref::Reference ref(s);
  ref.set_state(state.rho.data, state.v);
  double worst = 0.0, order = 0.0;
  for (long n = 0; n < s.steps(); ++n) {
    advance(model, state);
    ref.step();
    for (std::size_t p = 0; p < state.rho.size(); ++p) {
      worst = std::max(worst, std::abs(state.rho[p] - ref.rho()[p]));
      order = std::max({order, frobenius(state.q[p]), std::abs(state.c[p])});
    }
    for (std::size_t i = 0; i < state.v.size(); ++i) worst = std::max(worst, std::abs(state.v[i] - ref.v()[i]));
  }
  return {worst <= 1e-10 && order == 0.0,
          fmt("max per-step gap %.3e over %.0f steps (limit 1e-10)", worst, double(s.steps()))};
}

Verdict commutator_identity() {
  const auto g = checks::commutator_identity_gaps();
  const double order = std::log2(g[1] / g[2]);
  return {order >= 1.9, fmt("gaps %.3e, %.3e, %.3e; order %.3f (>= 1.9)", g[0], g[1], g[2], order)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : ANEMATIC_SCENARIO_DIR;
  std::fprintf(stderr, "acceptance with %d thread(s), scenarios from %s\n", omp_get_max_threads(), dir.c_str());
  try {
    emit(4, "fenchel_young", fenchel_young());
    emit(5, "mollification", mollification());
    emit(6, "pressure_law", pressure_law());
    emit(12, "commutator_identity", commutator_identity());
    emit(11, "navier_stokes_reduction", reduction(dir + "/reduced.cfg"));

    const Run contractile = simulate(dir + "/default.cfg");
    const Run extensile = simulate(dir + "/extensile.cfg");
    const std::vector<const Run*> desk = {&contractile, &extensile};
    emit(1, "q_structure", q_structure(desk));
    emit(2, "concentration_bounds", concentration_bounds(desk));
    emit(3, "density_bounds", density_bounds(desk));

    const Run refined = simulate(dir + "/refined.cfg");
    emit(7, "energy_inequality", energy_inequality(contractile, extensile, refined));
    emit(8, "weak_residual_refinement", weak_residuals(contractile, refined));
    emit(9, "renormalization", renormalization(contractile, refined));
    emit(10, "defect_compatibility", defect(contractile, refined));
  } catch (const std::exception& e) {
    std::printf("FAIL  aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%d criterion line(s) failed\n", failures);
  return failures ? 1 : 0;
}
