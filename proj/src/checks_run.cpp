#include <filesystem>
#include <fstream>
#include <sstream>

#include "anematic/checks.hpp"
#include "anematic/io.hpp"
#include "check_support.hpp"

namespace anematic {

namespace fs = std::filesystem;

namespace checks {

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& tag, unsigned long seed) {
  const fs::path dir = fs::temp_directory_path() / ("anematic_" + tag + "_" + std::to_string(seed));
  fs::remove_all(dir);
  return dir;
}

Scenario quiet_scenario() {
  Scenario s;
  s.cells = {8, 8, 8};
  s.initial_rho = "constant value=1";
  s.initial_c = "constant value=0";
  s.initial_q = "zero";
  s.initial_v = "zero";
  s.boundary_u = "zero";
  s.boundary_rho = "constant value=1";
  s.boundary_q = "zero";
  return s;
}

// Synthetic step between two states that share the given node fields.
StepReport still_step(const Model& model, const State& s) {
  StepReport r;
  r.iterations = 1;
  r.increments = {0.0};
  r.iterate = velocity_fields(model, s.v, s);
  r.faces = synthesize_faces(model.basis, s.v, model.u_b);
  r.stresses = assemble_stresses(model.momentum, model.law, model.pressure, r.iterate, model.q_b);
  r.rhs.assign(model.basis.size(), 0.0);
  return r;
}

SnapshotFields random_fine(const Grid& g, Sampler& rng) {
  SnapshotFields f{g, 0.0, ScalarField(g), ScalarField(g), VectorField(g), QField(g)};
  for (std::size_t p = 0; p < g.size(); ++p) {
    f.rho[p] = rng.uniform(0.5, 2.0);
    f.u[p] = rng.vec(0.5);
  }
  return f;
}

}  // namespace

std::vector<CheckLine> energy(unsigned long seed) {
  Sampler rng(seed);
  std::vector<CheckLine> out;

  // Vacuum: every ledger entry vanishes except the constant and what it feeds.
  {
    Scenario s = quiet_scenario();
    s.initial_rho = "constant value=0";
    s.boundary_rho = "constant value=0";
    const Model model = build_model(s);
    State before = initial_state(s, model);
    State after = before;
    after.step = 1;
    after.time = model.dt();
    EnergyMonitor monitor(model, before, 2.0);
    const LedgerRow row = monitor.record(model, before, after, still_step(model, after));
    const auto& cols = ledger_columns();
    const auto vals = ledger_values(row);
    const std::vector<std::string> live = {"step", "time", "rhs_groenwall", "rhs_constant", "rhs", "residual",
                                           "tolerance", "cumulative_residual", "picard_iterations"};
    double worst = 0.0;
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (std::find(live.begin(), live.end(), cols[i]) == live.end()) worst = std::max(worst, std::abs(vals[i]));
    out.push_back({"zero_state_ledger", worst == 0.0 && row.residual == 2.0, worst, 0.0});
  }

  // Uniform density at rest: only the pressure energy is present.
  {
    Scenario s = quiet_scenario();
    s.initial_rho = "constant value=1.5";
    s.initial_c = "constant value=0.8";
    const Model model = build_model(s);
    State before = initial_state(s, model);
    State after = before;
    after.step = 1;
    after.time = model.dt();
    EnergyMonitor monitor(model, before, 1.0);
    const LedgerRow row = monitor.record(model, before, after, still_step(model, after));
    const double expect = model.pressure.potential(1.5);
    out.push_back(at_most("uniform_state_pressure_energy", std::abs(row.energy.pressure - expect), 1e-12));
    const double diss = std::abs(row.visc_dissipation) + std::abs(row.conc_dissipation) +
                        std::abs(row.relax_dissipation) + std::abs(row.sextic_dissipation) + std::abs(row.eps_pressure);
    out.push_back({"uniform_state_no_dissipation", diss == 0.0, diss, 0.0});
  }

  // Short default runs for both signs of the activity, and the sign mutation.
  for (double sigma : {0.1, -0.1}) {
    Scenario s;
    s.sigma_star = sigma;
    RunOptions o;
    o.write_files = false;
    o.weak_residuals = false;
    o.stop_after = 20;
    const auto rep = run(s, o);
    const std::string tag = sigma > 0 ? "contractile." : "extensile.";
    for (const auto& c : rep.checks) out.push_back({tag + c.name, c.pass, c.worst, c.limit});
  }
  {
    Scenario s;
    RunOptions o;
    o.write_files = false;
    o.weak_residuals = false;
    o.stop_after = 5;
    o.flip_active_sign = true;
    const auto rep = run(s, o);
    const CheckLine* power = rep.find("energy_power_balance");
    out.push_back({"active_sign_mutation_detected", !rep.pass(), power ? power->worst : 0.0, power ? power->limit : 0.0});
  }

  // Newtonian decay: kinetic plus pressure energy plus the spent viscous work never grows.
  {
    Scenario s = quiet_scenario();
    s.initial_rho = "cosine base=1 amp=0.05 k=1,0,1";
    s.initial_v = "random norm=0.05 seed=3";
    s.sigma_star = 0.0;
    s.end_time = 0.05;
    RunOptions o;
    o.write_files = false;
    o.weak_residuals = false;
    const auto rep = run(s, o);
    double spent = 0.0, prev = rep.initial_energy, worst = -INFINITY, tol = INFINITY;
    for (const auto& r : rep.rows) {
      spent += s.dt * r.visc_power;
      const double e = r.energy.kinetic + r.energy.pressure + spent;
      worst = std::max(worst, e - prev);
      tol = std::min(tol, r.tolerance);
      prev = e;
    }
    out.push_back(at_most("newtonian_decay", worst, tol));
  }

  // Stationary data satisfy every weak identity.
  {
    Scenario s = quiet_scenario();
    s.initial_c = "cosine base=1 amp=0.3 k=1,0,0";
    s.end_time = 0.01;
    RunOptions o;
    o.write_files = false;
    const auto rep = run(s, o);
    const auto& w = *rep.residuals;
    double stationary = 0.0;
    for (const auto& list : {w.continuity(), w.momentum(), w.nematic()})
      for (double x : list) stationary = std::max(stationary, std::abs(x));
    stationary = std::max(stationary, std::abs(w.renormalized()));
    out.push_back(at_most("stationary_weak_residuals", stationary, 1e-10));
    out.push_back(at_most("concentration_mass_weak_residual", std::abs(w.concentration().front()), 1e-12));
  }

  // Defect algebra.
  {
    const Grid gc({1, 1, 1}, {4, 4, 4}), gf({1, 1, 1}, {8, 8, 8});
    const PressureLaw law = PressureLaw::isentropic(1.0, 2.0);
    const SnapshotFields fine = random_fine(gf, rng);
    SnapshotFields coarse{gc, 0.0, ScalarField(gc), ScalarField(gc), VectorField(gc), QField(gc)};
    const auto est = defect_diagnostic(coarse, fine, law);
    double identity = 0.0;
    for (std::size_t c = 0; c < gc.size(); ++c) {
      const double tr = est.reynolds_defect[c].trace();
      identity = std::max(identity, std::abs(tr - (2.0 * est.kinetic_defect[c] + 3.0 * est.pressure_defect[c])) /
                                        (1.0 + std::abs(est.energy_defect[c])));
    }
    out.push_back(at_most("defect_trace_identity", identity, 1e-12));
    out.push_back({"defect_sandwich_random", est.pass_rate() == 1.0, est.pass_rate(), 1.0});

    // A fine field that is constant on every coarse cell has no defect.
    SnapshotFields flat = fine;
    for (int k = 0; k < 8; ++k)
      for (int j = 0; j < 8; ++j)
        for (int i = 0; i < 8; ++i) {
          const std::size_t src = gf.index(i & ~1, j & ~1, k & ~1);
          flat.rho[gf.index(i, j, k)] = fine.rho[src];
          flat.u[gf.index(i, j, k)] = fine.u[src];
        }
    const auto none = defect_diagnostic(coarse, flat, law);
    double zero = 0.0;
    for (std::size_t c = 0; c < gc.size(); ++c)
      zero = std::max({zero, std::abs(none.energy_defect[c]), frobenius(none.reynolds_defect[c])});
    out.push_back(at_most("defect_vanishes_without_subcell_variation", zero, 1e-14));
    const auto k = defect_constants(law);
    out.push_back({"defect_constants_gamma_2", k[0] == 2.0 && k[1] == 3.0, k[1], 3.0});
  }

  const double korn = korn_ratio(VelocityBasis(Grid({1, 1, 1}, {16, 16, 16}), 2), 200, seed);
  out.push_back({"korn_ratio_finite", std::isfinite(korn) && korn >= 1.0, korn, INFINITY});
  return out;
}

std::vector<CheckLine> orchestrator(unsigned long seed) {
  std::vector<CheckLine> out;

  // Quiet scenario: everything stays at rest and all run checks pass.
  {
    Scenario s = quiet_scenario();
    const fs::path dir = scratch_dir("quiet", seed);
    s.output_dir = dir.string();
    s.snapshot_every = 0;
    s.checkpoint_every = 0;
    const auto rep = run(s, {});
    const auto snap = read_snapshot(list_snapshots(dir.string()).back());
    double moved = 0.0, fields = 0.0;
    for (std::size_t p = 0; p < snap.grid.size(); ++p) {
      moved = std::max({moved, std::abs(snap.rho[p] - 1.0), norm(snap.u[p])});
      fields = std::max({fields, std::abs(snap.c[p]), frobenius(snap.q[p])});
    }
    out.push_back({"quiet_scenario_checks", rep.pass(), double(rep.rows.size()), double(s.steps())});
    // Velocity and density only move by the rounding of the uniform pressure work.
    out.push_back(at_most("quiet_scenario_at_rest", moved, 1e-14));
    out.push_back({"quiet_scenario_fields_zero", fields == 0.0, fields, 0.0});
    fs::remove_all(dir);
  }

  // Restart from a checkpoint reproduces the original files bit for bit.
  {
    Scenario s;
    s.cells = {8, 8, 8};
    s.end_time = 0.02;
    s.checkpoint_every = 10;
    s.snapshot_every = 10;
    const fs::path dir = scratch_dir("restart", seed);
    s.output_dir = dir.string();
    run(s, {});
    const std::string ledger = slurp(dir / "ledger.csv");
    const std::string snap = slurp(dir / "snapshot_000020.txt");
    const std::string ck = slurp(dir / "checkpoint_000020.txt");
    RunOptions o;
    o.restart_from = (dir / "checkpoint_000010.txt").string();
    run(s, o);
    const bool same = ledger == slurp(dir / "ledger.csv") && snap == slurp(dir / "snapshot_000020.txt") &&
                      ck == slurp(dir / "checkpoint_000020.txt");
    out.push_back({"restart_bit_exact", same, same ? 0.0 : 1.0, 0.0});

    // A second fresh run in another directory gives identical files.
    Scenario t = s;
    const fs::path dir2 = scratch_dir("repeat", seed);
    t.output_dir = dir2.string();
    run(t, {});
    const bool det = ledger == slurp(dir2 / "ledger.csv") && snap == slurp(dir2 / "snapshot_000020.txt");
    out.push_back({"deterministic_rerun", det, det ? 0.0 : 1.0, 0.0});

    Scenario other = s;
    other.sigma_star = 0.2;
    out.push_back(throws<ConfigError>("restart_scenario_mismatch_rejected", [&] {
      RunOptions r;
      r.restart_from = (dir / "checkpoint_000010.txt").string();
      run(other, r);
    }));
    fs::remove_all(dir);
    fs::remove_all(dir2);
  }

  out.push_back(throws<ConfigError>("tabulated_without_mollification_rejected", [] {
    Scenario s;
    s.rheology_kind = "tabulated";
    s.rheology_table = "unused.csv";
    s.delta = 0.0;
    build_model(s);
  }));
  out.push_back(throws<ConfigError>("unknown_key_rejected", [] { Scenario::parse("grid.cels = 8\n"); }));
  out.push_back(throws<ConfigError>("malformed_value_rejected", [] { Scenario::parse("time.step_s = fast\n"); }));

  Scenario s;
  s.pressure_table = "p.csv";
  s.rheology_table = "f.csv";
  const std::string text = s.to_text();
  bool keys = Scenario::parse(text).to_text() == text;
  for (const auto& k : scenario_keys()) keys = keys && ("\n" + text).find("\n" + k + " = ") != std::string::npos;
  out.push_back({"scenario_text_round_trip", keys, 0.0, 0.0});
  return out;
}

}  // namespace checks

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"tensor",     "rheology", "pressure", "domain", "galerkin",
                                                 "continuity", "nematic",  "momentum", "energy", "orchestrator"};
  return names;
}

std::vector<CheckLine> run_suite(const std::string& name, unsigned long seed) {
  if (name == "tensor") return checks::tensor(seed);
  if (name == "rheology") return checks::rheology(seed);
  if (name == "pressure") return checks::pressure(seed);
  if (name == "domain") return checks::domain(seed);
  if (name == "galerkin") return checks::galerkin(seed);
  if (name == "continuity") return checks::continuity(seed);
  if (name == "nematic") return checks::nematic(seed);
  if (name == "momentum") return checks::momentum(seed);
  if (name == "energy") return checks::energy(seed);
  if (name == "orchestrator") return checks::orchestrator(seed);
  throw ConfigError("unknown check suite '" + name + "'");
}

}  // namespace anematic
