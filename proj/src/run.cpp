#include "anematic/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "anematic/io.hpp"

namespace anematic {

namespace fs = std::filesystem;

bool RunReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.pass; });
}

const CheckLine* RunReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string RunReport::table() const {
  std::ostringstream o;
  for (const auto& c : checks)
    o << (c.pass ? "PASS " : "FAIL ") << c.name << " worst=" << format_number(c.worst)
      << " limit=" << format_number(c.limit) << "\n";
  return o.str();
}

std::vector<CheckLine> evaluate_checks(const std::vector<LedgerRow>& rows, double c_min0, double c_max0) {
  CheckLine q{"q_symmetric_traceless", true, 0.0, 0.0};
  CheckLine c{"concentration_bounds", true, 0.0, 1e-12};
  CheckLine rho{"density_bounds", true, 0.0, 1e-6};
  CheckLine step{"energy_step_residual", true, INFINITY, 0.0};
  CheckLine cum{"energy_cumulative_residual", true, INFINITY, 0.0};
  CheckLine power{"energy_power_balance", true, 0.0, 1e-9};
  CheckLine diss{"dissipation_nonnegative", true, INFINITY, -1e-10};
  CheckLine gap{"inflow_convexity_gap", true, INFINITY, -1e-10};
  CheckLine fy{"fenchel_young_ledger", true, 0.0, 1e-8};
  CheckLine mass{"mass_balance", true, 0.0, 1e-10};
  CheckLine renorm{"renormalized_eps_sign", true, -INFINITY, 0.0};
  CheckLine energy{"energy_nonnegative", true, INFINITY, 0.0};

  for (const auto& r : rows) {
    q.worst = std::max({q.worst, r.q_trace, r.q_asymmetry});
    c.worst = std::max({c.worst, c_min0 - r.c_min, r.c_max - c_max0});
    const double rel = std::max((r.rho_lower - r.rho_min) / std::max(r.rho_lower, 1e-300),
                                (r.rho_max - r.rho_upper) / r.rho_upper);
    rho.worst = std::max(rho.worst, rel);
    // Normalized so that -1 sits exactly on the tolerance.
    step.worst = std::min(step.worst, r.residual / r.tolerance);
    cum.worst = std::min(cum.worst, r.cumulative_residual / r.tolerance);
    const double work_scale = 1.0 + std::abs(r.power_assembled) + std::abs(r.work_convective) +
                              std::abs(r.work_pressure) + std::abs(r.work_viscous) + std::abs(r.work_elastic) +
                              std::abs(r.work_rotational) + std::abs(r.work_active) + std::abs(r.work_coupling);
    power.worst = std::max(power.worst, std::abs(r.power_residual) / work_scale);
    diss.worst = std::min({diss.worst, r.visc_dissipation, r.conc_dissipation, r.relax_dissipation,
                           r.sextic_dissipation, r.eps_pressure, r.outflow_pressure, r.inflow_gap});
    gap.worst = std::min(gap.worst, r.min_gap);
    fy.worst = std::max(fy.worst, std::abs(r.visc_fenchel - r.visc_power) / (1.0 + std::abs(r.visc_power)));
    mass.worst = std::max(mass.worst, std::abs(r.mass_defect) / (1.0 + r.mass));
    renorm.worst = std::max(renorm.worst, r.renorm_eps_term);
    energy.worst = std::min({energy.worst, r.energy.kinetic, r.energy.pressure});
  }
  if (rows.empty()) {
    step.worst = cum.worst = 0.0;
    diss.worst = gap.worst = energy.worst = 0.0;
    renorm.worst = 0.0;
  }
  q.pass = q.worst == 0.0;
  c.pass = c.worst <= c.limit;
  rho.pass = rho.worst <= rho.limit;
  step.limit = cum.limit = -1.0;
  step.pass = step.worst >= -1.0;
  cum.pass = cum.worst >= -1.0;
  power.pass = power.worst <= power.limit;
  diss.pass = diss.worst >= diss.limit;
  gap.pass = gap.worst >= gap.limit;
  fy.pass = fy.worst <= fy.limit;
  mass.pass = mass.worst <= mass.limit;
  renorm.pass = renorm.worst <= renorm.limit;
  energy.pass = energy.worst >= energy.limit;
  return {q, c, rho, step, cum, power, diss, gap, fy, mass, renorm, energy};
}

namespace {

std::string numbered(const std::string& prefix, long step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06ld", step);
  return prefix + buf + ".txt";
}

// Keeps the header and the rows up to `step` of an existing ledger.
std::string truncated_ledger(const fs::path& path, long step) {
  std::ifstream in(path);
  if (!in) return {};
  std::string line, out;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      out += line + "\n";
      header = false;
      continue;
    }
    const long s = std::stol(line.substr(0, line.find(',')));
    if (s <= step) out += line + "\n";
  }
  return out;
}

std::string without_output(Scenario s) {
  s.output_dir.clear();
  return s.to_text();
}

}  // namespace

RunReport run(const Scenario& sc, const RunOptions& opt) {
  const auto wall0 = std::chrono::steady_clock::now();
  Model model = build_model(sc);
  model.momentum.flip_active_sign = opt.flip_active_sign;
  const State initial = initial_state(sc, model);
  const auto [c_lo, c_hi] = std::minmax_element(initial.c.data.begin(), initial.c.data.end());
  const double c_min0 = *c_lo, c_max0 = *c_hi;

  RunReport report;
  report.groenwall_constant =
      sc.groenwall_constant > 0.0 ? sc.groenwall_constant : default_groenwall_constant(model, initial);
  EnergyMonitor monitor(model, initial, report.groenwall_constant);
  report.initial_energy = monitor.initial_energy();
  if (opt.weak_residuals) report.residuals.emplace(model);

  const fs::path dir = sc.output_dir;
  State state = initial;
  std::ofstream ledger;
  if (opt.write_files) fs::create_directories(dir);

  if (!opt.restart_from.empty()) {
    Checkpoint ck = read_checkpoint(opt.restart_from, model.grid);
    if (without_output(Scenario::parse(ck.scenario)) != without_output(sc))
      throw ConfigError("checkpoint '" + opt.restart_from + "' was written by a different scenario");
    state = std::move(ck.state);
    monitor.restore(ck.monitor);
    if (report.residuals) {
      if (ck.residuals.empty()) throw ConfigError("checkpoint carries no weak-residual state");
      report.residuals->restore(ck.residuals);
    }
    if (opt.write_files) {
      const std::string kept = truncated_ledger(dir / "ledger.csv", state.step);
      ledger.open(dir / "ledger.csv", std::ios::trunc);
      ledger << (kept.empty() ? ledger_header() + "\n" : kept);
    }
  } else {
    if (report.residuals) report.residuals->sample(model, state);
    if (opt.write_files) {
      ledger.open(dir / "ledger.csv", std::ios::trunc);
      ledger << ledger_header() << "\n";
      write_snapshot((dir / numbered("snapshot_", 0)).string(), model, state);
    }
  }
  if (opt.write_files) {
    std::ofstream(dir / "scenario.cfg") << sc.to_text();
    if (!ledger) throw ConfigError("cannot write the ledger in '" + dir.string() + "'");
  }

  const long steps = sc.steps();
  const long last = opt.stop_after >= 0 ? std::min(steps, opt.stop_after) : steps;
  while (state.step < last) {
    const auto t0 = std::chrono::steady_clock::now();
    const State before = state;
    const StepReport step = advance(model, state);
    LedgerRow row = monitor.record(model, before, state, step);
    if (report.residuals) report.residuals->sample(model, state);
    report.step_seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

    if (opt.write_files) {
      ledger << ledger_line(row) << "\n";
      const bool end = state.step == steps;
      if ((sc.snapshot_every > 0 && state.step % sc.snapshot_every == 0) || end)
        write_snapshot((dir / numbered("snapshot_", state.step)).string(), model, state);
      if ((sc.checkpoint_every > 0 && state.step % sc.checkpoint_every == 0) || end) {
        ledger.flush();
        Checkpoint ck{sc.to_text(), state, monitor.save(),
                      report.residuals ? report.residuals->save() : std::vector<double>{}};
        write_checkpoint((dir / numbered("checkpoint_", state.step)).string(), ck);
      }
    }
    if (opt.on_step) opt.on_step(row);
    report.rows.push_back(std::move(row));
  }

  report.checks = evaluate_checks(report.rows, c_min0, c_max0);
  report.final_state = std::move(state);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();

  if (opt.write_files) {
    std::ofstream out(dir / "report.txt");
    out << "steps " << report.rows.size() << "\n";
    out << "wall_seconds " << report.wall_seconds << "\n";
    out << "groenwall_constant " << format_number(report.groenwall_constant) << "\n";
    int max_it = 0;
    for (const auto& r : report.rows) max_it = std::max(max_it, r.picard_iterations);
    out << "max_picard_iterations " << max_it << "\n";
    if (report.residuals) {
      out << "weak_continuity " << format_number(WeakResiduals::aggregate(report.residuals->continuity())) << "\n";
      out << "weak_momentum " << format_number(WeakResiduals::aggregate(report.residuals->momentum())) << "\n";
      out << "weak_concentration " << format_number(WeakResiduals::aggregate(report.residuals->concentration()))
          << "\n";
      out << "weak_nematic " << format_number(WeakResiduals::aggregate(report.residuals->nematic())) << "\n";
      out << "weak_renormalized " << format_number(report.residuals->renormalized()) << "\n";
    }
    out << report.table();
  }
  return report;
}

}  // namespace anematic
