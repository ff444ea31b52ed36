// Command-line front end: run, check, conjugate, defect.
#include <omp.h>

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "anematic/checks.hpp"
#include "anematic/io.hpp"
#include "anematic/run.hpp"

namespace fs = std::filesystem;
using namespace anematic;

namespace {

enum Exit { ok = 0, check_failed = 1, config_error = 2 };

void apply_thread_count() {
  for (const char* var : {"ANEMATIC_THREADS", "OMP_NUM_THREADS"}) {
    const char* v = std::getenv(var);
    if (!v || !*v) continue;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end || n < 1) throw ConfigError(std::string(var) + " must be a positive integer");
    omp_set_num_threads(int(n));
    return;
  }
}

// "lo:hi:count" with count >= 2.
std::vector<double> parse_axis(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t pos; (pos = text.find(':', start)) != std::string::npos; start = pos + 1)
    parts.push_back(text.substr(start, pos - start));
  parts.push_back(text.substr(start));
  if (parts.size() != 3) throw ConfigError("grid axis '" + text + "' is not lo:hi:count");
  const double lo = parse_number(parts[0]), hi = parse_number(parts[1]);
  const double count = parse_number(parts[2]);
  if (count < 2 || count != std::floor(count) || !(hi > lo))
    throw ConfigError("grid axis '" + text + "' needs lo < hi and an integer count >= 2");
  std::vector<double> v(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = lo + (hi - lo) * double(i) / double(v.size() - 1);
  return v;
}

int cmd_run(const std::string& path, const std::string& restart, const std::string& out_dir) {
  Scenario s = Scenario::load(path);
  if (!out_dir.empty()) s.output_dir = out_dir;
  RunOptions o;
  o.restart_from = restart;
  o.on_step = [&](const LedgerRow& r) {
    if (r.step % 20 == 0)
      std::fprintf(stderr, "step %ld  t=%.4f  E=%.6e  residual=%.3e  picard=%d\n", r.step, r.time, r.energy.total(),
                   r.residual, r.picard_iterations);
  };
  const RunReport rep = run(s, o);
  std::cout << rep.table();
  std::printf("wall time %.2f s, output in %s\n", rep.wall_seconds, s.output_dir.c_str());
  return rep.pass() ? ok : check_failed;
}

int cmd_check(const std::vector<std::string>& suites, unsigned long seed) {
  const auto& names = suites.empty() ? suite_names() : suites;
  bool all = true;
  for (const auto& suite : names) {
    for (const auto& line : run_suite(suite, seed)) {
      std::printf("%s  %s.%s  worst=%.3e  limit=%.3e\n", line.pass ? "PASS" : "FAIL", suite.c_str(),
                  line.name.c_str(), line.worst, line.limit);
      all = all && line.pass;
    }
    std::fflush(stdout);
  }
  return all ? ok : check_failed;
}

int cmd_conjugate(const std::string& law_path, const std::string& grid, const std::string& out) {
  const auto comma = grid.find(',');
  if (comma == std::string::npos) throw ConfigError("conjugate grid must be 's_lo:s_hi:n,sigma_lo:sigma_hi:n'");
  const auto s = parse_axis(grid.substr(0, comma));
  const auto sigma = parse_axis(grid.substr(comma + 1));
  if (s.front() < 0) throw ConfigError("conjugate: s is a norm and must be nonnegative");
  const RheologyLaw law = make_rheology(Scenario::load(law_path));
  const ConjugateTable table = tabulate_conjugate(law, s, sigma);
  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) throw ConfigError("cannot write " + out);
  }
  std::ostream& os = out.empty() ? std::cout : file;
  os << "s,sigma,Fstar\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < sigma.size(); ++j)
      os << format_number(s[i]) << ',' << format_number(sigma[j]) << ','
         << format_number(table.values[i * sigma.size() + j]) << '\n';
  return ok;
}

int cmd_defect(const std::string& coarse_dir, const std::string& fine_dir, const std::string& out) {
  const auto coarse_files = list_snapshots(coarse_dir), fine_files = list_snapshots(fine_dir);
  if (coarse_files.empty() || fine_files.empty()) throw ConfigError("defect: no snapshots found");
  const PressureLaw law = make_pressure(Scenario::load((fs::path(coarse_dir) / "scenario.cfg").string()));
  const auto est = defect_diagnostic(read_snapshot(coarse_files.back()), read_snapshot(fine_files.back()), law);
  std::printf("compatibility constants %s %s\n", format_number(est.lower).c_str(), format_number(est.upper).c_str());
  std::printf("averaged fine run: %ld of %ld cells inside the sandwich (%.2f%%)\n", est.cells_passed,
              est.cells_checked, 100.0 * est.pass_rate());
  std::printf("against coarse run: %ld of %ld cells, max energy difference %.3e\n", est.run_cells_passed,
              est.run_cells_checked, est.run_difference_energy);
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw ConfigError("cannot write " + out);
    f << "cell,energy_defect,kinetic_defect,pressure_defect,reynolds_trace\n";
    for (std::size_t c = 0; c < est.coarse.size(); ++c)
      f << c << ',' << format_number(est.energy_defect[c]) << ',' << format_number(est.kinetic_defect[c]) << ','
        << format_number(est.pressure_defect[c]) << ',' << format_number(est.reynolds_defect[c].trace()) << '\n';
  }
  return est.pass_rate() >= 0.95 ? ok : check_failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active nematic compressible flow solver"};
  app.require_subcommand(1);

  std::string scenario, restart, out_dir;
  auto* run_cmd = app.add_subcommand("run", "advance a scenario to its end time");
  run_cmd->add_option("scenario", scenario, "scenario file")->required();
  run_cmd->add_option("--restart", restart, "checkpoint to resume from");
  run_cmd->add_option("--output", out_dir, "override output.dir");

  std::vector<std::string> suites;
  unsigned long seed = 1;
  auto* check_cmd = app.add_subcommand("check", "run the property suites");
  check_cmd->add_option("--suite", suites, "suite name (repeatable)");
  check_cmd->add_option("--seed", seed, "sampling seed");
  check_cmd->add_flag_callback("--list", [] {
    for (const auto& n : suite_names()) std::cout << n << '\n';
    std::exit(ok);
  }, "list suite names");

  std::string law, grid, out;
  auto* conj_cmd = app.add_subcommand("conjugate", "tabulate the conjugate potential to CSV");
  conj_cmd->add_option("law", law, "scenario file holding the rheology keys")->required();
  conj_cmd->add_option("grid", grid, "s_lo:s_hi:n,sigma_lo:sigma_hi:n")->required();
  conj_cmd->add_option("-o,--output", out, "CSV path (default stdout)");

  std::string coarse, fine;
  auto* defect_cmd = app.add_subcommand("defect", "two-resolution defect diagnostic");
  defect_cmd->add_option("coarse_dir", coarse)->required();
  defect_cmd->add_option("fine_dir", fine)->required();
  defect_cmd->add_option("-o,--output", out, "per-cell CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }

  try {
    apply_thread_count();
    if (*run_cmd) return cmd_run(scenario, restart, out_dir);
    if (*check_cmd) return cmd_check(suites, seed);
    if (*conj_cmd) return cmd_conjugate(law, grid, out);
    return cmd_defect(coarse, fine, out);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return check_failed;
  }
}
