#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "anematic/energy.hpp"
#include "anematic/scenario.hpp"

namespace anematic {

struct RunOptions {
  bool write_files = true;
  bool weak_residuals = true;
  /// Resume from this checkpoint file instead of the initial data.
  std::string restart_from;
  /// Stop after this step (negative: run to the end time).
  long stop_after = -1;
  /// Test hook forwarded to the momentum assembly.
  bool flip_active_sign = false;
  std::function<void(const LedgerRow&)> on_step;
};

/// One line of the PASS/FAIL table.
struct CheckLine {
  std::string name;
  bool pass = true;
  double worst = 0.0;  // worst observed value of the checked quantity
  double limit = 0.0;
};

struct RunReport {
  std::vector<LedgerRow> rows;
  std::vector<CheckLine> checks;
  State final_state;
  std::optional<WeakResiduals> residuals;
  double groenwall_constant = 0.0;
  double initial_energy = 0.0;
  double wall_seconds = 0.0;
  std::vector<double> step_seconds;

  bool pass() const;
  const CheckLine* find(const std::string& name) const;
  std::string table() const;
};

/// Advances the scenario to its end time, writing ledger.csv, snapshots, checkpoints, scenario.cfg and
/// report.txt into the output directory when write_files is set. Solver errors propagate with the step index.
RunReport run(const Scenario& scenario, const RunOptions& options = {});

/// Invariant checks over the ledger rows of a run.
std::vector<CheckLine> evaluate_checks(const std::vector<LedgerRow>& rows, double c_min0, double c_max0);

}  // namespace anematic
