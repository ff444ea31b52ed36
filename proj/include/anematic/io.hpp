#pragma once

#include <string>
#include <vector>

#include "anematic/energy.hpp"
#include "anematic/simulation.hpp"

namespace anematic {

/// Snapshot text: a "# grid ..." metadata line, a column line, then one node per row:
/// x y z rho u1 u2 u3 c q11 q12 q13 q22 q23. Numbers use the shortest round-trip form.
void write_snapshot(const std::string& path, const Model& model, const State& state);
SnapshotFields read_snapshot(const std::string& path);

/// Snapshot files of a run directory ordered by step.
std::vector<std::string> list_snapshots(const std::string& dir);

/// Everything needed to resume a run bit-exactly.
struct Checkpoint {
  std::string scenario;  // canonical scenario text
  State state;
  std::vector<double> monitor;
  std::vector<double> residuals;
};

void write_checkpoint(const std::string& path, const Checkpoint& ck);
/// Reads a checkpoint; fields are placed on `grid` and their sizes checked.
Checkpoint read_checkpoint(const std::string& path, const Grid& grid);
/// Scenario text stored in a checkpoint, without reading the fields.
std::string checkpoint_scenario(const std::string& path);

/// Shortest decimal form that parses back to the same double.
std::string format_number(double v);
double parse_number(const std::string& text);

}  // namespace anematic
