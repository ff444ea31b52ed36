#pragma once

#include <map>
#include <string>
#include <vector>

#include "anematic/simulation.hpp"

namespace anematic {

/// Parsed "kind key=value ..." selector; list values are comma separated.
struct Selector {
  std::string kind;
  std::map<std::string, std::string> args;

  static Selector parse(const std::string& text);
  double number(const std::string& key, double fallback) const;
  std::array<double, 3> triple(const std::string& key, std::array<double, 3> fallback) const;
  /// Fails on arguments not in `allowed`.
  void expect(const std::vector<std::string>& allowed) const;
};

/// Run configuration. Every key carries its unit in the name where the quantity has one.
struct Scenario {
  std::array<int, 3> cells{16, 16, 16};
  std::array<double, 3> length{1.0, 1.0, 1.0};
  double dt = 1e-3;
  double end_time = 0.2;
  int modes = 2;
  double epsilon = 0.1;
  double cg_tolerance = 1e-13;

  std::string pressure_kind = "isentropic";
  double pressure_a = 1.0;
  double pressure_gamma = 2.0;
  double rho_max = 1e3;
  std::string pressure_table;

  std::string rheology_kind = "newtonian";
  double mu = 1.0;
  double lambda = 0.0;
  double mu0 = 1.0;
  double exponent = 4.0 / 3.0;
  std::string rheology_table;
  double delta = 0.05;

  double d0 = 0.1;
  double mobility = 0.1;
  double c_star = 1.0;
  double b = 0.5;
  double sigma_star = 0.1;

  std::string initial_rho = "cosine base=1 amp=0.1 k=1,1,1";
  std::string initial_c = "cosine base=1 amp=0.5 k=1,1,0";
  std::string initial_q = "twist s=0.3 amp=0.8";
  std::string initial_v = "zero";
  std::string boundary_u = "channel umax=0.2";
  std::string boundary_rho = "constant value=1";
  std::string boundary_q = "uniaxial s=0.3 n=1,0,0";

  double picard_tolerance = 1e-8;
  int picard_max_iterations = 200;
  double picard_damping = 0.5;
  bool picard_extrapolate = true;
  double max_condition = 1e12;
  double groenwall_constant = -1.0;  // negative: derive from the data

  std::string output_dir = "out";
  int snapshot_every = 50;
  int checkpoint_every = 50;
  unsigned long seed = 1;

  /// Key-value text: one "key = value" per line, '#' starts a comment.
  static Scenario parse(const std::string& text);
  static Scenario load(const std::string& path);
  /// Canonical text form; parse(to_text()) reproduces the scenario.
  std::string to_text() const;

  long steps() const;
};

/// Keys accepted by Scenario::parse, in canonical order.
const std::vector<std::string>& scenario_keys();

ScalarExpr make_scalar(const std::string& text, const std::array<double, 3>& extent);
VectorExpr make_vector(const std::string& text, const std::array<double, 3>& extent);
QExpr make_q(const std::string& text, const std::array<double, 3>& extent);
RheologyLaw make_rheology(const Scenario& s);
PressureLaw make_pressure(const Scenario& s);

/// Validates the scenario and builds the run model. Throws ConfigError on any invalid setting.
Model build_model(const Scenario& s);
State initial_state(const Scenario& s, const Model& model);

}  // namespace anematic
