#pragma once

#include <functional>
#include <string>
#include <vector>

#include "anematic/simulation.hpp"

namespace anematic {

/// Energy functional split by contribution.
struct EnergyParts {
  double kinetic = 0.0;        // int 1/2 rho |u - u_B|^2
  double pressure = 0.0;       // int P(rho)
  double concentration = 0.0;  // int 1/2 c^2
  double nematic = 0.0;        // int 1/2 |Q|^2 + 1/2 |grad Q|^2 + c*/4 |Q|^4
  double total() const { return kinetic + pressure + concentration + nematic; }
};

EnergyParts energy_parts(const Model& model, const State& state);

/// One row of the energy ledger. Column order is fixed by ledger_columns().
struct LedgerRow {
  long step = 0;
  double time = 0.0;
  EnergyParts energy;
  // Left-hand side of the per-step inequality.
  double energy_rate = 0.0;      // (E^{n+1} - E^n) / dt
  double visc_dissipation = 0.0; // 1/4 int S : D u
  double visc_fenchel = 0.0;     // int F(D u) + F*(S)
  double visc_power = 0.0;       // int S : D u
  double conc_dissipation = 0.0; // D0/2 int |grad c|^2
  double relax_dissipation = 0.0;// Gamma/4 int |Lap Q|^2
  double sextic_dissipation = 0.0;// c*^2 Gamma/2 int |Q|^6
  double outflow_pressure = 0.0; // int_out P(rho) u_B . n  (>= 0)
  double eps_pressure = 0.0;     // eps int P''(rho) |grad rho|^2
  double inflow_gap = 0.0;       // -int_in [P(rho_B) - P'(rho)(rho_B - rho) - P(rho)] u_B . n  (>= 0)
  double min_gap = 0.0;          // pointwise minimum of the bracket on the inflow
  // Right-hand side.
  double groenwall = 0.0;        // C E^{n+1}
  double q_boundary = 0.0;       // -1/2 int (1/2 |Q_B|^2 + c*/4 tr^2 Q_B^2) u_B . n
  double inflow_pressure = 0.0;  // -int_in P(rho_B) u_B . n
  double q_normal = 0.0;         // 2 c* Gamma int |Q_B|^2 Q_B : d_n Q
  double constant = 0.0;         // C
  double lhs = 0.0, rhs = 0.0, residual = 0.0, tolerance = 0.0;
  double cumulative_residual = 0.0;  // integrated form over [0, t]
  // Power balance of the momentum update: v . rhs against the work of every stress on the Galerkin part.
  double work_convective = 0.0, work_pressure = 0.0, work_viscous = 0.0, work_elastic = 0.0;
  double work_rotational = 0.0, work_active = 0.0, work_coupling = 0.0;
  double power_assembled = 0.0, power_residual = 0.0;
  // Bookkeeping.
  double mass = 0.0, mass_defect = 0.0;
  double rho_min = 0.0, rho_max = 0.0, rho_lower = 0.0, rho_upper = 0.0;
  double c_min = 0.0, c_max = 0.0;
  double q_trace = 0.0, q_asymmetry = 0.0;
  double renorm_eps_term = 0.0;  // -eps int 2 |grad rho|^2 of the step
  int picard_iterations = 0;
  double picard_increment = 0.0;
};

const std::vector<std::string>& ledger_columns();
std::vector<double> ledger_values(const LedgerRow& row);
std::string ledger_header();
std::string ledger_line(const LedgerRow& row);

/// Space-time test function with analytic time derivative and gradient.
struct ScalarTest {
  std::string name;
  std::function<double(double, const Vec3&)> value, rate;
  std::function<Vec3(double, const Vec3&)> grad;
};

/// Galerkin mode times a function of time.
struct ModeTest {
  std::string name;
  int mode = 0;
  std::function<double(double)> value, rate;
};

/// Compactly vanishing scalar profile times a constant symmetric matrix.
struct TensorTest {
  std::string name;
  std::function<double(double, const Vec3&)> value, rate;
  Mat3 direction;
};

std::vector<ScalarTest> continuity_tests(const Grid& grid);
std::vector<ScalarTest> concentration_tests(const Grid& grid);
std::vector<ModeTest> momentum_tests(const VelocityBasis& basis);
std::vector<TensorTest> nematic_tests(const Grid& grid);

/// Streaming trapezoidal accumulator of the weak identities over a trajectory.
class WeakResiduals {
 public:
  explicit WeakResiduals(const Model& model);

  /// Adds the time level of `state` (called for t = 0 and after every step).
  void sample(const Model& model, const State& state);

  /// Residual of every test function, per equation.
  std::vector<double> continuity() const;
  std::vector<double> momentum() const;
  std::vector<double> concentration() const;
  std::vector<double> nematic() const;
  /// Residual of the renormalized identity with B(r) = r^2, chi = 0.
  double renormalized() const;
  /// Root-sum-square of a residual list.
  static double aggregate(const std::vector<double>& r);

  /// Flat accumulator state for checkpoints.
  std::vector<double> save() const;
  void restore(const std::vector<double>& data);

 private:
  struct Track {
    double initial = 0.0;   // pairing at t = 0
    double current = 0.0;   // pairing at the last sample
    double integral = 0.0;  // trapezoidal integral of the source
    double last_source = 0.0;
  };
  std::vector<ScalarTest> cont_tests_, conc_tests_;
  std::vector<ModeTest> mom_tests_;
  std::vector<TensorTest> nem_tests_;
  std::vector<Track> cont_, mom_, conc_, nem_;
  Track renorm_;
  double last_time_ = 0.0;
  bool started_ = false;

  static void push(Track& t, double pairing, double source, double dt, bool first);
  static std::vector<double> residuals(const std::vector<Track>& tracks);
};

/// Default Groenwall constant assembled from the data norms of the model.
double default_groenwall_constant(const Model& model, const State& initial);

/// Per-step evaluation of the energy inequality, power balance and invariant bounds.
class EnergyMonitor {
 public:
  EnergyMonitor(const Model& model, const State& initial, double groenwall_constant);

  /// Row for the step that produced `after` from `before`.
  LedgerRow record(const Model& model, const State& before, const State& after, const StepReport& report);

  double groenwall_constant() const { return c_; }
  double initial_energy() const { return e0_; }
  const DensityBounds& bounds() const { return bounds_; }
  double cumulative() const { return cumulative_; }

  std::vector<double> save() const;
  void restore(const std::vector<double>& data);

 private:
  double c_ = 1.0;
  double e0_ = 0.0;
  double mass0_ = 0.0;
  double cumulative_ = 0.0;
  DensityBounds bounds_;
};

/// Step tolerance 1e-6 (E0 + 1) + 10 (dt + h^2) t (1 + E0).
double energy_tolerance(double e0, double dt, double h, double t);

/// Two-resolution defect estimate on the coarse grid.
struct DefectEstimate {
  Grid coarse;
  ScalarField energy_defect;        // averaged (1/2 rho |u|^2 + P) minus the same of the averages
  SymField reynolds_defect;         // averaged (rho u x u + p I) minus the same of the averages
  ScalarField kinetic_defect, pressure_defect;
  double lower = 0.0, upper = 0.0;  // compatibility constants
  long cells_checked = 0, cells_passed = 0;
  double pass_rate() const { return cells_checked ? double(cells_passed) / cells_checked : 1.0; }
  // Literal comparison against the coarse run, for information.
  double run_difference_energy = 0.0;
  long run_cells_checked = 0, run_cells_passed = 0;
};

/// Node data read back from a snapshot.
struct SnapshotFields {
  Grid grid;
  double time = 0.0;
  ScalarField rho, c;
  VectorField u;
  QField q;
};

/// Compatibility constants min/max{2, 3(gamma - 1)} for isentropic laws.
std::array<double, 2> defect_constants(const PressureLaw& law);

/// Coarse-grains the fine snapshot by 2x2x2 averaging and compares nonlinear quantities of the fine run with the same
/// quantities of the averages; compatibility is checked wherever the energy defect exceeds `threshold`.
DefectEstimate defect_diagnostic(const SnapshotFields& coarse, const SnapshotFields& fine, const PressureLaw& law,
                                 double threshold = 1e-8);

/// Largest ratio ||grad u||_{4/3} / ||D u - tr(D u)/3 I||_{4/3} over random Galerkin fields.
double korn_ratio(const VelocityBasis& basis, int samples, unsigned long seed);

}  // namespace anematic
