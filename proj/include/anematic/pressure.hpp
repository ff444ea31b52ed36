#pragma once

#include <memory>
#include <string>
#include <vector>

namespace anematic {

/// Barotropic equation of state p(rho) with its pressure potential P(rho), P' rho - P = p.
class PressureLaw {
 public:
  enum class Kind { isentropic, general };

  /// p = a rho^gamma.
  static PressureLaw isentropic(double a, double gamma, double rho_max = 1e3);
  /// Monotone piecewise-cubic interpolant of samples (rho_i, p_i); rho_0 = 0 and p_0 = 0 required.
  static PressureLaw general(std::vector<double> rho, std::vector<double> p);
  /// CSV of "rho,p" rows (an optional non-numeric header line is skipped).
  static PressureLaw from_csv(const std::string& path);

  Kind kind() const { return kind_; }
  double a() const { return a_; }
  double gamma() const { return gamma_; }
  double rho_max() const { return rho_max_; }

  double pressure(double rho) const;
  /// dp/drho.
  double slope(double rho) const;
  double potential(double rho) const;
  /// P''(rho) = p'(rho) / rho.
  double potential_curvature(double rho) const;
  /// P'(rho) = (P + p) / rho.
  double potential_slope(double rho) const;

 private:
  struct Table;

  void check(double rho) const;

  Kind kind_ = Kind::isentropic;
  double a_ = 1.0, gamma_ = 2.0, rho_max_ = 1e3;
  std::shared_ptr<const Table> table_;
};

struct S2Certificate {
  double a_lower = 0.0;
  double a_upper = 0.0;
  double a_tilde = 0.0;
  double gamma_eff = 0.0;
  bool pass = false;
};

/// Constants making P - a_lower p and a_upper p - P convex, and P >= a_tilde rho^gamma_eff for rho >= 1.
S2Certificate certify_s2(const PressureLaw& law);

/// Least-squares slope of log P against log rho on [lo, hi].
double fit_growth_exponent(const PressureLaw& law, double lo, double hi, int samples = 64);

}  // namespace anematic
