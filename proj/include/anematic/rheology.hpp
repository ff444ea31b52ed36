#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "anematic/tensor.hpp"

namespace anematic {

/// Raw isotropic potential sampled on a (deviatoric norm d, trace t) grid, bilinear between samples.
/// values[i * t.size() + j] = f(d[i], t[j]).
struct RheologyTable {
  std::vector<double> d;
  std::vector<double> t;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[i * t.size() + j]; }
};

/// Convex isotropic viscosity potential F(D) = f(|D^dev|, tr D), optionally mollified.
class RheologyLaw {
 public:
  enum class Kind { newtonian, power_law, tabulated };

  static RheologyLaw newtonian(double mu, double lambda);
  static RheologyLaw power_law(double mu0, double exponent);
  static RheologyLaw tabulated(RheologyTable table);

  Kind kind() const { return kind_; }
  double delta() const { return delta_; }
  double mu() const { return mu_; }
  double lambda() const { return lambda_; }
  double exponent() const { return exponent_; }
  /// Reference modulus used by the coercivity certificate.
  double coercivity_modulus() const;

  /// Reduced potential f_delta(d, t), d >= 0.
  double reduced(double d, double t) const;
  /// (df/dd, df/dt) of the reduced potential.
  std::array<double, 2> reduced_gradient(double d, double t) const;
  /// Admissible (d, t) box for conjugate searches: {d_max, t_min, t_max}.
  std::array<double, 3> search_box() const;
  bool depends_on_trace() const { return kind_ != Kind::power_law; }

  /// Unmollified reduced potential.
  double raw_reduced(double d, double t) const;

 private:
  friend RheologyLaw mollify(const RheologyLaw& law, double delta);
  struct Smoothed;

  Kind kind_ = Kind::newtonian;
  double delta_ = 0.0;
  double mu_ = 0.0, lambda_ = 0.0;
  double mu0_ = 0.0, exponent_ = 2.0;
  std::shared_ptr<const RheologyTable> table_;
  std::shared_ptr<const Smoothed> smooth_;
  // Power-law mollification as a finite mixture of shifted potentials.
  std::vector<double> shift_, weight_;
  double shift_norm_ = 0.0;
};

/// F(D) of the (possibly mollified) law.
double potential(const RheologyLaw& law, const SymTensor& d);
/// Canonical element of the subdifferential of F at D.
SymTensor subgradient(const RheologyLaw& law, const SymTensor& d);
/// Law with potential convolved with a bump of radius delta in (d, t) and shifted so F(0) = 0.
RheologyLaw mollify(const RheologyLaw& law, double delta);
/// F*(S) = sup_D S:D - F(D).
double conjugate(const RheologyLaw& law, const SymTensor& s);
/// S:D - F(D) - F*(S); at most zero up to quadrature error.
double fenchel_young_residual(const RheologyLaw& law, const SymTensor& d, const SymTensor& s);

struct CoercivityCertificate {
  double mu1 = 0.0;
  double mu2 = 0.0;
  bool pass = false;
};

/// Tightest (mu1, mu2) with F(D) >= mu1 |D^dev|^{4/3} - mu2 on a sample box |D| <= 10.
CoercivityCertificate certify_coercivity(const RheologyLaw& law);

/// F* sampled on an (s, sigma) grid with bilinear interpolation.
struct ConjugateTable {
  std::vector<double> s;
  std::vector<double> sigma;
  std::vector<double> values;  // values[i * sigma.size() + j]

  double operator()(double s_value, double sigma_value) const;
};

ConjugateTable tabulate_conjugate(const RheologyLaw& law, const std::vector<double>& s,
                                  const std::vector<double>& sigma);

/// Product-kernel convolution of a reduced potential, minus its value at the origin.
/// Exposed for tests and table construction.
double mollified_by_quadrature(const std::function<double(double, double)>& f, double delta, double d, double t);

/// Bump kernel exp(-1/(1-r^2)) on (-1, 1), unnormalized.
double bump(double r);

/// Reduced coordinates (|D^dev|, tr D).
inline std::array<double, 2> reduced_coordinates(const SymTensor& d) {
  return {frobenius(deviator(d)), d.trace()};
}

}  // namespace anematic
