#pragma once

#include <vector>

#include "anematic/scenario.hpp"

namespace nsref {

/// Compressible Navier-Stokes with the same discretization as the coupled solver, written from scratch on plain
/// arrays: sine-mode Galerkin velocity, upwind plus implicit-diffusion density. Newtonian isentropic scenarios only.
class Reference {
 public:
  explicit Reference(const anematic::Scenario& s);

  void set_state(const std::vector<double>& rho, const std::vector<double>& v);
  void step();

  const std::vector<double>& rho() const { return rho_; }
  const std::vector<double>& v() const { return v_; }
  int last_iterations() const { return iterations_; }

 private:
  struct Image {
    std::vector<double> rho, v;
  };
  Image image(const std::vector<double>& guess) const;
  std::vector<double> continuity(const std::vector<double>& guess) const;
  std::vector<double> momentum(const std::vector<double>& guess, const std::vector<double>& rho_new) const;

  double mode_1d(int axis, int k, double x) const;
  double slope_1d(int axis, int k, double x) const;
  std::size_t at(int i, int j, int k) const { return (std::size_t(k) * n_[1] + j) * n_[0] + i; }

  anematic::Scenario s_;
  anematic::VectorExpr u_b_;
  int n_[3];
  double h_[3], len_[3];
  int m_, ns_;
  double a_, gamma_, mu_, lambda_;
  anematic::ScalarExpr rho_b_;
  std::vector<double> rho_, v_, v1_, v2_;
  int iterations_ = 0;
};

}  // namespace nsref
