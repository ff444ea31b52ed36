#pragma once

#include <array>
#include <string>

#include "anematic/tensor.hpp"

namespace anematic {

/// Closed-form scalar data on the box: constant, cosine or sine products.
class ScalarExpr {
 public:
  enum class Kind { constant, cosine, sine };

  static ScalarExpr constant(double value);
  /// base + amp * prod_a cos(k_a pi x_a / L_a).
  static ScalarExpr cosine(double base, double amp, std::array<int, 3> k, std::array<double, 3> extent);
  /// base + amp * prod_{a: k_a > 0} sin(k_a pi x_a / L_a).
  static ScalarExpr sine(double base, double amp, std::array<int, 3> k, std::array<double, 3> extent);

  double value(const Vec3& x) const;
  Vec3 gradient(const Vec3& x) const;
  double laplacian(const Vec3& x) const;
  double min_bound() const;
  double max_bound() const;
  Kind kind() const { return kind_; }

 private:
  Kind kind_ = Kind::constant;
  double base_ = 0.0, amp_ = 0.0;
  std::array<int, 3> k_{0, 0, 0};
  std::array<double, 3> extent_{1.0, 1.0, 1.0};
};

/// Boundary velocity catalog; each entry is C1 on the closed box.
class VectorExpr {
 public:
  enum class Kind { zero, constant, shear, channel, rotation };

  static VectorExpr zero();
  static VectorExpr constant(const Vec3& value);
  /// (rate (y - Ly/2), 0, 0).
  static VectorExpr shear(double rate, std::array<double, 3> extent);
  /// (umax 16 y (Ly - y) z (Lz - z) / (Ly^2 Lz^2), 0, 0).
  static VectorExpr channel(double umax, std::array<double, 3> extent);
  /// rate (-(y - yc), x - xc, 0) about the box centre.
  static VectorExpr rotation(double rate, std::array<double, 3> extent);

  Vec3 value(const Vec3& x) const;
  /// J_ij = d_j u_i.
  Mat3 jacobian(const Vec3& x) const;
  Kind kind() const { return kind_; }
  double magnitude() const { return scale_; }

 private:
  Kind kind_ = Kind::zero;
  Vec3 constant_{};
  double scale_ = 0.0;
  std::array<double, 3> extent_{1.0, 1.0, 1.0};
};

/// Q-tensor data catalog: zero, constant uniaxial, or a uniaxial field with a twisting in-plane director.
class QExpr {
 public:
  enum class Kind { zero, uniaxial, twist };

  static QExpr zero();
  static QExpr uniaxial(double s, const Vec3& director);
  /// s (n n - I/3) with n = (cos theta, sin theta, 0), theta = amp prod_a sin(pi x_a / L_a).
  static QExpr twist(double s, double amp, std::array<double, 3> extent);

  QTensor value(const Vec3& x) const;
  Kind kind() const { return kind_; }
  double order() const { return s_; }

 private:
  Kind kind_ = Kind::zero;
  double s_ = 0.0, amp_ = 0.0;
  Vec3 director_{1.0, 0.0, 0.0};
  std::array<double, 3> extent_{1.0, 1.0, 1.0};
};

}  // namespace anematic
