#pragma once

#include <array>
#include <cmath>

namespace anematic {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Dense 3x3 matrix, row-major.
struct Mat3 {
  std::array<std::array<double, 3>, 3> a{};

  double& operator()(int i, int j) { return a[i][j]; }
  double operator()(int i, int j) const { return a[i][j]; }

  static Mat3 identity();
  static Mat3 diag(double d0, double d1, double d2);

  Mat3 transpose() const;
  double trace() const { return a[0][0] + a[1][1] + a[2][2]; }
  bool finite() const;

  Mat3& operator+=(const Mat3& o);
  Mat3& operator-=(const Mat3& o);
  Mat3& operator*=(double s);
};

Mat3 operator+(Mat3 x, const Mat3& y);
Mat3 operator-(Mat3 x, const Mat3& y);
Mat3 operator*(double s, Mat3 x);
Mat3 operator*(const Mat3& x, const Mat3& y);
Vec3 operator*(const Mat3& x, const Vec3& v);

/// Frobenius inner product A:B.
double contract(const Mat3& x, const Mat3& y);
double frobenius(const Mat3& x);

/// Symmetric tensor stored as its upper triangle.
struct SymTensor {
  double xx = 0, xy = 0, xz = 0, yy = 0, yz = 0, zz = 0;

  Mat3 matrix() const;
  double trace() const { return xx + yy + zz; }
  /// Symmetric part of an arbitrary matrix.
  static SymTensor sym_part(const Mat3& m);
  static SymTensor scaled_identity(double s) { return {s, 0, 0, s, 0, s}; }

  SymTensor& operator+=(const SymTensor& o);
  SymTensor& operator*=(double s);
};

SymTensor operator+(SymTensor x, const SymTensor& y);
SymTensor operator-(const SymTensor& x, const SymTensor& y);
SymTensor operator*(double s, SymTensor x);
double contract(const SymTensor& x, const SymTensor& y);
double frobenius(const SymTensor& x);
/// x - (tr x / 3) I.
SymTensor deviator(const SymTensor& x);

/// Skew tensor with entries (xy, xz, yz) above the diagonal.
struct SkewTensor {
  double xy = 0, xz = 0, yz = 0;

  Mat3 matrix() const;
  /// Skew part of an arbitrary matrix.
  static SkewTensor skew_part(const Mat3& m);
};

/// Symmetric traceless tensor; q33 is implied so tr(Q) = 0 holds by construction.
struct QTensor {
  double q11 = 0, q12 = 0, q13 = 0, q22 = 0, q23 = 0;

  double q33() const { return -(q11 + q22); }
  Mat3 matrix() const;
  SymTensor sym() const { return {q11, q12, q13, q22, q23, q33()}; }

  QTensor& operator+=(const QTensor& o);
  QTensor& operator-=(const QTensor& o);
  QTensor& operator*=(double s);

  /// Components as an array in storage order.
  std::array<double, 5> components() const { return {q11, q12, q13, q22, q23}; }
  static QTensor from_components(const std::array<double, 5>& c) { return {c[0], c[1], c[2], c[3], c[4]}; }
  double& component(int k);
  double component(int k) const;
};

QTensor operator+(QTensor x, const QTensor& y);
QTensor operator-(QTensor x, const QTensor& y);
QTensor operator*(double s, QTensor x);
/// Frobenius inner product, counting the implied q33 and both off-diagonal copies.
double contract(const QTensor& x, const QTensor& y);
double frobenius(const QTensor& x);

/// Orthogonal projection of M onto symmetric traceless matrices. Throws DomainError on non-finite input.
QTensor project_s30(const Mat3& m);

/// Q Lambda - Lambda Q.
QTensor commutator(const QTensor& q, const SkewTensor& lambda);

struct BulkParams {
  double c_star = 1.0;
  double b = 0.0;
};

/// Molecular field without the Laplacian: -(c - c*)/2 Q + b (Q^2 - tr(Q^2)/3 I) - c* Q tr(Q^2).
QTensor bulk_molecular_field(const QTensor& q, double c, const BulkParams& params);

struct QInvariants {
  double tr_q2 = 0;
  double tr_q3 = 0;
  double frob4 = 0;
};

QInvariants scalar_invariants(const QTensor& q);

/// Uniaxial tensor s (n x n - I/3) for a (not necessarily unit) director n.
QTensor uniaxial(double s, const Vec3& director);

}  // namespace anematic
