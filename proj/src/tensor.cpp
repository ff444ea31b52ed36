#include "anematic/tensor.hpp"

#include "anematic/error.hpp"

namespace anematic {

Mat3 Mat3::identity() { return diag(1.0, 1.0, 1.0); }

Mat3 Mat3::diag(double d0, double d1, double d2) {
  Mat3 m;
  m.a[0][0] = d0;
  m.a[1][1] = d1;
  m.a[2][2] = d2;
  return m;
}

Mat3 Mat3::transpose() const {
  Mat3 t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t.a[i][j] = a[j][i];
  return t;
}

bool Mat3::finite() const {
  for (const auto& row : a)
    for (double v : row)
      if (!std::isfinite(v)) return false;
  return true;
}

Mat3& Mat3::operator+=(const Mat3& o) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] += o.a[i][j];
  return *this;
}

Mat3& Mat3::operator-=(const Mat3& o) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] -= o.a[i][j];
  return *this;
}

Mat3& Mat3::operator*=(double s) {
  for (auto& row : a)
    for (double& v : row) v *= s;
  return *this;
}

Mat3 operator+(Mat3 x, const Mat3& y) { return x += y; }
Mat3 operator-(Mat3 x, const Mat3& y) { return x -= y; }
Mat3 operator*(double s, Mat3 x) { return x *= s; }

Mat3 operator*(const Mat3& x, const Mat3& y) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.a[i][j] = x.a[i][0] * y.a[0][j] + x.a[i][1] * y.a[1][j] + x.a[i][2] * y.a[2][j];
  return r;
}

Vec3 operator*(const Mat3& x, const Vec3& v) {
  return {x.a[0][0] * v[0] + x.a[0][1] * v[1] + x.a[0][2] * v[2],
          x.a[1][0] * v[0] + x.a[1][1] * v[1] + x.a[1][2] * v[2],
          x.a[2][0] * v[0] + x.a[2][1] * v[1] + x.a[2][2] * v[2]};
}

double contract(const Mat3& x, const Mat3& y) {
  double s = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += x.a[i][j] * y.a[i][j];
  return s;
}

double frobenius(const Mat3& x) { return std::sqrt(contract(x, x)); }

Mat3 SymTensor::matrix() const {
  Mat3 m;
  m.a = {{{xx, xy, xz}, {xy, yy, yz}, {xz, yz, zz}}};
  return m;
}

SymTensor SymTensor::sym_part(const Mat3& m) {
  return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), 0.5 * (m(0, 2) + m(2, 0)),
          m(1, 1), 0.5 * (m(1, 2) + m(2, 1)), m(2, 2)};
}

SymTensor& SymTensor::operator+=(const SymTensor& o) {
  xx += o.xx;
  xy += o.xy;
  xz += o.xz;
  yy += o.yy;
  yz += o.yz;
  zz += o.zz;
  return *this;
}

SymTensor& SymTensor::operator*=(double s) {
  xx *= s;
  xy *= s;
  xz *= s;
  yy *= s;
  yz *= s;
  zz *= s;
  return *this;
}

SymTensor operator+(SymTensor x, const SymTensor& y) { return x += y; }
SymTensor operator-(const SymTensor& x, const SymTensor& y) {
  return {x.xx - y.xx, x.xy - y.xy, x.xz - y.xz, x.yy - y.yy, x.yz - y.yz, x.zz - y.zz};
}
SymTensor operator*(double s, SymTensor x) { return x *= s; }

double contract(const SymTensor& x, const SymTensor& y) {
  return x.xx * y.xx + x.yy * y.yy + x.zz * y.zz + 2.0 * (x.xy * y.xy + x.xz * y.xz + x.yz * y.yz);
}

double frobenius(const SymTensor& x) { return std::sqrt(contract(x, x)); }

SymTensor deviator(const SymTensor& x) {
  const double m = x.trace() / 3.0;
  return {x.xx - m, x.xy, x.xz, x.yy - m, x.yz, x.zz - m};
}

Mat3 SkewTensor::matrix() const {
  Mat3 m;
  m.a = {{{0.0, xy, xz}, {-xy, 0.0, yz}, {-xz, -yz, 0.0}}};
  return m;
}

SkewTensor SkewTensor::skew_part(const Mat3& m) {
  return {0.5 * (m(0, 1) - m(1, 0)), 0.5 * (m(0, 2) - m(2, 0)), 0.5 * (m(1, 2) - m(2, 1))};
}

Mat3 QTensor::matrix() const {
  Mat3 m;
  m.a = {{{q11, q12, q13}, {q12, q22, q23}, {q13, q23, q33()}}};
  return m;
}

double& QTensor::component(int k) {
  switch (k) {
    case 0: return q11;
    case 1: return q12;
    case 2: return q13;
    case 3: return q22;
    default: return q23;
  }
}

double QTensor::component(int k) const { return const_cast<QTensor*>(this)->component(k); }

QTensor& QTensor::operator+=(const QTensor& o) {
  q11 += o.q11;
  q12 += o.q12;
  q13 += o.q13;
  q22 += o.q22;
  q23 += o.q23;
  return *this;
}

QTensor& QTensor::operator-=(const QTensor& o) {
  q11 -= o.q11;
  q12 -= o.q12;
  q13 -= o.q13;
  q22 -= o.q22;
  q23 -= o.q23;
  return *this;
}

QTensor& QTensor::operator*=(double s) {
  q11 *= s;
  q12 *= s;
  q13 *= s;
  q22 *= s;
  q23 *= s;
  return *this;
}

QTensor operator+(QTensor x, const QTensor& y) { return x += y; }
QTensor operator-(QTensor x, const QTensor& y) { return x -= y; }
QTensor operator*(double s, QTensor x) { return x *= s; }

double contract(const QTensor& x, const QTensor& y) {
  return x.q11 * y.q11 + x.q22 * y.q22 + x.q33() * y.q33() + 2.0 * (x.q12 * y.q12 + x.q13 * y.q13 + x.q23 * y.q23);
}

double frobenius(const QTensor& x) { return std::sqrt(contract(x, x)); }

namespace {

QTensor encode_traceless(const Mat3& m) { return {m(0, 0), m(0, 1), m(0, 2), m(1, 1), m(1, 2)}; }

}  // namespace

QTensor project_s30(const Mat3& m) {
  if (!m.finite()) throw DomainError("project_s30: non-finite matrix entry");
  SymTensor s = SymTensor::sym_part(m);
  const double third = s.trace() / 3.0;
  return {s.xx - third, s.xy, s.xz, s.yy - third, s.yz};
}

QTensor commutator(const QTensor& q, const SkewTensor& lambda) {
  const Mat3 qm = q.matrix();
  const Mat3 lm = lambda.matrix();
  return encode_traceless(qm * lm - lm * qm);
}

QTensor bulk_molecular_field(const QTensor& q, double c, const BulkParams& params) {
  const Mat3 qm = q.matrix();
  const Mat3 q2 = qm * qm;
  const double tr2 = q2.trace();
  QTensor square = encode_traceless(q2);
  square.q11 -= tr2 / 3.0;
  square.q22 -= tr2 / 3.0;
  return (-0.5 * (c - params.c_star) - params.c_star * tr2) * q + params.b * square;
}

QInvariants scalar_invariants(const QTensor& q) {
  const Mat3 qm = q.matrix();
  const Mat3 q2 = qm * qm;
  const double tr2 = q2.trace();
  return {tr2, contract(q2, qm), tr2 * tr2};
}

QTensor uniaxial(double s, const Vec3& director) {
  const double n2 = dot(director, director);
  if (n2 == 0.0) return {};
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = s * director[i] * director[j] / n2;
  return project_s30(m);
}

}  // namespace anematic
