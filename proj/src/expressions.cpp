#include "anematic/expressions.hpp"

#include <cmath>
#include <numbers>

namespace anematic {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

ScalarExpr ScalarExpr::constant(double value) {
  ScalarExpr e;
  e.kind_ = Kind::constant;
  e.base_ = value;
  return e;
}

ScalarExpr ScalarExpr::cosine(double base, double amp, std::array<int, 3> k, std::array<double, 3> extent) {
  ScalarExpr e;
  e.kind_ = Kind::cosine;
  e.base_ = base;
  e.amp_ = amp;
  e.k_ = k;
  e.extent_ = extent;
  return e;
}

ScalarExpr ScalarExpr::sine(double base, double amp, std::array<int, 3> k, std::array<double, 3> extent) {
  ScalarExpr e = cosine(base, amp, k, extent);
  e.kind_ = Kind::sine;
  return e;
}

double ScalarExpr::value(const Vec3& x) const {
  if (kind_ == Kind::constant) return base_;
  double prod = 1.0;
  for (int a = 0; a < 3; ++a) {
    const double arg = k_[a] * kPi * x[a] / extent_[a];
    if (kind_ == Kind::cosine)
      prod *= std::cos(arg);
    else if (k_[a] > 0)
      prod *= std::sin(arg);
  }
  return base_ + amp_ * prod;
}

Vec3 ScalarExpr::gradient(const Vec3& x) const {
  if (kind_ == Kind::constant) return {0, 0, 0};
  std::array<double, 3> f{}, df{};
  for (int a = 0; a < 3; ++a) {
    const double w = k_[a] * kPi / extent_[a];
    const double arg = w * x[a];
    if (kind_ == Kind::cosine) {
      f[a] = std::cos(arg);
      df[a] = -w * std::sin(arg);
    } else if (k_[a] > 0) {
      f[a] = std::sin(arg);
      df[a] = w * std::cos(arg);
    } else {
      f[a] = 1.0;
      df[a] = 0.0;
    }
  }
  return {amp_ * df[0] * f[1] * f[2], amp_ * f[0] * df[1] * f[2], amp_ * f[0] * f[1] * df[2]};
}

double ScalarExpr::laplacian(const Vec3& x) const {
  if (kind_ == Kind::constant) return 0.0;
  double w2 = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double w = k_[a] * kPi / extent_[a];
    w2 += w * w;
  }
  return -w2 * (value(x) - base_);
}

double ScalarExpr::min_bound() const { return base_ - std::abs(amp_); }
double ScalarExpr::max_bound() const { return base_ + std::abs(amp_); }

VectorExpr VectorExpr::zero() { return {}; }

VectorExpr VectorExpr::constant(const Vec3& value) {
  VectorExpr e;
  e.kind_ = Kind::constant;
  e.constant_ = value;
  e.scale_ = norm(value);
  return e;
}

VectorExpr VectorExpr::shear(double rate, std::array<double, 3> extent) {
  VectorExpr e;
  e.kind_ = Kind::shear;
  e.scale_ = rate;
  e.extent_ = extent;
  return e;
}

VectorExpr VectorExpr::channel(double umax, std::array<double, 3> extent) {
  VectorExpr e;
  e.kind_ = Kind::channel;
  e.scale_ = umax;
  e.extent_ = extent;
  return e;
}

VectorExpr VectorExpr::rotation(double rate, std::array<double, 3> extent) {
  VectorExpr e;
  e.kind_ = Kind::rotation;
  e.scale_ = rate;
  e.extent_ = extent;
  return e;
}

Vec3 VectorExpr::value(const Vec3& x) const {
  switch (kind_) {
    case Kind::zero: return {0, 0, 0};
    case Kind::constant: return constant_;
    case Kind::shear: return {scale_ * (x[1] - 0.5 * extent_[1]), 0, 0};
    case Kind::channel: {
      const double ly = extent_[1], lz = extent_[2];
      return {scale_ * 16.0 * x[1] * (ly - x[1]) * x[2] * (lz - x[2]) / (ly * ly * lz * lz), 0, 0};
    }
    case Kind::rotation:
      return {-scale_ * (x[1] - 0.5 * extent_[1]), scale_ * (x[0] - 0.5 * extent_[0]), 0};
  }
  return {0, 0, 0};
}

Mat3 VectorExpr::jacobian(const Vec3& x) const {
  Mat3 j;
  switch (kind_) {
    case Kind::zero:
    case Kind::constant: break;
    case Kind::shear: j(0, 1) = scale_; break;
    case Kind::channel: {
      const double ly = extent_[1], lz = extent_[2];
      const double c = scale_ * 16.0 / (ly * ly * lz * lz);
      j(0, 1) = c * (ly - 2.0 * x[1]) * x[2] * (lz - x[2]);
      j(0, 2) = c * x[1] * (ly - x[1]) * (lz - 2.0 * x[2]);
      break;
    }
    case Kind::rotation:
      j(0, 1) = -scale_;
      j(1, 0) = scale_;
      break;
  }
  return j;
}

QExpr QExpr::zero() { return {}; }

QExpr QExpr::uniaxial(double s, const Vec3& director) {
  QExpr e;
  e.kind_ = Kind::uniaxial;
  e.s_ = s;
  e.director_ = director;
  return e;
}

QExpr QExpr::twist(double s, double amp, std::array<double, 3> extent) {
  QExpr e;
  e.kind_ = Kind::twist;
  e.s_ = s;
  e.amp_ = amp;
  e.extent_ = extent;
  return e;
}

QTensor QExpr::value(const Vec3& x) const {
  switch (kind_) {
    case Kind::zero: return {};
    case Kind::uniaxial: return anematic::uniaxial(s_, director_);
    case Kind::twist: {
      double theta = amp_;
      for (int a = 0; a < 3; ++a) theta *= std::sin(kPi * x[a] / extent_[a]);
      return anematic::uniaxial(s_, {std::cos(theta), std::sin(theta), 0.0});
    }
  }
  return {};
}

}  // namespace anematic
