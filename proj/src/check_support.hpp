#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "anematic/checks.hpp"

namespace anematic::checks {

/// Uniform random tensors for property inputs.
class Sampler {
 public:
  explicit Sampler(unsigned long seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  Vec3 vec(double scale) { return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)}; }
  Mat3 mat(double scale) {
    Mat3 m;
    for (auto& row : m.a)
      for (auto& x : row) x = uniform(-scale, scale);
    return m;
  }
  SymTensor sym(double scale) { return SymTensor::sym_part(mat(scale)); }
  QTensor q(double scale) {
    return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale),
            uniform(-scale, scale)};
  }
  SkewTensor skew(double scale) { return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)}; }
  std::vector<double> coefficients(std::size_t n, double scale) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(-scale, scale);
    return v;
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double max_abs(const Mat3& m) {
  double s = 0.0;
  for (const auto& row : m.a)
    for (double x : row) s = std::max(s, std::abs(x));
  return s;
}

/// Empirical order from errors at h and h/2.
inline double order(double coarse, double fine) { return std::log2(coarse / fine); }

/// Turns an exception of the expected type into a passing line.
template <class E, class F>
CheckLine throws(const std::string& name, F&& f) {
  try {
    f();
  } catch (const E&) {
    return {name, true, 1.0, 1.0};
  } catch (...) {
    return {name, false, -1.0, 1.0};
  }
  return {name, false, 0.0, 1.0};
}

}  // namespace anematic::checks
