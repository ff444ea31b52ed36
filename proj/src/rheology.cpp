#include "anematic/rheology.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "anematic/error.hpp"

namespace anematic {

namespace {

constexpr int kQuadratureNodes = 64;
constexpr double kConjugateBracket = 1e4;

struct KernelRule {
  std::array<double, kQuadratureNodes> r{};
  std::array<double, kQuadratureNodes> value{};  // normalized kernel weights
  std::array<double, kQuadratureNodes> slope{};  // normalized weights of the kernel derivative (per unit radius)
};

double bump_slope(double r) {
  const double one_minus = 1.0 - r * r;
  if (one_minus <= 0.0) return 0.0;
  return bump(r) * (-2.0 * r / (one_minus * one_minus));
}

const KernelRule& kernel_rule() {
  static const KernelRule rule = [] {
    using gauss = boost::math::quadrature::gauss<double, kQuadratureNodes>;
    const auto& x = gauss::abscissa();
    const auto& w = gauss::weights();
    KernelRule k;
    constexpr int half = kQuadratureNodes / 2;
    for (int i = 0; i < half; ++i) {
      k.r[half - 1 - i] = -x[i];
      k.r[half + i] = x[i];
      k.value[half - 1 - i] = w[i];
      k.value[half + i] = w[i];
    }
    k.slope = k.value;
    double z = 0.0;
    for (int i = 0; i < kQuadratureNodes; ++i) {
      k.slope[i] *= bump_slope(k.r[i]);
      k.value[i] *= bump(k.r[i]);
      z += k.value[i];
    }
    for (int i = 0; i < kQuadratureNodes; ++i) {
      k.value[i] /= z;
      k.slope[i] /= z;
    }
    return k;
  }();
  return rule;
}

double bilinear(const RheologyTable& tab, double d, double t) {
  const auto& dn = tab.d;
  const auto& tn = tab.t;
  const double slack = 1e-12 * (1.0 + std::abs(dn.back()) + std::abs(tn.back() - tn.front()));
  if (d < dn.front() - slack || d > dn.back() + slack || t < tn.front() - slack || t > tn.back() + slack) {
    std::ostringstream msg;
    msg << "tabulated rheology queried outside its table at (d, t) = (" << d << ", " << t << ")";
    throw RangeError(msg.str());
  }
  d = std::clamp(d, dn.front(), dn.back());
  t = std::clamp(t, tn.front(), tn.back());
  std::size_t i = std::min<std::size_t>(std::upper_bound(dn.begin(), dn.end(), d) - dn.begin(), dn.size() - 1);
  std::size_t j = std::min<std::size_t>(std::upper_bound(tn.begin(), tn.end(), t) - tn.begin(), tn.size() - 1);
  i = std::max<std::size_t>(i, 1) - 1;
  j = std::max<std::size_t>(j, 1) - 1;
  const double u = (d - dn[i]) / (dn[i + 1] - dn[i]);
  const double v = (t - tn[j]) / (tn[j + 1] - tn[j]);
  return (1 - u) * (1 - v) * tab.at(i, j) + u * (1 - v) * tab.at(i + 1, j) + (1 - u) * v * tab.at(i, j + 1) +
         u * v * tab.at(i + 1, j + 1);
}

std::size_t locate(const std::vector<double>& nodes, double x) {
  std::size_t i = std::upper_bound(nodes.begin(), nodes.end(), x) - nodes.begin();
  i = std::min(std::max<std::size_t>(i, 1), nodes.size() - 1);
  return i - 1;
}

double power_slope(double mu0, double q, double x) {
  if (x == 0.0) return 0.0;
  const double mag = q * mu0 * std::pow(std::abs(x), q - 1.0);
  return x > 0 ? mag : -mag;
}

std::string describe(const SymTensor& s) {
  std::ostringstream msg;
  msg << "|S^dev| = " << frobenius(deviator(s)) << ", tr S = " << s.trace();
  return msg.str();
}

}  // namespace

double bump(double r) {
  const double one_minus = 1.0 - r * r;
  if (one_minus <= 0.0) return 0.0;
  return std::exp(-1.0 / one_minus);
}

namespace {

// Cumulative integrals of the normalized bump and of r times the bump, from -1.
class KernelMoments {
 public:
  KernelMoments() {
    using gauss = boost::math::quadrature::gauss<double, 30>;
    const double h = 2.0 / kNodes;
    m0_[0] = m1_[0] = 0.0;
    for (int i = 0; i < kNodes; ++i) {
      const double lo = -1.0 + i * h, hi = lo + h;
      m0_[i + 1] = m0_[i] + gauss::integrate([](double r) { return bump(r); }, lo, hi);
      m1_[i + 1] = m1_[i] + gauss::integrate([](double r) { return r * bump(r); }, lo, hi);
    }
    z_ = m0_[kNodes];
  }

  std::array<double, 2> at(double r) const {
    using gauss = boost::math::quadrature::gauss<double, 15>;
    if (r <= -1.0) return {0.0, 0.0};
    if (r >= 1.0) return {1.0, m1_[kNodes] / z_};
    const double h = 2.0 / kNodes;
    const int i = std::min(kNodes - 1, static_cast<int>((r + 1.0) / h));
    const double lo = -1.0 + i * h;
    const double a = gauss::integrate([](double x) { return bump(x); }, lo, r);
    const double b = gauss::integrate([](double x) { return x * bump(x); }, lo, r);
    return {(m0_[i] + a) / z_, (m1_[i] + b) / z_};
  }

 private:
  static constexpr int kNodes = 256;
  std::array<double, kNodes + 1> m0_{}, m1_{};
  double z_ = 1.0;
};

const KernelMoments& kernel_moments() {
  static const KernelMoments m;
  return m;
}

}  // namespace

// Exact convolution of the bilinear table, extended evenly in d, with the product bump kernel. On every table cell
// the integrand is a polynomial of degree one in each kernel variable, so only the kernel moments are needed.
struct RheologyLaw::Smoothed {
  std::shared_ptr<const RheologyTable> table;
  std::vector<double> x;  // d nodes reflected through 0
  double delta = 0.0;
  double origin = 0.0;

  Smoothed(std::shared_ptr<const RheologyTable> t, double radius) : table(std::move(t)), delta(radius) {
    const auto& d = table->d;
    for (std::size_t i = d.size() - 1; i > 0; --i) x.push_back(-d[i]);
    x.insert(x.end(), d.begin(), d.end());
    origin = raw(0.0, 0.0)[0];
  }

  double d_max() const { return table->d.back() - delta; }
  double t_min() const { return table->t.front() + delta; }
  double t_max() const { return table->t.back() - delta; }

  // {F, dF/dd, dF/dt} without the origin shift.
  std::array<double, 3> raw(double d, double t) const {
    const auto& tn = table->t;
    const auto& km = kernel_moments();
    const std::size_t half = table->d.size() - 1;  // index of d = 0 in x
    auto value_at = [&](std::size_t xi, std::size_t tj) { return table->at(xi >= half ? xi - half : half - xi, tj); };
    double f = 0, fd = 0, ft = 0;
    const std::size_t p0 = locate(x, d - delta), q0 = locate(tn, t - delta);
    for (std::size_t p = p0; p + 1 < x.size() && x[p] < d + delta; ++p) {
      const double hx = x[p + 1] - x[p];
      const auto lo_x = km.at((d - x[p + 1]) / delta), hi_x = km.at((d - x[p]) / delta);
      const double mx0 = hi_x[0] - lo_x[0], mx1 = hi_x[1] - lo_x[1];
      if (mx0 == 0.0 && mx1 == 0.0) continue;
      // Kernel integrals of 1 and of the local coordinate (x - x_p) / hx with x = d - delta r.
      const double ix0 = mx0, ix1 = ((d - x[p]) * mx0 - delta * mx1) / hx;
      for (std::size_t q = q0; q + 1 < tn.size() && tn[q] < t + delta; ++q) {
        const double ht = tn[q + 1] - tn[q];
        const auto lo_t = km.at((t - tn[q + 1]) / delta), hi_t = km.at((t - tn[q]) / delta);
        const double my0 = hi_t[0] - lo_t[0], my1 = hi_t[1] - lo_t[1];
        const double iy0 = my0, iy1 = ((t - tn[q]) * my0 - delta * my1) / ht;
        const double f00 = value_at(p, q), f10 = value_at(p + 1, q), f01 = value_at(p, q + 1),
                     f11 = value_at(p + 1, q + 1);
        const double b = f10 - f00, c = f01 - f00, e = f11 - f10 - f01 + f00;
        f += f00 * ix0 * iy0 + b * ix1 * iy0 + c * ix0 * iy1 + e * ix1 * iy1;
        fd += (b * ix0 * iy0 + e * ix0 * iy1) / hx;
        ft += (c * ix0 * iy0 + e * ix1 * iy0) / ht;
      }
    }
    return {f, fd, ft};
  }

  std::array<double, 3> evaluate(double d, double t) const {
    const double slack = 1e-12 * (1.0 + table->d.back() + (table->t.back() - table->t.front()));
    if (d < -slack || d > d_max() + slack || t < t_min() - slack || t > t_max() + slack) {
      std::ostringstream msg;
      msg << "mollified rheology table queried outside its range at (d, t) = (" << d << ", " << t << ")";
      throw RangeError(msg.str());
    }
    auto v = raw(std::clamp(d, 0.0, d_max()), std::clamp(t, t_min(), t_max()));
    v[0] -= origin;
    return v;
  }
};

RheologyLaw RheologyLaw::newtonian(double mu, double lambda) {
  if (!(mu > 0.0) || !std::isfinite(lambda)) throw ConfigError("newtonian rheology needs mu > 0 and finite lambda");
  if (mu + 3.0 * lambda < 0.0) throw ConfigError("newtonian rheology needs mu + 3 lambda >= 0 for a convex potential");
  RheologyLaw law;
  law.kind_ = Kind::newtonian;
  law.mu_ = mu;
  law.lambda_ = lambda;
  return law;
}

RheologyLaw RheologyLaw::power_law(double mu0, double exponent) {
  if (!(mu0 > 0.0) || !(exponent > 1.0) || !std::isfinite(exponent))
    throw ConfigError("power-law rheology needs mu0 > 0 and exponent > 1");
  RheologyLaw law;
  law.kind_ = Kind::power_law;
  law.mu0_ = mu0;
  law.exponent_ = exponent;
  return law;
}

RheologyLaw RheologyLaw::tabulated(RheologyTable table) {
  if (table.d.size() < 2 || table.t.size() < 2 || table.values.size() != table.d.size() * table.t.size())
    throw ConfigError("tabulated rheology: table shape does not match its (d, t) grid");
  if (!std::is_sorted(table.d.begin(), table.d.end()) || !std::is_sorted(table.t.begin(), table.t.end()) ||
      std::adjacent_find(table.d.begin(), table.d.end()) != table.d.end() ||
      std::adjacent_find(table.t.begin(), table.t.end()) != table.t.end())
    throw ConfigError("tabulated rheology: grid must be strictly increasing");
  if (table.d.front() != 0.0) throw ConfigError("tabulated rheology: d grid must start at 0");
  if (!(table.t.front() < 0.0 && table.t.back() > 0.0))
    throw ConfigError("tabulated rheology: t grid must straddle 0");
  for (double v : table.values)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("tabulated rheology: values must be finite and >= 0");
  RheologyLaw law;
  law.kind_ = Kind::tabulated;
  law.table_ = std::make_shared<RheologyTable>(std::move(table));
  if (std::abs(law.raw_reduced(0.0, 0.0)) > 1e-14) throw ConfigError("tabulated rheology: f(0, 0) must be 0");
  return law;
}

double RheologyLaw::coercivity_modulus() const {
  switch (kind_) {
    case Kind::newtonian: return 0.5 * mu_;
    case Kind::power_law: return mu0_;
    case Kind::tabulated: {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < table_->d.size(); ++i) {
        if (table_->d[i] < 1.0) continue;
        for (std::size_t j = 0; j < table_->t.size(); ++j)
          best = std::min(best, table_->at(i, j) / std::pow(table_->d[i], 4.0 / 3.0));
      }
      return std::isfinite(best) ? best : 0.0;
    }
  }
  return 0.0;
}

double RheologyLaw::raw_reduced(double d, double t) const {
  switch (kind_) {
    case Kind::newtonian: return 0.5 * mu_ * d * d + (mu_ + 3.0 * lambda_) * t * t / 6.0;
    case Kind::power_law: return mu0_ * std::pow(std::abs(d), exponent_);
    case Kind::tabulated: return bilinear(*table_, std::abs(d), t);
  }
  return 0.0;
}

double RheologyLaw::reduced(double d, double t) const {
  if (delta_ == 0.0 || kind_ == Kind::newtonian) return raw_reduced(d, t);
  if (kind_ == Kind::power_law) {
    double sum = 0.0;
    for (std::size_t k = 0; k < shift_.size(); ++k) sum += weight_[k] * mu0_ * std::pow(std::abs(d - shift_[k]), exponent_);
    return sum - shift_norm_;
  }
  return smooth_->evaluate(d, t)[0];
}

std::array<double, 2> RheologyLaw::reduced_gradient(double d, double t) const {
  switch (kind_) {
    case Kind::newtonian: return {mu_ * d, (mu_ + 3.0 * lambda_) * t / 3.0};
    case Kind::power_law: {
      if (delta_ == 0.0) return {power_slope(mu0_, exponent_, d), 0.0};
      double sum = 0.0;
      for (std::size_t k = 0; k < shift_.size(); ++k) sum += weight_[k] * power_slope(mu0_, exponent_, d - shift_[k]);
      return {sum, 0.0};
    }
    case Kind::tabulated: {
      if (delta_ == 0.0) throw ConfigError("tabulated rheology needs mollification radius delta > 0 for a subgradient");
      const auto v = smooth_->evaluate(d, t);
      return {v[1], v[2]};
    }
  }
  return {0.0, 0.0};
}

std::array<double, 3> RheologyLaw::search_box() const {
  if (kind_ == Kind::tabulated) {
    if (smooth_) return {smooth_->d_max(), smooth_->t_min(), smooth_->t_max()};
    return {table_->d.back(), table_->t.front(), table_->t.back()};
  }
  return {kConjugateBracket, -kConjugateBracket, kConjugateBracket};
}

double mollified_by_quadrature(const std::function<double(double, double)>& f, double delta, double d, double t) {
  const KernelRule& k = kernel_rule();
  double at_point = 0.0, at_origin = 0.0;
  for (int a = 0; a < kQuadratureNodes; ++a) {
    double row_point = 0.0, row_origin = 0.0;
    for (int b = 0; b < kQuadratureNodes; ++b) {
      row_point += k.value[b] * f(std::abs(d - delta * k.r[a]), t - delta * k.r[b]);
      row_origin += k.value[b] * f(std::abs(delta * k.r[a]), -delta * k.r[b]);
    }
    at_point += k.value[a] * row_point;
    at_origin += k.value[a] * row_origin;
  }
  return at_point - at_origin;
}

RheologyLaw mollify(const RheologyLaw& law, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("mollify: delta must be > 0");
  RheologyLaw out = law;
  out.delta_ = delta;
  const KernelRule& k = kernel_rule();
  switch (law.kind_) {
    case RheologyLaw::Kind::newtonian:
      // Convolving a quadratic with a symmetric kernel only adds a constant, removed by the normalization.
      break;
    case RheologyLaw::Kind::power_law: {
      out.shift_.resize(kQuadratureNodes);
      out.weight_.resize(kQuadratureNodes);
      double norm = 0.0;
      for (int a = 0; a < kQuadratureNodes; ++a) {
        out.shift_[a] = delta * k.r[a];
        out.weight_[a] = k.value[a];
        norm += k.value[a] * law.mu0_ * std::pow(std::abs(out.shift_[a]), law.exponent_);
      }
      out.shift_norm_ = norm;
      break;
    }
    case RheologyLaw::Kind::tabulated: {
      const RheologyTable& raw = *law.table_;
      if (!(raw.d.back() > delta) || !(raw.t.front() + delta < 0.0) || !(raw.t.back() - delta > 0.0))
        throw ConfigError("tabulated rheology: table too small for the requested mollification radius");
      out.smooth_ = std::make_shared<const RheologyLaw::Smoothed>(law.table_, delta);
      break;
    }
  }
  return out;
}

double potential(const RheologyLaw& law, const SymTensor& d) {
  if (law.kind() == RheologyLaw::Kind::newtonian) {
    const double tr = d.trace();
    return 0.5 * law.mu() * contract(d, d) + 0.5 * law.lambda() * tr * tr;
  }
  const auto r = reduced_coordinates(d);
  return law.reduced(r[0], r[1]);
}

SymTensor subgradient(const RheologyLaw& law, const SymTensor& d) {
  if (law.kind() == RheologyLaw::Kind::newtonian) {
    return law.mu() * d + SymTensor::scaled_identity(law.lambda() * d.trace());
  }
  const SymTensor dev = deviator(d);
  const double dn = frobenius(dev);
  const auto g = law.reduced_gradient(dn, d.trace());
  SymTensor s = SymTensor::scaled_identity(g[1]);
  if (dn > 0.0) s += (g[0] / dn) * dev;
  return s;
}

double conjugate(const RheologyLaw& law, const SymTensor& s) {
  const double sn = frobenius(deviator(s));
  const double sigma = s.trace();
  if (law.kind() == RheologyLaw::Kind::newtonian) {
    const double bulk = law.mu() + 3.0 * law.lambda();
    double value = sn * sn / (2.0 * law.mu());
    if (bulk > 0.0) return value + sigma * sigma / (6.0 * bulk);
    return sigma == 0.0 ? value : std::numeric_limits<double>::infinity();
  }
  if (!law.depends_on_trace() && std::abs(sigma) > 1e-12 * (1.0 + sn)) return std::numeric_limits<double>::infinity();

  const auto box = law.search_box();
  const double d_max = box[0];
  const int bits = std::numeric_limits<double>::digits / 2;
  auto inner = [&](double t, double* argmax) {
    auto neg = [&](double d) { return -(sn * d + sigma * t / 3.0 - law.reduced(d, t)); };
    const auto best = boost::math::tools::brent_find_minima(neg, 0.0, d_max, bits);
    if (argmax) *argmax = best.first;
    return -best.second;
  };
  double d_star = 0.0, t_star = 0.0, value = 0.0;
  if (!law.depends_on_trace()) {
    value = inner(0.0, &d_star);
  } else {
    auto neg_outer = [&](double t) { return -inner(t, nullptr); };
    const auto best = boost::math::tools::brent_find_minima(neg_outer, box[1], box[2], bits);
    t_star = best.first;
    value = inner(t_star, &d_star);
    const double t_span = box[2] - box[1];
    if (t_star < box[1] + 1e-6 * t_span || t_star > box[2] - 1e-6 * t_span)
      throw RangeError("conjugate: maximizer reached the trace bracket for " + describe(s));
  }
  if (d_star > d_max * (1.0 - 1e-6)) throw RangeError("conjugate: maximizer reached the bracket for " + describe(s));
  // The sup is at least the value at D = 0.
  return std::max(value, 0.0);
}

double fenchel_young_residual(const RheologyLaw& law, const SymTensor& d, const SymTensor& s) {
  return contract(s, d) - potential(law, d) - conjugate(law, s);
}

CoercivityCertificate certify_coercivity(const RheologyLaw& law) {
  const auto box = law.search_box();
  const double d_limit = std::min(10.0, box[0]);
  std::vector<std::array<double, 2>> samples;
  for (int i = 0; i <= 200; ++i) {
    const double d = d_limit * i / 200.0;
    if (!law.depends_on_trace()) {
      samples.push_back({d, 0.0});
      continue;
    }
    for (int j = -20; j <= 20; ++j) {
      const double t = 0.5 * j;
      if (t < box[1] || t > box[2] || d * d + t * t / 3.0 > 100.0) continue;
      samples.push_back({d, t});
    }
  }
  CoercivityCertificate cert;
  double mu1 = std::numeric_limits<double>::infinity();
  for (const auto& p : samples)
    if (p[0] >= 1.0) mu1 = std::min(mu1, law.reduced(p[0], p[1]) / std::pow(p[0], 4.0 / 3.0));
  if (!std::isfinite(mu1)) return cert;
  double mu2 = 0.0;
  for (const auto& p : samples) mu2 = std::max(mu2, mu1 * std::pow(p[0], 4.0 / 3.0) - law.reduced(p[0], p[1]));
  cert.mu1 = mu1;
  cert.mu2 = mu2;
  cert.pass = mu1 > 0.0 && mu1 >= 0.5 * law.coercivity_modulus();
  return cert;
}

double ConjugateTable::operator()(double s_value, double sigma_value) const {
  if (s.size() < 2 || sigma.size() < 2) throw ShapeError("ConjugateTable: needs at least 2 nodes per axis");
  if (s_value < s.front() || s_value > s.back() || sigma_value < sigma.front() || sigma_value > sigma.back())
    throw RangeError("ConjugateTable: query outside the tabulated range");
  const std::size_t i = locate(s, s_value);
  const std::size_t j = locate(sigma, sigma_value);
  const double u = (s_value - s[i]) / (s[i + 1] - s[i]);
  const double v = (sigma_value - sigma[j]) / (sigma[j + 1] - sigma[j]);
  const std::size_t n = sigma.size();
  return (1 - u) * (1 - v) * values[i * n + j] + u * (1 - v) * values[(i + 1) * n + j] +
         (1 - u) * v * values[i * n + j + 1] + u * v * values[(i + 1) * n + j + 1];
}

ConjugateTable tabulate_conjugate(const RheologyLaw& law, const std::vector<double>& s,
                                  const std::vector<double>& sigma) {
  ConjugateTable table{s, sigma, std::vector<double>(s.size() * sigma.size())};
  const double unit = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < sigma.size(); ++j) {
      const SymTensor stress{s[i] * unit + sigma[j] / 3.0, 0, 0, -s[i] * unit + sigma[j] / 3.0, 0, sigma[j] / 3.0};
      table.values[i * sigma.size() + j] = conjugate(law, stress);
    }
  }
  return table;
}

}  // namespace anematic
