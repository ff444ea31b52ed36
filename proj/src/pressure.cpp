#include "anematic/pressure.hpp"

#include <algorithm>
#include <cmath>

// pchip.hpp in Boost 1.74 calls isnan unqualified.
namespace boost::math::interpolators {
using std::isnan;
}

#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "anematic/error.hpp"

namespace anematic {

struct PressureLaw::Table {
  using Interpolant = boost::math::interpolators::pchip<std::vector<double>>;

  std::vector<double> rho;
  std::vector<double> p;
  std::vector<double> slope;  // knot slopes of the interpolant
  std::unique_ptr<Interpolant> interp;
  double floor = 0.0;          // lower cutoff of the improper integral
  double shift = 0.0;          // linear term fixing the normalization
  double floor_exponent = 1.0;  // local growth exponent at the cutoff
  std::vector<double> cumulative;  // integral of p/s^2 from the cutoff to each knot (knot 0 unused)

  double eval(double r) const { return (*interp)(r); }
  double eval_slope(double r) const { return interp->prime(r); }

  // Integral of p(s)/s^2 over [lo, hi] inside one segment away from the origin.
  double segment_integral(double lo, double hi) const {
    using gauss = boost::math::quadrature::gauss<double, 20>;
    return gauss::integrate([this](double s) { return eval(s) / (s * s); }, lo, hi);
  }

  // Integral over [floor, r] for r in the first segment, using its exact cubic form.
  double first_segment_integral(double r) const {
    const double x1 = rho[1];
    const double m0 = slope[0], m1 = slope[1], y1 = p[1];
    const double c2 = (-2.0 * x1 * m0 + 3.0 * y1 - x1 * m1) / (x1 * x1);
    const double c3 = (x1 * m0 - 2.0 * y1 + x1 * m1) / (x1 * x1 * x1);
    return m0 * std::log(r / floor) + c2 * (r - floor) + 0.5 * c3 * (r * r - floor * floor);
  }

  double integral_to(double r) const {
    if (r <= rho[1]) return first_segment_integral(r);
    std::size_t i = std::upper_bound(rho.begin(), rho.end(), r) - rho.begin() - 1;
    i = std::min(i, rho.size() - 2);
    return cumulative[i] + segment_integral(rho[i], r);
  }

  double potential(double r) const {
    if (r >= floor) return r * (integral_to(r) + shift);
    const double at_floor = floor * shift;
    return at_floor * std::pow(r / floor, floor_exponent);
  }
};

PressureLaw PressureLaw::isentropic(double a, double gamma, double rho_max) {
  if (!(a > 0.0) || !(gamma > 1.0) || !std::isfinite(gamma)) throw ConfigError("isentropic pressure needs a > 0 and gamma > 1");
  if (!(rho_max > 0.0)) throw ConfigError("pressure law needs rho_max > 0");
  PressureLaw law;
  law.kind_ = Kind::isentropic;
  law.a_ = a;
  law.gamma_ = gamma;
  law.rho_max_ = rho_max;
  return law;
}

PressureLaw PressureLaw::general(std::vector<double> rho, std::vector<double> p) {
  if (rho.size() < 4 || rho.size() != p.size()) throw ConfigError("pressure table needs at least 4 (rho, p) rows");
  if (rho.front() != 0.0 || p.front() != 0.0) throw ConfigError("pressure table must start at (0, 0)");
  for (std::size_t i = 1; i < rho.size(); ++i) {
    if (!(rho[i] > rho[i - 1])) throw ConfigError("pressure table: rho must be strictly increasing");
    if (!(p[i] > p[i - 1])) throw ConfigError("pressure table: p must be strictly increasing");
  }
  auto table = std::make_shared<Table>();
  table->rho = rho;
  table->p = p;
  table->interp = std::make_unique<Table::Interpolant>(std::move(rho), std::move(p));
  for (double r : table->rho) table->slope.push_back(table->eval_slope(r));

  PressureLaw law;
  law.kind_ = Kind::general;
  law.rho_max_ = table->rho.back();
  law.a_ = 0.0;
  law.gamma_ = 0.0;

  table->floor = 1e-8 * law.rho_max_;
  if (table->floor >= table->rho[1]) throw ConfigError("pressure table: first density sample too close to 0");
  const double p_floor = table->eval(table->floor);
  const double local = p_floor > 0.0 ? table->floor * table->eval_slope(table->floor) / p_floor : 1.0;
  table->floor_exponent = std::max(local, 1.0);
  table->shift = local > 1.0 + 1e-6 ? p_floor / (table->floor * (local - 1.0)) : 0.0;

  table->cumulative.assign(table->rho.size(), 0.0);
  table->cumulative[1] = table->first_segment_integral(table->rho[1]);
  for (std::size_t i = 2; i < table->rho.size(); ++i)
    table->cumulative[i] = table->cumulative[i - 1] + table->segment_integral(table->rho[i - 1], table->rho[i]);
  law.table_ = std::move(table);
  return law;
}

PressureLaw PressureLaw::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open pressure table '" + path + "'");
  std::vector<double> rho, p;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double r = 0, v = 0;
    if (!(row >> r >> v)) {
      if (first) {
        first = false;
        continue;
      }
      throw ConfigError("pressure table '" + path + "': malformed row '" + line + "'");
    }
    first = false;
    rho.push_back(r);
    p.push_back(v);
  }
  return general(std::move(rho), std::move(p));
}

void PressureLaw::check(double rho) const {
  if (!(rho >= 0.0) || rho > rho_max_) {
    std::ostringstream msg;
    msg << "density " << rho << " outside the pressure law range [0, " << rho_max_ << "]";
    throw DomainError(msg.str());
  }
}

double PressureLaw::pressure(double rho) const {
  check(rho);
  if (kind_ == Kind::isentropic) return a_ * std::pow(rho, gamma_);
  return rho == 0.0 ? 0.0 : std::max(table_->eval(rho), 0.0);
}

double PressureLaw::slope(double rho) const {
  check(rho);
  if (kind_ == Kind::isentropic) return a_ * gamma_ * std::pow(rho, gamma_ - 1.0);
  return table_->eval_slope(rho);
}

double PressureLaw::potential(double rho) const {
  check(rho);
  if (kind_ == Kind::isentropic) return a_ * std::pow(rho, gamma_) / (gamma_ - 1.0);
  return rho == 0.0 ? 0.0 : table_->potential(rho);
}

double PressureLaw::potential_curvature(double rho) const {
  check(rho);
  if (kind_ == Kind::isentropic) return a_ * gamma_ * std::pow(rho, gamma_ - 2.0);
  if (rho == 0.0) return std::numeric_limits<double>::infinity();
  return table_->eval_slope(rho) / rho;
}

double PressureLaw::potential_slope(double rho) const {
  check(rho);
  if (kind_ == Kind::isentropic) return a_ * gamma_ / (gamma_ - 1.0) * std::pow(rho, gamma_ - 1.0);
  if (rho == 0.0) return table_->shift;
  return (potential(rho) + pressure(rho)) / rho;
}

double fit_growth_exponent(const PressureLaw& law, double lo, double hi, int samples) {
  if (!(lo > 0.0) || !(hi > lo) || samples < 2) throw DomainError("fit_growth_exponent: need 0 < lo < hi");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < samples; ++i) {
    const double x = std::log(lo) + (std::log(hi) - std::log(lo)) * i / (samples - 1);
    const double y = std::log(law.potential(i == samples - 1 ? hi : std::exp(x)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = samples;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

S2Certificate certify_s2(const PressureLaw& law) {
  S2Certificate cert;
  if (law.kind() == PressureLaw::Kind::isentropic) {
    cert.a_lower = cert.a_upper = 1.0 / (law.gamma() - 1.0);
    cert.a_tilde = law.a() / (law.gamma() - 1.0);
    cert.gamma_eff = law.gamma();
    cert.pass = true;
    return cert;
  }
  const double hi = law.rho_max();
  const double lo = 1e-3 * hi;
  constexpr int kSamples = 2001;
  const double step = (hi - lo) / (kSamples - 1);
  std::vector<double> pv(kSamples), potv(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    const double r = lo + step * i;
    pv[i] = law.pressure(r);
    potv[i] = law.potential(r);
  }
  double a_lo = std::numeric_limits<double>::infinity();
  double a_hi = 0.0;
  bool p_convex = true;
  for (int i = 1; i + 1 < kSamples; ++i) {
    const double dp = pv[i + 1] - 2 * pv[i] + pv[i - 1];
    const double dq = potv[i + 1] - 2 * potv[i] + potv[i - 1];
    if (!(dp > 0.0)) {
      p_convex = false;
      continue;
    }
    a_lo = std::min(a_lo, dq / dp);
    a_hi = std::max(a_hi, dq / dp);
  }
  cert.a_lower = std::isfinite(a_lo) ? a_lo : 0.0;
  cert.a_upper = p_convex ? a_hi : std::numeric_limits<double>::infinity();
  const double fit_hi = std::min(10.0, hi);
  if (fit_hi > 1.0) {
    cert.gamma_eff = fit_growth_exponent(law, 1.0, fit_hi);
    double a_tilde = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 200; ++i) {
      const double r = 1.0 + (hi - 1.0) * i / 200.0;
      a_tilde = std::min(a_tilde, law.potential(r) / std::pow(r, cert.gamma_eff));
    }
    cert.a_tilde = a_tilde;
  }
  cert.pass = p_convex && cert.a_lower > 0.0 && cert.a_upper <= 1e6 && cert.a_tilde > 0.0;
  return cert;
}

}  // namespace anematic
