#include "anematic/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace anematic {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ConfigError("'" + key + "': expected a number, got '" + text + "'");
  return v;
}

long to_integer(const std::string& key, const std::string& text) {
  const double v = to_number(key, text);
  if (v != std::floor(v)) throw ConfigError("'" + key + "': expected an integer, got '" + text + "'");
  return static_cast<long>(v);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
std::array<T, 3> triple_of(const std::string& key, const std::string& text, T (*conv)(const std::string&, const std::string&)) {
  auto parts = split(text, text.find(',') != std::string::npos ? ',' : ' ');
  if (parts.size() == 1) parts = {parts[0], parts[0], parts[0]};
  if (parts.size() != 3) throw ConfigError("'" + key + "': expected one or three values, got '" + text + "'");
  return {conv(key, parts[0]), conv(key, parts[1]), conv(key, parts[2])};
}

int to_int(const std::string& key, const std::string& text) { return static_cast<int>(to_integer(key, text)); }

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("'" + key + "': expected true or false, got '" + text + "'");
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

Selector Selector::parse(const std::string& text) {
  Selector s;
  std::istringstream in(text);
  std::string token;
  if (!(in >> s.kind)) throw ConfigError("empty selector");
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("selector '" + text + "': malformed argument '" + token + "'");
    s.args[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return s;
}

double Selector::number(const std::string& key, double fallback) const {
  const auto it = args.find(key);
  return it == args.end() ? fallback : to_number(kind + "." + key, it->second);
}

std::array<double, 3> Selector::triple(const std::string& key, std::array<double, 3> fallback) const {
  const auto it = args.find(key);
  return it == args.end() ? fallback : triple_of<double>(kind + "." + key, it->second, to_number);
}

void Selector::expect(const std::vector<std::string>& allowed) const {
  for (const auto& [k, v] : args)
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw ConfigError("selector '" + kind + "': unknown argument '" + k + "'");
}

const std::vector<std::string>& scenario_keys() {
  static const std::vector<std::string> keys = {
      "grid.cells",
      "grid.length_m",
      "time.step_s",
      "time.end_s",
      "galerkin.modes_per_axis",
      "continuity.epsilon_m2_per_s",
      "solver.cg_rel_tolerance",
      "pressure.kind",
      "pressure.a",
      "pressure.gamma",
      "pressure.rho_max_kg_per_m3",
      "pressure.table_path",
      "rheology.kind",
      "rheology.mu_pa_s",
      "rheology.lambda_pa_s",
      "rheology.mu0_pa_s",
      "rheology.exponent",
      "rheology.table_path",
      "rheology.delta_per_s",
      "nematic.d0_m2_per_s",
      "nematic.gamma_m2_per_s",
      "nematic.c_star",
      "nematic.b",
      "nematic.sigma_star_pa",
      "initial.rho_kg_per_m3",
      "initial.c",
      "initial.q",
      "initial.v_m_per_s",
      "boundary.u_m_per_s",
      "boundary.rho_kg_per_m3",
      "boundary.q",
      "picard.tolerance_m_per_s",
      "picard.max_iterations",
      "picard.damping",
      "picard.extrapolate",
      "momentum.max_condition",
      "monitor.groenwall_constant_per_s",
      "output.dir",
      "output.snapshot_every_steps",
      "output.checkpoint_every_steps",
      "run.seed",
  };
  return keys;
}

Scenario Scenario::parse(const std::string& text) {
  Scenario s;
  std::istringstream in(text);
  std::string line;
  std::set<std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");

    if (key == "grid.cells") s.cells = triple_of<int>(key, val, to_int);
    else if (key == "grid.length_m") s.length = triple_of<double>(key, val, to_number);
    else if (key == "time.step_s") s.dt = to_number(key, val);
    else if (key == "time.end_s") s.end_time = to_number(key, val);
    else if (key == "galerkin.modes_per_axis") s.modes = to_int(key, val);
    else if (key == "continuity.epsilon_m2_per_s") s.epsilon = to_number(key, val);
    else if (key == "solver.cg_rel_tolerance") s.cg_tolerance = to_number(key, val);
    else if (key == "pressure.kind") s.pressure_kind = val;
    else if (key == "pressure.a") s.pressure_a = to_number(key, val);
    else if (key == "pressure.gamma") s.pressure_gamma = to_number(key, val);
    else if (key == "pressure.rho_max_kg_per_m3") s.rho_max = to_number(key, val);
    else if (key == "pressure.table_path") s.pressure_table = val;
    else if (key == "rheology.kind") s.rheology_kind = val;
    else if (key == "rheology.mu_pa_s") s.mu = to_number(key, val);
    else if (key == "rheology.lambda_pa_s") s.lambda = to_number(key, val);
    else if (key == "rheology.mu0_pa_s") s.mu0 = to_number(key, val);
    else if (key == "rheology.exponent") s.exponent = to_number(key, val);
    else if (key == "rheology.table_path") s.rheology_table = val;
    else if (key == "rheology.delta_per_s") s.delta = to_number(key, val);
    else if (key == "nematic.d0_m2_per_s") s.d0 = to_number(key, val);
    else if (key == "nematic.gamma_m2_per_s") s.mobility = to_number(key, val);
    else if (key == "nematic.c_star") s.c_star = to_number(key, val);
    else if (key == "nematic.b") s.b = to_number(key, val);
    else if (key == "nematic.sigma_star_pa") s.sigma_star = to_number(key, val);
    else if (key == "initial.rho_kg_per_m3") s.initial_rho = val;
    else if (key == "initial.c") s.initial_c = val;
    else if (key == "initial.q") s.initial_q = val;
    else if (key == "initial.v_m_per_s") s.initial_v = val;
    else if (key == "boundary.u_m_per_s") s.boundary_u = val;
    else if (key == "boundary.rho_kg_per_m3") s.boundary_rho = val;
    else if (key == "boundary.q") s.boundary_q = val;
    else if (key == "picard.tolerance_m_per_s") s.picard_tolerance = to_number(key, val);
    else if (key == "picard.max_iterations") s.picard_max_iterations = to_int(key, val);
    else if (key == "picard.damping") s.picard_damping = to_number(key, val);
    else if (key == "picard.extrapolate") s.picard_extrapolate = to_bool(key, val);
    else if (key == "momentum.max_condition") s.max_condition = to_number(key, val);
    else if (key == "monitor.groenwall_constant_per_s") s.groenwall_constant = val == "auto" ? -1.0 : to_number(key, val);
    else if (key == "output.dir") s.output_dir = val;
    else if (key == "output.snapshot_every_steps") s.snapshot_every = to_int(key, val);
    else if (key == "output.checkpoint_every_steps") s.checkpoint_every = to_int(key, val);
    else if (key == "run.seed") s.seed = static_cast<unsigned long>(to_integer(key, val));
    else throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return s;
}

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string Scenario::to_text() const {
  std::ostringstream o;
  auto trip = [](const auto& a) {
    std::ostringstream t;
    t << fmt(a[0]) << "," << fmt(a[1]) << "," << fmt(a[2]);
    return t.str();
  };
  o << "grid.cells = " << trip(std::array<double, 3>{double(cells[0]), double(cells[1]), double(cells[2])}) << "\n";
  o << "grid.length_m = " << trip(length) << "\n";
  o << "time.step_s = " << fmt(dt) << "\n";
  o << "time.end_s = " << fmt(end_time) << "\n";
  o << "galerkin.modes_per_axis = " << modes << "\n";
  o << "continuity.epsilon_m2_per_s = " << fmt(epsilon) << "\n";
  o << "solver.cg_rel_tolerance = " << fmt(cg_tolerance) << "\n";
  o << "pressure.kind = " << pressure_kind << "\n";
  o << "pressure.a = " << fmt(pressure_a) << "\n";
  o << "pressure.gamma = " << fmt(pressure_gamma) << "\n";
  o << "pressure.rho_max_kg_per_m3 = " << fmt(rho_max) << "\n";
  if (!pressure_table.empty()) o << "pressure.table_path = " << pressure_table << "\n";
  o << "rheology.kind = " << rheology_kind << "\n";
  o << "rheology.mu_pa_s = " << fmt(mu) << "\n";
  o << "rheology.lambda_pa_s = " << fmt(lambda) << "\n";
  o << "rheology.mu0_pa_s = " << fmt(mu0) << "\n";
  o << "rheology.exponent = " << fmt(exponent) << "\n";
  if (!rheology_table.empty()) o << "rheology.table_path = " << rheology_table << "\n";
  o << "rheology.delta_per_s = " << fmt(delta) << "\n";
  o << "nematic.d0_m2_per_s = " << fmt(d0) << "\n";
  o << "nematic.gamma_m2_per_s = " << fmt(mobility) << "\n";
  o << "nematic.c_star = " << fmt(c_star) << "\n";
  o << "nematic.b = " << fmt(b) << "\n";
  o << "nematic.sigma_star_pa = " << fmt(sigma_star) << "\n";
  o << "initial.rho_kg_per_m3 = " << initial_rho << "\n";
  o << "initial.c = " << initial_c << "\n";
  o << "initial.q = " << initial_q << "\n";
  o << "initial.v_m_per_s = " << initial_v << "\n";
  o << "boundary.u_m_per_s = " << boundary_u << "\n";
  o << "boundary.rho_kg_per_m3 = " << boundary_rho << "\n";
  o << "boundary.q = " << boundary_q << "\n";
  o << "picard.tolerance_m_per_s = " << fmt(picard_tolerance) << "\n";
  o << "picard.max_iterations = " << picard_max_iterations << "\n";
  o << "picard.damping = " << fmt(picard_damping) << "\n";
  o << "picard.extrapolate = " << (picard_extrapolate ? "true" : "false") << "\n";
  o << "momentum.max_condition = " << fmt(max_condition) << "\n";
  o << "monitor.groenwall_constant_per_s = " << (groenwall_constant < 0 ? std::string("auto") : fmt(groenwall_constant))
    << "\n";
  o << "output.dir = " << output_dir << "\n";
  o << "output.snapshot_every_steps = " << snapshot_every << "\n";
  o << "output.checkpoint_every_steps = " << checkpoint_every << "\n";
  o << "run.seed = " << seed << "\n";
  return o.str();
}

long Scenario::steps() const { return std::lround(end_time / dt); }

ScalarExpr make_scalar(const std::string& text, const std::array<double, 3>& extent) {
  const Selector s = Selector::parse(text);
  if (s.kind == "constant") {
    s.expect({"value"});
    return ScalarExpr::constant(s.number("value", 0.0));
  }
  if (s.kind == "cosine" || s.kind == "sine") {
    s.expect({"base", "amp", "k"});
    const auto k = s.triple("k", {1, 1, 1});
    const std::array<int, 3> ki{static_cast<int>(k[0]), static_cast<int>(k[1]), static_cast<int>(k[2])};
    return s.kind == "cosine" ? ScalarExpr::cosine(s.number("base", 0.0), s.number("amp", 0.0), ki, extent)
                              : ScalarExpr::sine(s.number("base", 0.0), s.number("amp", 0.0), ki, extent);
  }
  throw ConfigError("unknown scalar expression '" + s.kind + "'");
}

VectorExpr make_vector(const std::string& text, const std::array<double, 3>& extent) {
  const Selector s = Selector::parse(text);
  if (s.kind == "zero") {
    s.expect({});
    return VectorExpr::zero();
  }
  if (s.kind == "constant") {
    s.expect({"value"});
    return VectorExpr::constant(s.triple("value", {0, 0, 0}));
  }
  if (s.kind == "shear") {
    s.expect({"rate"});
    return VectorExpr::shear(s.number("rate", 0.0), extent);
  }
  if (s.kind == "channel") {
    s.expect({"umax"});
    return VectorExpr::channel(s.number("umax", 0.0), extent);
  }
  if (s.kind == "rotation") {
    s.expect({"rate"});
    return VectorExpr::rotation(s.number("rate", 0.0), extent);
  }
  throw ConfigError("unknown velocity expression '" + s.kind + "'");
}

QExpr make_q(const std::string& text, const std::array<double, 3>& extent) {
  const Selector s = Selector::parse(text);
  if (s.kind == "zero") {
    s.expect({});
    return QExpr::zero();
  }
  if (s.kind == "uniaxial") {
    s.expect({"s", "n"});
    return QExpr::uniaxial(s.number("s", 0.0), s.triple("n", {1, 0, 0}));
  }
  if (s.kind == "twist") {
    s.expect({"s", "amp"});
    return QExpr::twist(s.number("s", 0.0), s.number("amp", 0.0), extent);
  }
  throw ConfigError("unknown Q expression '" + s.kind + "'");
}

RheologyLaw make_rheology(const Scenario& s) {
  if (s.delta < 0.0) throw ConfigError("rheology.delta_per_s must be >= 0");
  RheologyLaw law;
  if (s.rheology_kind == "newtonian") {
    law = RheologyLaw::newtonian(s.mu, s.lambda);
  } else if (s.rheology_kind == "power_law") {
    law = RheologyLaw::power_law(s.mu0, s.exponent);
  } else if (s.rheology_kind == "tabulated") {
    if (s.delta == 0.0) throw ConfigError("tabulated rheology requires rheology.delta_per_s > 0");
    if (s.rheology_table.empty()) throw ConfigError("tabulated rheology requires rheology.table_path");
    std::ifstream in(s.rheology_table);
    if (!in) throw ConfigError("cannot open rheology table '" + s.rheology_table + "'");
    std::map<std::pair<double, double>, double> rows;
    std::set<double> ds, ts;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      const auto parts = split(line, ',');
      if (parts.empty()) continue;
      if (parts.size() != 3) throw ConfigError("rheology table rows must be 'd,t,f'");
      double v[3];
      bool numeric = true;
      for (int i = 0; i < 3; ++i) {
        const auto r = std::from_chars(parts[i].data(), parts[i].data() + parts[i].size(), v[i]);
        numeric = numeric && r.ec == std::errc() && r.ptr == parts[i].data() + parts[i].size();
      }
      if (!numeric) {
        if (first) {
          first = false;
          continue;
        }
        throw ConfigError("rheology table: non-numeric row '" + line + "'");
      }
      first = false;
      rows[{v[0], v[1]}] = v[2];
      ds.insert(v[0]);
      ts.insert(v[1]);
    }
    RheologyTable table{{ds.begin(), ds.end()}, {ts.begin(), ts.end()}, {}};
    for (double d : table.d)
      for (double t : table.t) {
        const auto it = rows.find({d, t});
        if (it == rows.end()) throw ConfigError("rheology table is not a full (d, t) grid");
        table.values.push_back(it->second);
      }
    law = RheologyLaw::tabulated(std::move(table));
  } else {
    throw ConfigError("unknown rheology.kind '" + s.rheology_kind + "'");
  }
  return s.delta > 0.0 ? mollify(law, s.delta) : law;
}

PressureLaw make_pressure(const Scenario& s) {
  if (s.pressure_kind == "isentropic") {
    if (!(s.pressure_a > 0.0)) throw ConfigError("pressure.a must be positive");
    if (!(s.pressure_gamma > 1.0)) throw ConfigError("pressure.gamma must exceed 1");
    return PressureLaw::isentropic(s.pressure_a, s.pressure_gamma, s.rho_max);
  }
  if (s.pressure_kind == "general" || s.pressure_kind == "table") {
    if (s.pressure_table.empty()) throw ConfigError("general pressure law requires pressure.table_path");
    return PressureLaw::from_csv(s.pressure_table);
  }
  throw ConfigError("unknown pressure.kind '" + s.pressure_kind + "'");
}

Model build_model(const Scenario& s) {
  if (!(s.dt > 0.0)) throw ConfigError("time.step_s must be positive");
  if (!(s.end_time >= 0.0)) throw ConfigError("time.end_s must be >= 0");
  if (!(s.epsilon > 0.0)) throw ConfigError("continuity.epsilon_m2_per_s must be positive");
  if (!(s.d0 > 0.0)) throw ConfigError("nematic.d0_m2_per_s must be positive");
  if (!(s.mobility > 0.0)) throw ConfigError("nematic.gamma_m2_per_s must be positive");
  if (!(s.c_star >= 0.0)) throw ConfigError("nematic.c_star must be >= 0");
  if (!(s.picard_damping > 0.0 && s.picard_damping <= 1.0)) throw ConfigError("picard.damping must lie in (0, 1]");
  if (!(s.picard_tolerance > 0.0)) throw ConfigError("picard.tolerance_m_per_s must be positive");
  if (s.picard_max_iterations < 1) throw ConfigError("picard.max_iterations must be >= 1");
  if (s.snapshot_every < 0 || s.checkpoint_every < 0) throw ConfigError("output cadences must be >= 0");

  const Grid grid(s.length, s.cells);
  const VectorExpr u_b = make_vector(s.boundary_u, s.length);
  const ScalarExpr rho_b = make_scalar(s.boundary_rho, s.length);
  const QExpr q_b = make_q(s.boundary_q, s.length);
  if (rho_b.min_bound() < 0.0) throw ConfigError("boundary.rho_kg_per_m3 must be >= 0");

  Model model(grid, s.modes, u_b, sample_boundary<double>(grid, [&](const Vec3& x) { return rho_b.value(x); }),
              sample_boundary<QTensor>(grid, [&](const Vec3& x) { return q_b.value(x); }), make_rheology(s),
              make_pressure(s));
  model.continuity = {s.epsilon, s.dt, s.cg_tolerance};
  model.nematic.d0 = s.d0;
  model.nematic.gamma = s.mobility;
  model.nematic.bulk = {s.c_star, s.b};
  model.nematic.sigma_star = s.sigma_star;
  model.nematic.dt = s.dt;
  model.nematic.cg_tolerance = s.cg_tolerance;
  model.momentum.dt = s.dt;
  model.momentum.epsilon = s.epsilon;
  model.momentum.sigma_star = s.sigma_star;
  model.momentum.bulk = model.nematic.bulk;
  model.momentum.max_condition = s.max_condition;
  model.picard = {s.picard_tolerance, s.picard_max_iterations, s.picard_damping, s.picard_extrapolate};
  return model;
}

State initial_state(const Scenario& s, const Model& model) {
  const Grid& g = model.grid;
  const ScalarExpr rho0 = make_scalar(s.initial_rho, s.length);
  const ScalarExpr c0 = make_scalar(s.initial_c, s.length);
  const QExpr q0 = make_q(s.initial_q, s.length);
  if (rho0.min_bound() < 0.0) throw ConfigError("initial.rho_kg_per_m3 must be >= 0");
  if (c0.min_bound() < 0.0) throw ConfigError("initial.c must be >= 0");

  State st;
  st.rho = sample_field<double>(g, [&](const Vec3& x) { return rho0.value(x); });
  st.c = sample_field<double>(g, [&](const Vec3& x) { return c0.value(x); });
  st.q = sample_field<QTensor>(g, [&](const Vec3& x) { return q0.value(x); });
  st.v.assign(model.basis.size(), 0.0);

  const Selector v0 = Selector::parse(s.initial_v);
  if (v0.kind == "zero") {
    v0.expect({});
  } else if (v0.kind == "mode") {
    v0.expect({"index", "value"});
    const long i = std::lround(v0.number("index", 0));
    if (i < 0 || i >= model.basis.size()) throw ConfigError("initial.v_m_per_s: mode index out of range");
    st.v[i] = v0.number("value", 0.0);
  } else if (v0.kind == "random") {
    v0.expect({"norm", "seed"});
    std::mt19937_64 rng(static_cast<unsigned long>(v0.number("seed", static_cast<double>(s.seed))));
    std::normal_distribution<double> nd(0.0, 1.0);
    double n2 = 0.0;
    for (auto& x : st.v) {
      x = nd(rng);
      n2 += x * x;
    }
    const double scale = v0.number("norm", 0.0) / std::sqrt(n2);
    for (auto& x : st.v) x *= scale;
  } else {
    throw ConfigError("unknown initial velocity selector '" + v0.kind + "'");
  }
  return st;
}

}  // namespace anematic
