#include "anematic/io.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace anematic {

namespace {

const char* const kSnapshotColumns = "x y z rho u1 u2 u3 c q11 q12 q13 q22 q23";

void put(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  return in;
}

// "key=value" tokens of a metadata line.
std::string meta(const std::string& line, const std::string& key) {
  std::istringstream in(line);
  std::string tok;
  while (in >> tok)
    if (tok.rfind(key + "=", 0) == 0) return tok.substr(key.size() + 1);
  throw ConfigError("metadata line lacks '" + key + "': " + line);
}

void put_vector(std::string& out, const std::string& name, const std::vector<double>& v) {
  out += name;
  out += ' ';
  out += std::to_string(v.size());
  for (double x : v) {
    out += ' ';
    put(out, x);
  }
  out += '\n';
}

std::vector<double> get_vector(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("checkpoint truncated before '" + name + "'");
  std::istringstream ls(line);
  std::string tag;
  std::size_t n = 0;
  ls >> tag >> n;
  if (tag != name) throw ConfigError("checkpoint: expected '" + name + "', found '" + tag + "'");
  std::vector<double> v(n);
  std::string tok;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(ls >> tok)) throw ConfigError("checkpoint: '" + name + "' is short");
    v[i] = parse_number(tok);
  }
  return v;
}

}  // namespace

std::string format_number(double v) {
  std::string s;
  put(s, v);
  return s;
}

double parse_number(const std::string& text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ConfigError("malformed number '" + text + "'");
  return v;
}

void write_snapshot(const std::string& path, const Model& model, const State& state) {
  const Grid& g = model.grid;
  const VectorField u = synthesize(model.basis, state.v, model.u_b);
  std::string out;
  out.reserve(g.size() * 200);
  out += "# grid nx=" + std::to_string(g.n(0)) + " ny=" + std::to_string(g.n(1)) + " nz=" + std::to_string(g.n(2));
  out += " lx=" + format_number(g.extent()[0]) + " ly=" + format_number(g.extent()[1]) +
         " lz=" + format_number(g.extent()[2]);
  out += " time=" + format_number(state.time) + " step=" + std::to_string(state.step) + "\n";
  out += kSnapshotColumns;
  out += '\n';
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto c = g.coords(p);
    const Vec3 x = g.node(c[0], c[1], c[2]);
    const QTensor& q = state.q[p];
    const double row[13] = {x[0], x[1], x[2], state.rho[p], u[p][0], u[p][1], u[p][2], state.c[p],
                            q.q11, q.q12, q.q13, q.q22, q.q23};
    for (int k = 0; k < 13; ++k) {
      if (k) out += ' ';
      put(out, row[k]);
    }
    out += '\n';
  }
  auto f = open_out(path);
  f << out;
}

SnapshotFields read_snapshot(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# grid", 0) != 0) throw ConfigError(path + ": missing grid metadata line");
  const std::array<int, 3> cells{std::stoi(meta(line, "nx")), std::stoi(meta(line, "ny")), std::stoi(meta(line, "nz"))};
  const std::array<double, 3> extent{parse_number(meta(line, "lx")), parse_number(meta(line, "ly")),
                                     parse_number(meta(line, "lz"))};
  SnapshotFields s;
  s.grid = Grid(extent, cells);
  s.time = parse_number(meta(line, "time"));
  if (!std::getline(in, line) || line != kSnapshotColumns) throw ConfigError(path + ": unexpected column line");
  s.rho = ScalarField(s.grid);
  s.c = ScalarField(s.grid);
  s.u = VectorField(s.grid);
  s.q = QField(s.grid);
  std::string tok;
  for (std::size_t p = 0; p < s.grid.size(); ++p) {
    double row[13];
    for (double& v : row) {
      if (!(in >> tok)) throw ConfigError(path + ": truncated at node " + std::to_string(p));
      v = parse_number(tok);
    }
    s.rho[p] = row[3];
    s.u[p] = {row[4], row[5], row[6]};
    s.c[p] = row[7];
    s.q[p] = {row[8], row[9], row[10], row[11], row[12]};
  }
  return s;
}

std::vector<std::string> list_snapshots(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ConfigError("'" + dir + "' is not a directory");
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("snapshot_", 0) == 0 && e.path().extension() == ".txt") out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void write_checkpoint(const std::string& path, const Checkpoint& ck) {
  const State& s = ck.state;
  std::string out = "anematic-checkpoint 1\n";
  out += "step " + std::to_string(s.step) + "\n";
  out += "time " + format_number(s.time) + "\n";
  std::size_t lines = std::count(ck.scenario.begin(), ck.scenario.end(), '\n');
  if (!ck.scenario.empty() && ck.scenario.back() != '\n') ++lines;
  out += "scenario " + std::to_string(lines) + "\n" + ck.scenario;
  if (!ck.scenario.empty() && ck.scenario.back() != '\n') out += '\n';
  std::vector<double> q;
  q.reserve(5 * s.q.size());
  for (const auto& t : s.q.data)
    for (double x : t.components()) q.push_back(x);
  put_vector(out, "rho", s.rho.data);
  put_vector(out, "c", s.c.data);
  put_vector(out, "q", q);
  put_vector(out, "v", s.v);
  put_vector(out, "v_prev", s.v_prev);
  put_vector(out, "v_prev2", s.v_prev2);
  put_vector(out, "monitor", ck.monitor);
  put_vector(out, "residuals", ck.residuals);
  // Write then rename so an interrupted write never leaves a partial checkpoint behind.
  const std::string tmp = path + ".tmp";
  {
    auto f = open_out(tmp);
    f << out;
    if (!f) throw ConfigError("cannot write '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

namespace {

Checkpoint read_header(std::istream& in, const std::string& path) {
  std::string line, tag;
  if (!std::getline(in, line) || line != "anematic-checkpoint 1") throw ConfigError(path + ": not a checkpoint");
  Checkpoint ck;
  std::getline(in, line);
  std::istringstream(line) >> tag >> ck.state.step;
  if (tag != "step") throw ConfigError(path + ": missing step");
  std::getline(in, line);
  if (line.rfind("time ", 0) != 0) throw ConfigError(path + ": missing time");
  ck.state.time = parse_number(line.substr(5));
  std::getline(in, line);
  std::size_t lines = 0;
  std::istringstream(line) >> tag >> lines;
  if (tag != "scenario") throw ConfigError(path + ": missing scenario");
  for (std::size_t i = 0; i < lines; ++i) {
    if (!std::getline(in, line)) throw ConfigError(path + ": truncated scenario");
    ck.scenario += line + "\n";
  }
  return ck;
}

}  // namespace

std::string checkpoint_scenario(const std::string& path) {
  auto in = open_in(path);
  return read_header(in, path).scenario;
}

Checkpoint read_checkpoint(const std::string& path, const Grid& grid) {
  auto in = open_in(path);
  Checkpoint ck = read_header(in, path);
  State& s = ck.state;
  auto field = [&](const std::string& name, std::size_t per_node) {
    auto v = get_vector(in, name);
    if (v.size() != per_node * grid.size()) throw ShapeError(path + ": '" + name + "' does not match the grid");
    return v;
  };
  s.rho = ScalarField(grid);
  s.rho.data = field("rho", 1);
  s.c = ScalarField(grid);
  s.c.data = field("c", 1);
  const auto q = field("q", 5);
  s.q = QField(grid);
  for (std::size_t p = 0; p < grid.size(); ++p)
    s.q[p] = QTensor::from_components({q[5 * p], q[5 * p + 1], q[5 * p + 2], q[5 * p + 3], q[5 * p + 4]});
  s.v = get_vector(in, "v");
  s.v_prev = get_vector(in, "v_prev");
  s.v_prev2 = get_vector(in, "v_prev2");
  ck.monitor = get_vector(in, "monitor");
  ck.residuals = get_vector(in, "residuals");
  return ck;
}

}  // namespace anematic
