#include "doctest.h"

#include <filesystem>
#include <limits>

#include "anematic/error.hpp"
#include "anematic/io.hpp"
#include "anematic/scenario.hpp"

using namespace anematic;
namespace fs = std::filesystem;

TEST_CASE("scenario text") {
  const Scenario s = Scenario::parse("grid.cells = 8,8,8\npressure.gamma = 1.4 # stiffer\n");
  CHECK(s.cells == std::array<int, 3>{8, 8, 8});
  CHECK(s.pressure_gamma == 1.4);
  CHECK(Scenario::parse(s.to_text()).to_text() == s.to_text());
  CHECK(scenario_keys().size() >= 40);

  CHECK_THROWS_AS(Scenario::parse("grid.cels = 8,8,8\n"), ConfigError);
  CHECK_THROWS_AS(Scenario::parse("time.step_s = fast\n"), ConfigError);
  CHECK_THROWS_AS(build_model(Scenario::parse("rheology.kind = tabulated\nrheology.delta_per_s = 0\n")), ConfigError);
}

TEST_CASE("numbers round-trip through text") {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, std::numeric_limits<double>::denorm_min(), 0.0})
    REQUIRE(parse_number(format_number(v)) == v);
}

TEST_CASE("snapshots and checkpoints round-trip exactly") {
  Scenario s;
  s.cells = {4, 4, 4};
  s.modes = 1;
  const Model model = build_model(s);
  State st = initial_state(s, model);
  st.v = {1.0 / 3.0, -2e-7, 0.25};
  st.step = 7;
  st.time = 0.007;

  const fs::path dir = fs::temp_directory_path() / "anematic_unit_io";
  fs::remove_all(dir);
  fs::create_directories(dir);

  write_snapshot((dir / "snap.txt").string(), model, st);
  const SnapshotFields back = read_snapshot((dir / "snap.txt").string());
  CHECK(back.grid == model.grid);
  CHECK(back.rho.data == st.rho.data);
  CHECK(back.c.data == st.c.data);
  for (std::size_t p = 0; p < st.q.size(); ++p) REQUIRE(back.q[p].components() == st.q[p].components());

  Checkpoint ck{s.to_text(), st, {1.5, 2.5}, {}};
  write_checkpoint((dir / "ck.txt").string(), ck);
  const Checkpoint rd = read_checkpoint((dir / "ck.txt").string(), model.grid);
  CHECK(rd.scenario == ck.scenario);
  CHECK(rd.state.step == 7);
  CHECK(rd.state.v == st.v);
  CHECK(rd.state.rho.data == st.rho.data);
  CHECK(rd.monitor == ck.monitor);
  fs::remove_all(dir);
}
