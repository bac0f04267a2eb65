#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "membrane/scenario.hpp"
#include "membrane/flow.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace membrane;
namespace fs = std::filesystem;

namespace {

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("membrane-scn-" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config text parses sections, comments, and values") {
  auto scs = parse_config_text(
      "# header comment\n"
      "[alpha]\n"
      "kind = flow   # trailing comment\n"
      "  dt =  1e-3\n"
      "\n"
      "[beta.run-2]\n"
      "kind = nahm\n");
  REQUIRE(scs.size() == 2);
  CHECK(scs[0].name == "alpha");
  CHECK(scs[0].kv.at("kind") == "flow");
  CHECK(scs[0].kv.at("dt") == "1e-3");
  CHECK(scs[1].name == "beta.run-2");

  // keys before any section form the implicit scenario "main"
  auto pre = parse_config_text("kind = verify-algebra\n");
  REQUIRE(pre.size() == 1);
  CHECK(pre[0].name == "main");

  CHECK_THROWS_AS(parse_config_text(""), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[a]\nkind = flow\nkind = flow\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[a]\nno equals sign\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[unterminated\nkind = flow\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[a]\ndt = 1e-3\n"), ConfigError);          // no kind
  CHECK_THROWS_AS(parse_config_text("[a/b]\nkind = flow\n"), ConfigError);      // bad name
  CHECK_THROWS_AS(parse_config_text("[a]\nkind = flow\n[a]\nkind = nahm\n"),
                  ConfigError);  // duplicate name
}

TEST_CASE("snapshot files round-trip exactly") {
  auto g = SurfaceGrid::torus(8, 6);
  std::mt19937_64 rng(3);
  FieldConfiguration x = FieldConfiguration::zero(g, 7);
  for (int i = 0; i < 7; ++i) x.x[i] = random_band_limited(g, 2, rng, 0.7);
  x.has_winding = true;
  x.wind1 = Eigen::VectorXd::Zero(7);
  x.wind2 = Eigen::VectorXd::Zero(7);
  x.wind1[0] = 1.0;
  x.wind2[2] = -2.0;
  Snapshot snap{x, selfdual_rhs(x), 0.375};

  fs::path dir = fresh_dir("roundtrip");
  fs::path file = dir / "state.snap";
  write_snapshot(file.string(), snap);
  Snapshot back = read_snapshot(file.string());

  CHECK(back.t == snap.t);
  REQUIRE(back.x.d == 7);
  auto gb = back.x.grid();
  CHECK(gb->topology == Topology::torus);
  CHECK(gb->n1 == 8);
  CHECK(gb->n2 == 6);
  REQUIRE(back.x.has_winding);
  CHECK(back.x.wind1 == snap.x.wind1);
  CHECK(back.x.wind2 == snap.x.wind2);
  for (int i = 0; i < 7; ++i) {
    CHECK((back.x.x[i].v == snap.x.x[i].v).all());
    CHECK((back.xdot.x[i].v == snap.xdot.x[i].v).all());
  }

  // velocity-free snapshots stay velocity-free
  Snapshot plain;
  plain.x = FieldConfiguration::zero(SurfaceGrid::sphere(6, 6), 3);
  plain.x.x[0].v.setConstant(1.5);
  write_snapshot((dir / "plain.snap").string(), plain);
  Snapshot pb = read_snapshot((dir / "plain.snap").string());
  CHECK(pb.xdot.x.empty());
  CHECK(pb.x.grid()->topology == Topology::sphere);
  CHECK((pb.x.x[0].v == 1.5).all());

  CHECK_THROWS(read_snapshot((dir / "missing.snap").string()));
}

TEST_CASE("same seed gives byte-identical scenario output") {
  Scenario sc;
  sc.name = "det";
  sc.kv = {{"kind", "flow"},   {"dim", "7"},        {"preset", "random"},
           {"grid", "16x16"},  {"lmax", "2"},       {"amplitude", "0.05"},
           {"seed", "9"},      {"dt", "1e-3"},      {"steps", "20"},
           {"record_every", "5"}};
  fs::path a = fresh_dir("det-a");
  fs::path b = fresh_dir("det-b");
  auto ra = run_scenario(sc, a.string());
  auto rb = run_scenario(sc, b.string());
  CHECK(ra.code == 0);
  CHECK(rb.code == 0);
  CHECK(read_bytes(a / "det" / "report.json") == read_bytes(b / "det" / "report.json"));
  CHECK(read_bytes(a / "det" / "series.csv") == read_bytes(b / "det" / "series.csv"));
  CHECK(read_bytes(a / "det" / "state.snap") == read_bytes(b / "det" / "state.snap"));
}

TEST_CASE("outcome codes distinguish failure kinds") {
  fs::path dir = fresh_dir("codes");

  Scenario boom;
  boom.name = "boom";
  boom.kv = {{"kind", "flow"}, {"preset", "collapse"}, {"grid", "8x8"},
             {"dt", "1e-3"},   {"steps", "2000"}};
  CHECK(run_scenario(boom, dir.string()).code == 3);

  Scenario wrong;
  wrong.name = "wrong";
  wrong.kv = {{"kind", "susy"}, {"preset", "collapse-3d"}, {"grid", "8x8"},
              {"expect", "7"}};
  CHECK(run_scenario(wrong, dir.string()).code == 1);

  Scenario bad;
  bad.name = "bad";
  bad.kv = {{"kind", "flow"}, {"dt", "banana"}};
  CHECK_THROWS_AS(run_scenario(bad, dir.string()), ConfigError);

  Scenario typo;
  typo.name = "typo";
  typo.kv = {{"kind", "flow"}, {"preset", "collapse"}, {"stepz", "10"}};
  CHECK_THROWS_AS(run_scenario(typo, dir.string()), ConfigError);

  Scenario unknown;
  unknown.name = "unknown";
  unknown.kv = {{"kind", "rowing"}};
  CHECK_THROWS_AS(run_scenario(unknown, dir.string()), ConfigError);

  // rejected scenarios must not leave output directories behind
  CHECK_FALSE(fs::exists(dir / "bad"));
  CHECK_FALSE(fs::exists(dir / "typo"));
  CHECK_FALSE(fs::exists(dir / "unknown"));
}

TEST_CASE("config runner rejects a broken file before running anything") {
  fs::path dir = fresh_dir("reject");
  fs::path cfg = dir / "mix.cfg";
  {
    std::ofstream out(cfg);
    out << "[fine]\nkind = verify-algebra\n"
        << "[broken]\nkind = flow\ndt = banana\n";
  }
  fs::path outdir = dir / "out";
  CHECK_THROWS_AS(run_config(cfg.string(), outdir.string(), 1), ConfigError);
  CHECK_FALSE(fs::exists(outdir));
}

TEST_CASE("config driver runs scenarios and writes a summary") {
  fs::path dir = fresh_dir("driver");
  fs::path cfg = dir / "all.cfg";
  {
    std::ofstream out(cfg);
    out << "[ids]\nkind = verify-algebra\n"
        << "[small]\nkind = flow\npreset = collapse\ngrid = 8x8\n"
        << "dt = 1e-3\nsteps = 50\n";
  }
  int code = run_config(cfg.string(), (dir / "out").string(), 2);
  CHECK(code == 0);
  CHECK(fs::exists(dir / "out" / "summary.json"));
  CHECK(fs::exists(dir / "out" / "ids" / "report.json"));
  CHECK(fs::exists(dir / "out" / "small" / "series.csv"));
}
