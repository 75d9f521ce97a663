#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hybridloc/cli.hpp"
#include "hybridloc/switcher.hpp"

namespace fs = std::filesystem;
using namespace hybridloc;

namespace {

const std::string kData = HYBRIDLOC_DATA_DIR;

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("hybridloc_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

// Small building east of the origin; everything west of x = 0 is outdoors.
const char* kEnv = R"({
  "aps": [
    {"id": "AP1", "x": 1, "y": 1, "p0_dbm": -40, "n": 3, "sigma_db": 1},
    {"id": "AP2", "x": 9, "y": 1, "p0_dbm": -40, "n": 3, "sigma_db": 1},
    {"id": "AP3", "x": 5, "y": 9, "p0_dbm": -40, "n": 3, "sigma_db": 1}
  ],
  "indoor_regions": [[[0, 0], [10, 0], [10, 10], [0, 10]]]
})";

const char* kGrid = "location_id,x_m,y_m\nA,2,2\nB,8,2\nC,5,8\n";

struct Fixture {
  TempDir dir;
  std::string env = dir / "env.json";
  std::string grid = dir / "grid.csv";
  std::string refs = kData + "/campus_refs.json";
  std::string map = dir / "map.csv";

  Fixture() {
    spit(env, kEnv);
    spit(grid, kGrid);
    REQUIRE(run({"survey", "--env", env, "--grid", grid, "--out", map, "--seed", "1",
                 "--samples", "4"})
                .code == 0);
  }

  // Simulates a walk and locates it; returns the fixes.
  std::vector<switcher::PositionFix> walk(const std::string& trajectory_csv) {
    const auto trajectory = dir / "walk.csv";
    spit(trajectory, trajectory_csv);
    const auto trace = dir / "trace.csv";
    const auto truth = dir / "truth.csv";
    const auto fixes = dir / "fixes.csv";
    auto r = run({"simulate", "--env", env, "--trajectory", trajectory, "--refs", refs,
                  "--trace-out", trace, "--truth-out", truth, "--seed", "9",
                  "--gps-noise-m", "0"});
    REQUIRE(r.code == 0);
    r = run({"locate", "--trace", trace, "--radio-map", map, "--refs", refs, "--out", fixes});
    REQUIRE(r.code == 0);
    return switcher::read_fixes(fixes);
  }
};

}  // namespace

TEST_CASE("cli survey") {
  Fixture f;
  const std::string text = slurp(f.map);
  CHECK(text.rfind("location_id,x_m,y_m,orientation_deg,ap_id,mean_dbm,stddev_db,sample_count\n",
                   0) == 0);
  // 3 points x 4 orientations x 3 APs.
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 36);

  const auto again = f.dir / "map2.csv";
  REQUIRE(run({"survey", "--env", f.env, "--grid", f.grid, "--out", again, "--seed", "1",
               "--samples", "4"})
              .code == 0);
  CHECK(slurp(again) == text);
  REQUIRE(run({"survey", "--env", f.env, "--grid", f.grid, "--out", again, "--seed", "2",
               "--samples", "4"})
              .code == 0);
  CHECK(slurp(again) != text);

  const auto missing = f.dir / "missing.json";
  auto r = run({"survey", "--env", missing, "--grid", f.grid, "--out", again, "--seed", "1"});
  CHECK(r.code == cli::kExitInput);
  CHECK(r.err.find(missing) != std::string::npos);
  CHECK(r.err.rfind("hybridloc: error: input:", 0) == 0);

  r = run({"survey", "--env", f.env, "--grid", f.grid, "--out", again});
  CHECK(r.code == cli::kExitInput);
  CHECK(r.err.find("--seed") != std::string::npos);

  r = run({"survey", "--env", f.env, "--grid", f.grid, "--out", f.dir / "no/such/dir/m.csv",
           "--seed", "1"});
  CHECK(r.code == cli::kExitInput);

  spit(f.env, "{\"aps\": [");
  r = run({"survey", "--env", f.env, "--grid", f.grid, "--out", again, "--seed", "1"});
  CHECK(r.code == cli::kExitInput);
}

TEST_CASE("cli simulate is deterministic and marks indoor GPS invalid") {
  Fixture f;
  const auto trajectory = f.dir / "walk.csv";
  spit(trajectory, "epoch_ms,x_m,y_m,orientation_deg\n0,2,2,0\n5000,8,8,90\n");
  auto simulate = [&](const std::string& tag) {
    const auto trace = f.dir / ("trace" + tag + ".csv");
    const auto truth = f.dir / ("truth" + tag + ".csv");
    const auto r = run({"simulate", "--env", f.env, "--trajectory", trajectory, "--refs",
                        f.refs, "--trace-out", trace, "--truth-out", truth, "--seed", "5"});
    REQUIRE(r.code == 0);
    return std::make_pair(slurp(trace), slurp(truth));
  };
  const auto a = simulate("a");
  const auto b = simulate("b");
  CHECK(a == b);
  const auto trace = switcher::read_trace(f.dir / "tracea.csv");
  CHECK(trace.size() == 6);
  for (const auto& e : trace) {
    REQUIRE(e.gps);
    CHECK_FALSE(e.gps->valid);
  }
}

TEST_CASE("cli locate") {
  Fixture f;
  SUBCASE("outdoor-only walk uses GPS throughout") {
    const auto fixes = f.walk("epoch_ms,x_m,y_m,orientation_deg\n0,-30,5,0\n9000,-21,5,0\n");
    REQUIRE(fixes.size() == 10);
    for (const auto& fix : fixes) CHECK(fix.source == switcher::Source::GPS);
    CHECK(fixes[3].position.x == doctest::Approx(-27.0).epsilon(1e-6));
  }
  SUBCASE("indoor-only walk uses WLAN after the timeout") {
    const auto fixes = f.walk("epoch_ms,x_m,y_m,orientation_deg\n0,2,2,0\n9000,8,2,0\n");
    REQUIRE(fixes.size() == 8);
    CHECK(fixes.front().epoch_ms == 2000);
    for (const auto& fix : fixes) CHECK(fix.source == switcher::Source::WLAN);
  }
  SUBCASE("walking in switches exactly once") {
    const auto fixes = f.walk("epoch_ms,x_m,y_m,orientation_deg\n0,-6,2,0\n12000,6,2,0\n");
    int transitions = 0;
    for (std::size_t i = 1; i < fixes.size(); ++i) {
      if (fixes[i - 1].source != fixes[i].source) ++transitions;
    }
    CHECK(transitions == 1);
  }
  SUBCASE("out-of-order trace is a consistency error") {
    const auto trace = f.dir / "bad_trace.csv";
    spit(trace,
         "epoch_ms,kind,f1,f2,f3\n2000,WLAN,AP1,-50,\n1000,WLAN,AP1,-50,\n");
    const auto r = run({"locate", "--trace", trace, "--radio-map", f.map, "--refs", f.refs,
                        "--out", f.dir / "fixes.csv"});
    CHECK(r.code == cli::kExitConsistency);
    CHECK(r.err.rfind("hybridloc: error: consistency:", 0) == 0);
  }
  SUBCASE("malformed trace is an input error with a line number") {
    const auto trace = f.dir / "bad_trace.csv";
    spit(trace, "epoch_ms,kind,f1,f2,f3\n0,WLAN,AP1,loud,\n");
    const auto r = run({"locate", "--trace", trace, "--radio-map", f.map, "--refs", f.refs,
                        "--out", f.dir / "fixes.csv"});
    CHECK(r.code == cli::kExitInput);
    CHECK(r.err.find("bad_trace.csv:2:") != std::string::npos);
  }
}

TEST_CASE("cli evaluate") {
  TempDir dir;
  const auto truth = dir / "truth.csv";
  const auto fixes = dir / "fixes.csv";
  spit(truth, "epoch_ms,x_m,y_m\n0,0,0\n1000,1,1\n2000,2,2\n");

  SUBCASE("perfect fixes fall in the first bucket") {
    spit(fixes, "epoch_ms,source,x,y\n0,GPS,0,0\n1000,GPS,1,1\n2000,WLAN,2,2\n");
    const auto json = dir / "stats.json";
    const auto r = run({"evaluate", "--fixes", fixes, "--truth", truth, "--json-out", json});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("100.0000%") != std::string::npos);
    CHECK(r.out.find("Average Error = 0.0000 m (n = 3)") != std::string::npos);
    CHECK(slurp(json).find("\"average_m\": 0.0") != std::string::npos);

    const auto only_wlan = run({"evaluate", "--fixes", fixes, "--truth", truth, "--source",
                                "WLAN", "--json"});
    CHECK(only_wlan.out.find("\"n\": 1") != std::string::npos);
  }
  SUBCASE("error file reproduces the bucket probabilities") {
    const auto errors = dir / "errors.csv";
    std::ostringstream text;
    text << "epoch_ms,error_m\n";
    const std::vector<std::pair<int, double>> counts{{11, 0.5}, {17, 1.5}, {61, 3.0},
                                                     {51, 5.0}, {33, 7.0}, {27, 9.0}};
    long long t = 0;
    for (const auto& [n, e] : counts) {
      for (int i = 0; i < n; ++i) text << (t += 1000) << ',' << e << '\n';
    }
    spit(errors, text.str());
    const auto cdf = dir / "cdf.csv";
    const auto r = run({"evaluate", "--errors", errors, "--threshold", "2.9", "--threshold",
                        "3.4", "--cdf-out", cdf, "--cdf-step", "1"});
    REQUIRE(r.code == 0);
    for (const char* p : {"5.5000%", "8.5000%", "30.5000%", "25.5000%", "16.5000%", "13.5000%"}) {
      CHECK(r.out.find(p) != std::string::npos);
    }
    CHECK(r.out.find("Below 2.9 m = 14.0000%") != std::string::npos);
    CHECK(r.out.find("Below 3.4 m = 44.5000%") != std::string::npos);
    CHECK(slurp(cdf).find("\n10,1\n") != std::string::npos);
  }
  SUBCASE("fix without truth is a consistency error") {
    spit(fixes, "epoch_ms,source,x,y\n0,GPS,0,0\n1500,GPS,1,1\n");
    const auto r = run({"evaluate", "--fixes", fixes, "--truth", truth});
    CHECK(r.code == cli::kExitConsistency);
    CHECK(r.err.find("1500") != std::string::npos);
  }
  SUBCASE("conflicting inputs") {
    spit(fixes, "epoch_ms,source,x,y\n0,GPS,0,0\n");
    CHECK(run({"evaluate", "--fixes", fixes}).code == cli::kExitInput);
    CHECK(run({"evaluate", "--fixes", fixes, "--truth", truth, "--errors", fixes}).code ==
          cli::kExitInput);
    CHECK(run({"evaluate", "--fixes", fixes, "--truth", truth, "--source", "BLE"}).code ==
          cli::kExitInput);
  }
}

TEST_CASE("cli help and usage errors") {
  auto r = run({"--help"});
  CHECK(r.code == 0);
  for (const char* cmd : {"survey", "simulate", "locate", "evaluate"}) {
    CHECK(r.out.find(cmd) != std::string::npos);
  }
  r = run({"locate", "--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("epoch_ms,source,x,y") != std::string::npos);
  CHECK(run({}).code == cli::kExitInput);
  CHECK(run({"teleport"}).code == cli::kExitInput);
}
