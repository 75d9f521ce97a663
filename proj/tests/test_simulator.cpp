#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "hybridloc/error.hpp"
#include "hybridloc/simulator.hpp"

using namespace hybridloc;
using namespace hybridloc::sim;

namespace {

geo::ReferencePair meter_refs() {
  return {{1.0, 103.0}, {0.0, 0.0}, {1.001, 103.001}, {100.0, 100.0}};
}

radio::RadioEnvironment quiet_env(double sigma, double body) {
  radio::RadioEnvironment env;
  env.aps = {{"AP2", {20, 3}, -40, 1, 3, sigma}, {"AP1", {1, 1}, -42, 1, 2.5, sigma}};
  env.walls = {{{10, 0}, {10, 8}, 3.1}};
  env.indoor_regions = {{{0, 0}, {24, 0}, {24, 16}, {0, 16}}};
  env.body_attenuation_db = body;
  env.validate();
  return env;
}

Trajectory indoor_walk() {
  return Trajectory{{{0, {2, 2}, 0}, {5000, {12, 2}, 90}, {9000, {12, 10}, 180}}};
}

}  // namespace

TEST_CASE("body_attenuation") {
  // Facing +x: an AP ahead is clear, behind is blocked, abeam is clear.
  CHECK(body_attenuation(0, {0, 0}, {5, 0}, 5.0) == 0.0);
  CHECK(body_attenuation(180, {0, 0}, {5, 0}, 5.0) == 5.0);
  CHECK(body_attenuation(90, {0, 0}, {5, 0}, 5.0) == 0.0);
  CHECK(body_attenuation(270, {0, 0}, {5, 0}, 5.0) == 0.0);
  CHECK(body_attenuation(90, {0, 0}, {0, -5}, 5.0) == 5.0);
  CHECK(body_attenuation(0, {0, 0}, {-1, 100}, 5.0) == 5.0);
  CHECK(body_attenuation(45, {0, 0}, {1, -0.5}, 5.0) == 0.0);
  CHECK(body_attenuation(180, {3, 3}, {3, 3}, 5.0) == 0.0);
}

TEST_CASE("Trajectory::at interpolates position and holds orientation") {
  const auto walk = indoor_walk();
  auto p = walk.at(2500);
  CHECK(p.position == geo::MapPoint{7, 2});
  CHECK(p.orientation_deg == 0.0);
  p = walk.at(7000);
  CHECK(p.position.x == doctest::Approx(12));
  CHECK(p.position.y == doctest::Approx(6));
  CHECK(p.orientation_deg == 90.0);
  CHECK(walk.at(9000).orientation_deg == 180.0);
  CHECK(walk.at(-100).position == geo::MapPoint{2, 2});
  CHECK(walk.at(99999).position == geo::MapPoint{12, 10});

  CHECK_THROWS_AS(Trajectory{}.validate(), ConsistencyError);
  CHECK_THROWS_AS((Trajectory{{{0, {0, 0}, 0}, {0, {1, 1}, 0}}}.validate()), ConsistencyError);
  CHECK_THROWS_AS((Trajectory{{{0, {0, 0}, 360}}}.validate()), ConsistencyError);
}

TEST_CASE("generate_trace is reproducible from the seed") {
  const auto env = quiet_env(3.0, 5.0);
  SimConfig cfg;
  cfg.seed = 77;
  cfg.gps_noise_m = 2.0;
  const auto a = generate_trace(env, indoor_walk(), meter_refs(), cfg);
  const auto b = generate_trace(env, indoor_walk(), meter_refs(), cfg);
  CHECK(a.trace == b.trace);
  CHECK(a.truth == b.truth);
  cfg.seed = 78;
  const auto c = generate_trace(env, indoor_walk(), meter_refs(), cfg);
  CHECK_FALSE(a.trace == c.trace);
}

TEST_CASE("generate_trace structure") {
  const auto env = quiet_env(3.0, 5.0);
  SimConfig cfg;
  cfg.epoch_period_ms = 500;
  const auto sim = generate_trace(env, indoor_walk(), meter_refs(), cfg);
  REQUIRE(sim.trace.size() == 19);
  REQUIRE(sim.truth.size() == 19);
  for (std::size_t i = 0; i < sim.trace.size(); ++i) {
    const auto& e = sim.trace[i];
    CHECK(e.epoch_ms == static_cast<long long>(i) * 500);
    CHECK(sim.truth[i].epoch_ms == e.epoch_ms);
    REQUIRE(e.gps);
    // Entirely indoors: no valid GPS anywhere.
    CHECK_FALSE(e.gps->valid);
    REQUIRE(e.wlan);
    CHECK(e.wlan->readings.size() == 2);
    for (const auto& [id, rssi] : e.wlan->readings) {
      CHECK(rssi >= cfg.rssi_floor_dbm);
      CHECK(rssi <= cfg.rssi_ceiling_dbm);
    }
  }
}

TEST_CASE("noiseless trace equals the model prediction") {
  const auto env = quiet_env(0.0, 0.0);
  SimConfig cfg;
  cfg.seed = 5;
  const auto sim = generate_trace(env, indoor_walk(), meter_refs(), cfg);
  for (std::size_t i = 0; i < sim.trace.size(); ++i) {
    const auto pos = sim.truth[i].position;
    for (const auto& ap : env.aps) {
      CHECK(sim.trace[i].wlan->readings.at(ap.id) ==
            radio::predict_rssi(ap, pos, env.walls));
    }
    // Noise-free GPS maps back to the true position.
    const auto back = geo::interpolate_map_position(sim.trace[i].gps->coordinate, meter_refs());
    CHECK(back.x == doctest::Approx(pos.x).epsilon(1e-9));
    CHECK(back.y == doctest::Approx(pos.y).epsilon(1e-9));
  }
}

TEST_CASE("GPS validity follows the indoor regions") {
  const auto env = quiet_env(3.0, 5.0);
  const Trajectory walk{{{0, {-5, 5}, 0}, {10000, {5, 5}, 0}}};
  const auto sim = generate_trace(env, walk, meter_refs(), SimConfig{});
  for (std::size_t i = 0; i < sim.trace.size(); ++i) {
    CHECK(sim.trace[i].gps->valid == (sim.truth[i].position.x < 0.0));
  }
}

TEST_CASE("survey sample counts and ordering") {
  radio::RadioEnvironment env = quiet_env(3.0, 5.0);
  env.aps.push_back({"AP3", {5, 14}, -40, 1, 3, 3.0});
  env.validate();
  const std::vector<SurveyPoint> grid{{"Q1", {2, 2}}, {"Q0", {6, 4}}};
  const auto samples = survey(env, grid, 5, SimConfig{});
  REQUIRE(samples.size() == 2u * 4u * 3u * 5u);
  CHECK(samples.front().location_id == "Q1");
  CHECK(samples.front().ap_id == "AP1");
  CHECK(samples[1].ap_id == "AP2");
  CHECK(samples.back().location_id == "Q0");
  CHECK(samples.back().orientation_deg == 270);
  CHECK(radiomap::build_radio_map(samples).size() == 8);

  CHECK_THROWS_AS(survey(env, std::vector<SurveyPoint>{}, 5, SimConfig{}), ConsistencyError);
  CHECK_THROWS_AS(survey(env, grid, 0, SimConfig{}), ConsistencyError);
}

TEST_CASE("noiseless survey equals predictions minus body blockage") {
  const auto env = quiet_env(0.0, 5.0);
  const std::vector<SurveyPoint> grid{{"Q", {5, 1}}};
  const auto map = radiomap::build_radio_map(survey(env, grid, 3, SimConfig{}));
  const auto* ap1 = env.find_ap("AP1");
  const auto* ap2 = env.find_ap("AP2");
  const double p1 = radio::predict_rssi(*ap1, {5, 1}, env.walls);
  const double p2 = radio::predict_rssi(*ap2, {5, 1}, env.walls);
  // AP1 lies on -x, AP2 on +x (with a small +y offset).
  CHECK(map.find("Q", 0)->aps.at("AP1").mean_dbm == p1 - 5.0);
  CHECK(map.find("Q", 0)->aps.at("AP2").mean_dbm == p2);
  CHECK(map.find("Q", 180)->aps.at("AP1").mean_dbm == p1);
  CHECK(map.find("Q", 180)->aps.at("AP2").mean_dbm == p2 - 5.0);
  CHECK(map.find("Q", 90)->aps.at("AP2").mean_dbm == p2);
  CHECK(map.find("Q", 270)->aps.at("AP2").mean_dbm == p2 - 5.0);
  CHECK(map.find("Q", 0)->aps.at("AP1").stddev_db == 0.0);
}

TEST_CASE("mean surveyed RSSI falls with distance") {
  radio::RadioEnvironment env;
  env.aps = {{"AP", {0, 0}, -40, 1, 3, 3.0}};
  env.validate();
  const std::vector<SurveyPoint> grid{{"D02", {2, 0}}, {"D05", {5, 0}}, {"D10", {10, 0}},
                                      {"D20", {20, 0}}};
  const auto map = radiomap::build_radio_map(survey(env, grid, 200, SimConfig{}));
  double previous = 0.0;
  for (const char* id : {"D02", "D05", "D10", "D20"}) {
    const double mean = map.find(id, 90)->aps.at("AP").mean_dbm;
    CHECK(mean < previous);
    previous = mean;
  }
}

TEST_CASE("make_grid") {
  const auto grid = make_grid(0, 0, 4, 2, 2);
  REQUIRE(grid.size() == 6);
  CHECK(grid[0].location_id == "P0_0");
  CHECK(grid[5].location_id == "P1_2");
  CHECK(grid[5].position == geo::MapPoint{4, 2});
  CHECK(make_grid(0, 0, 24, 16, 2).size() == 117);
  CHECK_THROWS_AS(make_grid(0, 0, 1, 1, 0), ConsistencyError);
  CHECK_THROWS_AS(make_grid(2, 0, 1, 1, 1), ConsistencyError);
}

TEST_CASE("simulator file formats") {
  auto error_for = [](auto reader, std::string_view header, const std::string& body) {
    std::istringstream in(std::string(header) + "\n" + body);
    try {
      reader(in);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  auto trajectory = [](std::istream& in) { return read_trajectory(in, "walk.csv"); };
  auto grid = [](std::istream& in) { return read_grid(in, "grid.csv"); };
  auto truth = [](std::istream& in) { return read_truth(in, "truth.csv"); };

  CHECK(error_for(trajectory, kTrajectoryHeader, "0,0,0,0\n0,1,1,0\n").find("walk.csv:3:") == 0);
  CHECK(error_for(trajectory, kTrajectoryHeader, "0,0,0,360\n").find("orientation") !=
        std::string::npos);
  CHECK(error_for(trajectory, kTrajectoryHeader, "").find("no waypoints") != std::string::npos);
  CHECK(error_for(grid, kGridHeader, "A,0,0\nA,1,1\n").find("duplicate") != std::string::npos);
  CHECK(error_for(grid, kGridHeader, "A,0\n").find("grid.csv:2:") == 0);
  CHECK(error_for(truth, kTruthHeader, "0,1,1\n0,2,2\n").find("duplicate") != std::string::npos);

  const std::vector<geo::TimedPoint> points{{0, {1.5, -2}}, {1000, {0.1, 3}}};
  std::stringstream buffer;
  write_truth(buffer, points);
  CHECK(buffer.str() == "epoch_ms,x_m,y_m\n0,1.5,-2\n1000,0.1,3\n");
  CHECK(read_truth(buffer) == points);

  const auto shipped = read_trajectory(HYBRIDLOC_DATA_DIR "/trajectory.csv");
  CHECK_NOTHROW(shipped.validate());
  CHECK(read_grid(HYBRIDLOC_DATA_DIR "/grid.csv").size() == 117);
}
