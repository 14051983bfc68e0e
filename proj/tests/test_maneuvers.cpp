// Copyright 2026 The nadir authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "nadir/kinematics.hpp"
#include "nadir/maneuvers.hpp"
#include "nadir/synth.hpp"

using namespace nadir;

namespace
{

constexpr double kFps = 30.0;

TrackPoint pt(long frame, double x, double y)
{
  TrackPoint p;
  p.frame_num = frame;
  p.time_s = frame / kFps;
  p.bbox = {x - 15, y - 9, x + 15, y + 9};
  p.center = {x, y};
  return p;
}

// Four-leg intersection on a 1920x1080 frame; approach polygons hug the
// frame edges.
SceneConfig crossroads()
{
  SceneConfig scene;
  scene.approaches["west"] = {{{0, 400}, {200, 400}, {200, 700}, {0, 700}}, "west_east"};
  scene.approaches["east"] = {{{1720, 400}, {1920, 400}, {1920, 700}, {1720, 700}}, "west_east"};
  scene.approaches["north"] = {{{800, 0}, {1100, 0}, {1100, 200}, {800, 200}}, "north_south"};
  scene.approaches["south"] = {{{800, 880}, {1100, 880}, {1100, 1080}, {800, 1080}}, "north_south"};
  return scene;
}

// L-shaped track: enters moving east from the west edge, then turns toward
// the exit heading.
Trajectory turn_track(long id, Vec2 entry_dir, Vec2 exit_dir, Vec2 start)
{
  Trajectory t;
  t.id = id;
  long frame = 0;
  Vec2 pos = start;
  // 90 entry steps put the turn at the intersection center so the exit leg
  // ends inside the north or south approach polygon.
  for (int i = 0; i < 90; ++i) {
    t.points.push_back(pt(frame++, pos.x, pos.y));
    pos = pos + entry_dir * 10.0;
  }
  for (int i = 0; i < 40; ++i) {
    t.points.push_back(pt(frame++, pos.x, pos.y));
    pos = pos + exit_dir * 10.0;
  }
  return t;
}

}  // namespace

TEST_CASE("straight west-to-east crossing classifies as through")
{
  const SceneConfig scene = crossroads();
  Trajectory t;
  t.id = 1;
  for (long f = 0; f <= 100; ++f) t.points.push_back(pt(f, 50.0 + f * 18.5, 550.0));
  const auto m = classify_turn(t, scene);
  REQUIRE(m.has_value());
  CHECK(m->entry_approach == "west");
  CHECK(m->exit_approach == "east");
  CHECK(m->movement == Movement::through);
  CHECK(std::abs(m->heading_change_deg) < 5.0);
}

TEST_CASE("west entry exiting north classifies as a left turn")
{
  const SceneConfig scene = crossroads();
  // Eastbound entry, then north (screen up): a left turn in road terms.
  const Trajectory t = turn_track(2, {1, 0}, {0, -1}, {50, 550});
  const auto m = classify_turn(t, scene);
  REQUIRE(m.has_value());
  CHECK(m->entry_approach == "west");
  CHECK(m->exit_approach == "north");
  CHECK(m->movement == Movement::left);
  CHECK(m->heading_change_deg == doctest::Approx(-90.0).epsilon(0.05));
}

TEST_CASE("west entry exiting south classifies as a right turn")
{
  const SceneConfig scene = crossroads();
  const Trajectory t = turn_track(3, {1, 0}, {0, 1}, {50, 550});
  const auto m = classify_turn(t, scene);
  REQUIRE(m.has_value());
  CHECK(m->movement == Movement::right);
  CHECK(m->heading_change_deg == doctest::Approx(90.0).epsilon(0.05));
}

TEST_CASE("re-entering the entry approach classifies as a u-turn")
{
  const SceneConfig scene = crossroads();
  Trajectory t;
  t.id = 4;
  long frame = 0;
  // East out of the west approach, loop, and back west into it.
  for (int i = 0; i < 30; ++i) t.points.push_back(pt(frame++, 50.0 + i * 12.0, 550.0));
  for (int i = 0; i < 20; ++i) {
    const double a = M_PI * i / 19.0;  // half circle, heading east to west
    t.points.push_back(
      pt(frame++, 410.0 + 60.0 * std::sin(a), 490.0 + 60.0 * -std::cos(a) + 60.0));
  }
  for (int i = 0; i < 30; ++i) t.points.push_back(pt(frame++, 410.0 - i * 12.0, 610.0));
  const auto m = classify_turn(t, scene);
  REQUIRE(m.has_value());
  CHECK(m->entry_approach == "west");
  CHECK(m->exit_approach == "west");
  CHECK(m->movement == Movement::u_turn);
}

TEST_CASE("tracks that never reach two approaches are unclassified")
{
  const SceneConfig scene = crossroads();
  Trajectory t;
  t.id = 5;
  for (long f = 0; f < 40; ++f) t.points.push_back(pt(f, 600.0 + f, 550.0));
  CHECK_FALSE(classify_turn(t, scene).has_value());
}

TEST_CASE("count_turns tallies by entry approach")
{
  const SceneConfig scene = crossroads();
  std::vector<Trajectory> trajs;
  Trajectory through;
  through.id = 1;
  for (long f = 0; f <= 100; ++f) through.points.push_back(pt(f, 50.0 + f * 18.5, 550.0));
  trajs.push_back(through);
  trajs.push_back(turn_track(2, {1, 0}, {0, -1}, {50, 550}));
  trajs.push_back(turn_track(3, {1, 0}, {0, 1}, {50, 550}));
  Trajectory lost;
  lost.id = 4;
  for (long f = 0; f < 40; ++f) lost.points.push_back(pt(f, 600.0 + f, 550.0));
  trajs.push_back(lost);

  const TurningCountTable table = count_turns(trajs, scene);
  CHECK(table.classified == 3);
  CHECK(table.unclassified == 1);
  const auto & west = table.counts.at("west");
  CHECK(west[0] == 1);  // through
  CHECK(west[1] == 1);  // left
  CHECK(west[2] == 1);  // right
  CHECK(west[3] == 0);  // u-turn

  std::ostringstream out;
  emit_turning_csv(out, table);
  std::string header;
  std::istringstream lines(out.str());
  std::getline(lines, header);
  CHECK(header == "approach,through,left,right,u_turn");
}

namespace
{

LaneModel highway_lanes()
{
  // Lane bands: [500,560] lane 1, [560,620] lane 2, [620,680] lane 3,
  // [680,740] lane 4.
  LaneModel model;
  model.axis = Axis::ew;
  model.travel = TravelDir::east;
  for (double y = 500.0; y <= 740.0; y += 60.0) {
    model.boundaries.push_back({{0, y}, {1920, y}});
  }
  return model;
}

}  // namespace

TEST_CASE("lane assignment is constant inside a band")
{
  const LaneModel model = highway_lanes();
  Trajectory t;
  t.id = 1;
  for (long f = 0; f < 30; ++f) t.points.push_back(pt(f, 100.0 + f * 4.0, 700.0));
  const auto series = lateral_offset_series(t, model);
  REQUIRE(series.size() == 30);
  for (const LateralSample & s : series) {
    REQUIRE(s.lane_index.has_value());
    CHECK(*s.lane_index == 4);
    CHECK(s.lateral_px == doctest::Approx(700.0));
  }
}

TEST_CASE("boundary points go to the nearer centerline, ties to the lower index")
{
  const LaneModel model = highway_lanes();
  // y=560 is the exact 1|2 boundary; centerlines 530 and 590 are equidistant.
  CHECK(lane_index_at(model, {500, 560.0}) == 1);
  CHECK(lane_index_at(model, {500, 561.0}) == 2);
  CHECK(lane_index_at(model, {500, 559.0}) == 1);
  CHECK_FALSE(lane_index_at(model, {500, 499.0}).has_value());
  CHECK_FALSE(lane_index_at(model, {500, 741.0}).has_value());
}

TEST_CASE("the double lane change produces two events with the scripted crossing")
{
  const Scenario sc = make_preset("lane_change_double");
  const SynthResult res = generate(sc);
  const auto trajs = assemble_trajectories(res.records, sc.scene.fps);
  REQUIRE(trajs.size() == 1);
  const auto samples = enrich_kinematics(
    trajs[0], sc.scene.meters_per_px(), sc.scene.fps, sc.scene.params);
  REQUIRE(sc.scene.lane_models.count("main") == 1);
  const auto events =
    detect_lane_changes(trajs[0], samples, sc.scene.lane_models.at("main"), sc.scene.params);
  REQUIRE(events.size() == 2);
  CHECK(events[0].from_lane == 3);
  CHECK(events[0].to_lane == 4);
  CHECK(events[1].from_lane == 4);
  CHECK(events[1].to_lane == 5);
  // The first boundary crossing is scripted at exactly t=242.44 s at
  // 14 km/h ground speed.
  CHECK(events[0].time_s == doctest::Approx(242.44).epsilon(1e-6));
  CHECK(std::abs(events[0].spot_speed_kmh - 14.0) < 0.5);
}

TEST_CASE("sub-hysteresis wiggle produces no events")
{
  const Scenario sc = make_preset("lane_change_wiggle");
  const SynthResult res = generate(sc);
  const auto trajs = assemble_trajectories(res.records, sc.scene.fps);
  REQUIRE(trajs.size() == 1);
  const auto samples = enrich_kinematics(
    trajs[0], sc.scene.meters_per_px(), sc.scene.fps, sc.scene.params);
  const auto events =
    detect_lane_changes(trajs[0], samples, sc.scene.lane_models.at("main"), sc.scene.params);
  CHECK(events.empty());
}

TEST_CASE("lane change CSV columns")
{
  LaneChangeEvent ev;
  ev.id = 275;
  ev.time_s = 242.44;
  ev.from_lane = 3;
  ev.to_lane = 4;
  ev.spot_speed_kmh = 14.0;
  std::ostringstream out;
  emit_lane_change_csv(out, {ev});
  std::istringstream lines(out.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "id,time_s,from_lane,to_lane,spot_speed_kmh");
  std::string row;
  std::getline(lines, row);
  CHECK(row == "275,242.44,3,4,14");
}

TEST_CASE("time-space series measures from the upstream corridor line")
{
  SceneConfig scene;
  scene.corridor = {Axis::ew, 200.0, 1400.0, 100.368};  // 1200 px at stock scale
  Trajectory east;
  east.id = 1;
  for (long f = 0; f <= 60; ++f) east.points.push_back(pt(f, 200.0 + f * 20.0, 540.0));
  const auto series = time_space_series(east, scene, TravelDir::east);
  REQUIRE(series.size() == 61);
  CHECK(series[0].distance_m == doctest::Approx(0.0));
  CHECK(series[60].distance_m == doctest::Approx(100.368));
  for (size_t i = 1; i < series.size(); ++i) {
    CHECK(series[i].distance_m > series[i - 1].distance_m);
  }

  // A westbound vehicle measures from the other line.
  Trajectory west;
  west.id = 2;
  for (long f = 0; f <= 60; ++f) west.points.push_back(pt(f, 1400.0 - f * 20.0, 540.0));
  const auto wseries = time_space_series(west, scene, TravelDir::west);
  CHECK(wseries[0].distance_m == doctest::Approx(0.0));
  CHECK(wseries[60].distance_m == doctest::Approx(100.368));
}

TEST_CASE("a stopped vehicle draws a horizontal time-space segment")
{
  const Scenario sc = make_preset("platoon_stop_go");
  const SynthResult res = generate(sc);
  const auto trajs = assemble_trajectories(res.records, sc.scene.fps);
  REQUIRE(trajs.size() == 5);
  const auto series = time_space_series(trajs[0], sc.scene, TravelDir::east);
  REQUIRE(!series.empty());
  // Scripted stop between 10 and 14 s for the first vehicle: distance flat.
  double d_at_11 = 0.0;
  double d_at_13 = 0.0;
  for (const TsdPoint & p : series) {
    if (std::abs(p.time_s - 11.0) < 1e-9) d_at_11 = p.distance_m;
    if (std::abs(p.time_s - 13.0) < 1e-9) d_at_13 = p.distance_m;
  }
  CHECK(d_at_11 == doctest::Approx(d_at_13).epsilon(1e-9));
  // And moving before the stop.
  CHECK(series.front().distance_m < d_at_11);
}

TEST_CASE("movements CSV columns")
{
  TurningMovement m;
  m.id = 7;
  m.cls = VehicleClass::bus;
  m.entry_approach = "west";
  m.exit_approach = "north";
  m.movement = Movement::left;
  m.heading_change_deg = -90.0;
  m.entry_time_s = 12.5;
  std::ostringstream out;
  emit_movements_csv(out, {m});
  std::istringstream lines(out.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "id,class,entry,exit,movement,heading_change_deg,entry_time_s");
  std::string row;
  std::getline(lines, row);
  CHECK(row == "7,bus,west,north,left,-90,12.5");
}
