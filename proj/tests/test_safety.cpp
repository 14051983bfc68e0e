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
#include "nadir/error.hpp"
#include "nadir/safety.hpp"
#include "nadir/synth.hpp"

using namespace nadir;

namespace
{

std::map<long, std::vector<KinematicSample>> enrich_all(
  const std::vector<Trajectory> & trajs, const SceneConfig & scene)
{
  std::map<long, std::vector<KinematicSample>> out;
  for (const Trajectory & t : trajs) {
    out[t.id] = enrich_kinematics(t, scene.meters_per_px(), scene.fps, scene.params);
  }
  return out;
}

ConflictEvent pet_event(double min_ms)
{
  ConflictEvent ev;
  ev.kind = ConflictKind::pet;
  ev.min_ms = min_ms;
  ev.series_ms = {min_ms};
  return ev;
}

}  // namespace

TEST_CASE("a 15.5 m gap closed at 10 m/s gives 1550 ms to collision")
{
  CarFollowingState state;
  state.leader_position_m = 20.0;
  state.follower_position_m = 0.0;
  state.leader_length_m = 4.5;
  state.leader_speed_ms = 5.0;
  state.follower_speed_ms = 15.0;
  const auto ttc = compute_ttc(state);
  REQUIRE(ttc.has_value());
  CHECK(ttc->ttc_ms == doctest::Approx(1550.0));
  CHECK_FALSE(ttc->overlap);
}

TEST_CASE("a 1.402625 m gap closed at 8.39 km/h gives 601.84 ms")
{
  CarFollowingState state;
  state.leader_position_m = 1.402625;
  state.follower_position_m = 0.0;
  state.leader_length_m = 0.0;
  state.leader_speed_ms = 0.0;
  state.follower_speed_ms = 8.39 / 3.6;
  const auto ttc = compute_ttc(state);
  REQUIRE(ttc.has_value());
  CHECK(ttc->ttc_ms == doctest::Approx(1.402625 / (8.39 / 3.6) * 1000.0));
  CHECK(ttc->ttc_ms == doctest::Approx(601.8415).epsilon(1e-6));
}

TEST_CASE("a non-positive net gap clamps to zero and flags the overlap")
{
  CarFollowingState state;
  state.leader_position_m = 4.0;
  state.follower_position_m = 0.0;
  state.leader_length_m = 4.5;
  state.follower_speed_ms = 1.0;
  const auto ttc = compute_ttc(state);
  REQUIRE(ttc.has_value());
  CHECK(ttc->ttc_ms == 0.0);
  CHECK(ttc->overlap);

  // Overlap wins even when the pair is diverging.
  state.leader_speed_ms = 10.0;
  const auto diverging = compute_ttc(state);
  REQUIRE(diverging.has_value());
  CHECK(diverging->overlap);
}

TEST_CASE("a pair that is not closing has no time to collision")
{
  CarFollowingState state;
  state.leader_position_m = 30.0;
  state.leader_length_m = 4.5;
  state.leader_speed_ms = 12.0;
  state.follower_speed_ms = 12.0;
  CHECK_FALSE(compute_ttc(state).has_value());
  state.follower_speed_ms = 8.0;
  CHECK_FALSE(compute_ttc(state).has_value());
}

TEST_CASE("encroachment time is the arrival difference in milliseconds")
{
  CHECK(compute_pet_ms(9.000, 9.987) == doctest::Approx(987.0));
  CHECK(compute_pet_ms(5.0, 5.0) == 0.0);
  CHECK_THROWS_AS(compute_pet_ms(9.987, 9.000), Error);
}

TEST_CASE("warning distance is reaction travel plus braking travel")
{
  CHECK(min_warning_distance_m(10.0, 2.5, 3.4) == doctest::Approx(39.71).epsilon(1e-3));
  CHECK(min_warning_distance_m(0.0, 2.5, 3.4) == 0.0);
  CHECK(min_warning_distance_m(20.0, 2.5, 3.4) > 2.0 * min_warning_distance_m(10.0, 2.5, 3.4));
  CHECK_THROWS_AS(min_warning_distance_m(10.0, 2.5, 0.0), Error);
}

TEST_CASE("heat levels are left closed bands over the edges")
{
  const std::vector<double> edges{1000.0, 2000.0, 3000.0, 4000.0};
  CHECK(heat_level(500.0, edges) == 1);
  CHECK(heat_level(999.999, edges) == 1);
  CHECK(heat_level(1000.0, edges) == 2);
  CHECK(heat_level(1200.0, edges) == 2);
  CHECK(heat_level(3999.0, edges) == 4);
  CHECK(heat_level(4000.0, edges) == 5);
  CHECK(heat_level(1e9, edges) == 5);
  CHECK_THROWS_AS(heat_level(500.0, {2000.0, 1000.0}), Error);
}

TEST_CASE("the heatmap bins by cell, averages means, and keeps every event")
{
  SceneConfig scene;  // 1920x1080, 32x18 grid: 60 px cells
  std::vector<ConflictEvent> events;
  auto at = [](double x, double y, double mean) {
    ConflictEvent ev;
    ev.location_px = {x, y};
    ev.series_ms = {mean};
    return ev;
  };
  events.push_back(at(30.0, 30.0, 800.0));
  events.push_back(at(59.9, 10.0, 1600.0));
  events.push_back(at(60.0, 10.0, 500.0));    // left edge of the next column
  events.push_back(at(1920.0, 1080.0, 500.0));  // clamped into the last cell

  const auto cells = conflict_heatmap(events, scene);
  long total = 0;
  for (const auto & cell : cells) total += cell.count;
  CHECK(total == static_cast<long>(events.size()));

  bool found_pair = false, found_next_col = false, found_corner = false;
  for (const auto & cell : cells) {
    if (cell.col == 0 && cell.row == 0) {
      found_pair = true;
      CHECK(cell.count == 2);
      CHECK(cell.mean_ms == doctest::Approx(1200.0));
      CHECK(cell.level == 2);
    }
    if (cell.col == 1 && cell.row == 0) {
      found_next_col = true;
      CHECK(cell.count == 1);
      CHECK(cell.level == 1);
    }
    if (cell.col == 31 && cell.row == 17) found_corner = true;
  }
  CHECK(found_pair);
  CHECK(found_next_col);
  CHECK(found_corner);
}

TEST_CASE("the share of encroachments below the cutoff is quoted truncated")
{
  std::vector<ConflictEvent> events;
  for (int i = 0; i < 356; ++i) events.push_back(pet_event(i < 95 ? 500.0 : 1500.0));
  ConflictEvent ttc_noise;
  ttc_noise.kind = ConflictKind::ttc;
  ttc_noise.min_ms = 100.0;
  events.push_back(ttc_noise);

  const PetSummary summary = summarize_pet(events);
  CHECK(summary.total == 356);
  CHECK(summary.below == 95);
  CHECK(summary.percent == doctest::Approx(100.0 * 95.0 / 356.0));
  CHECK(summary.percent_text == "26.68");

  const PetSummary empty = summarize_pet({});
  CHECK(empty.total == 0);
  CHECK(empty.percent == 0.0);
  CHECK(empty.percent_text == "0.00");
}

TEST_CASE("an event mean is the mean of its series")
{
  ConflictEvent ev;
  CHECK(ev.mean_ms() == 0.0);
  ev.series_ms = {800.0, 1600.0};
  CHECK(ev.mean_ms() == doctest::Approx(1200.0));
}

TEST_CASE("a scripted closing pair yields one car-following conflict")
{
  const Scenario sc = make_preset("closing_pair");
  const SynthResult res = generate(sc);
  const auto trajs = assemble_trajectories(res.records, sc.scene.fps);
  const auto kin = enrich_all(trajs, sc.scene);
  const SafetyResult result = extract_conflicts(trajs, kin, sc.scene);

  REQUIRE(result.events.size() == 1);
  const ConflictEvent & ev = result.events[0];
  CHECK(ev.conflict_id == 1);
  CHECK(ev.kind == ConflictKind::ttc);
  CHECK(ev.id_a == 1);
  CHECK(ev.id_b == 2);
  CHECK(ev.min_ms == doctest::Approx(601.8415).epsilon(1e-4));
  CHECK(ev.duration_frames == 43);
  CHECK(ev.t_end_s > ev.t_start_s);
  CHECK_FALSE(ev.overlap);
  CHECK(ev.within_warning);
  CHECK_FALSE(ev.low_variance);

  // The status table carries the follower rows behind the event.
  REQUIRE(!result.status.empty());
  bool linked = false;
  for (const SafetyStatus & row : result.status) {
    CHECK(row.id == 2);
    CHECK(row.leader_id == 1);
    if (row.conflict_id && *row.conflict_id == 1) {
      linked = true;
      REQUIRE(row.ttc_ms.has_value());
      CHECK(*row.ttc_ms > 0.0);
    }
  }
  CHECK(linked);
}

TEST_CASE("a scripted ordered crossing yields one encroachment conflict")
{
  const Scenario sc = make_preset("pet_pair");
  const SynthResult res = generate(sc);
  const auto trajs = assemble_trajectories(res.records, sc.scene.fps);
  const auto kin = enrich_all(trajs, sc.scene);
  const SafetyResult result = extract_conflicts(trajs, kin, sc.scene);

  REQUIRE(result.events.size() == 1);
  const ConflictEvent & ev = result.events[0];
  CHECK(ev.kind == ConflictKind::pet);
  CHECK(ev.min_ms == doctest::Approx(987.0).epsilon(1e-6));
  CHECK(ev.id_a != ev.id_b);
  CHECK(ev.series_ms.size() == 1);
}

TEST_CASE("free flowing traffic produces no conflicts")
{
  const Scenario sc = make_preset("free_flow");
  const SynthResult res = generate(sc);
  const auto trajs = assemble_trajectories(res.records, sc.scene.fps);
  const auto kin = enrich_all(trajs, sc.scene);
  const SafetyResult result = extract_conflicts(trajs, kin, sc.scene);
  CHECK(result.events.empty());
}

TEST_CASE("conflict CSV has the declared columns and flag spelling")
{
  ConflictEvent ev;
  ev.conflict_id = 1;
  ev.kind = ConflictKind::ttc;
  ev.id_a = 1;
  ev.id_b = 2;
  ev.t_start_s = 10.5;
  ev.t_end_s = 12.0;
  ev.min_ms = 601.5;
  ev.duration_frames = 43;
  ev.location_px = {1151.5, 600.0};
  ev.within_warning = true;
  std::ostringstream out;
  emit_conflicts_csv(out, {ev});
  std::istringstream lines(out.str());
  std::string header, row;
  std::getline(lines, header);
  CHECK(
    header ==
    "conflict_id,kind,id_a,id_b,t_start,t_end,min_ms,duration_frames,loc_x,loc_y,"
    "overlap,within_warning,low_variance");
  std::getline(lines, row);
  CHECK(row == "1,ttc,1,2,10.5,12,601.5,43,1151.5,600,FALSE,TRUE,FALSE");
}

TEST_CASE("safety status CSV keeps the legacy column names")
{
  SafetyStatus row;
  row.id = 2;
  row.speed_kmh = 8.39;
  row.accel_ms2 = 0.0;
  row.time_s = 10.5;
  row.gap_m = 1.5;
  row.speed_diff_kmh = -8.39;
  row.conflict_id = 1;
  row.ttc_ms = 643.6;
  std::ostringstream out;
  emit_safety_status_csv(out, {row});
  std::istringstream lines(out.str());
  std::string header, text;
  std::getline(lines, header);
  CHECK(header == "id,speed,acc,time,distance,speed_difference,collision,collisionID,TTC");
  std::getline(lines, text);
  CHECK(text == "2,8.39,0,10.5,1.5,-8.39,FALSE,1,643.6");

  // Unlinked rows leave the id and TTC cells empty.
  row.conflict_id.reset();
  row.ttc_ms.reset();
  std::ostringstream bare;
  emit_safety_status_csv(bare, {row});
  std::istringstream bare_lines(bare.str());
  std::getline(bare_lines, header);
  std::getline(bare_lines, text);
  CHECK(text == "2,8.39,0,10.5,1.5,-8.39,FALSE,,");
}

TEST_CASE("heatmap CSV lists occupied cells only")
{
  HeatmapCell cell;
  cell.col = 19;
  cell.row = 10;
  cell.count = 2;
  cell.mean_ms = 1200.0;
  cell.level = 2;
  std::ostringstream out;
  emit_heatmap_csv(out, {cell});
  CHECK(out.str() == "col,row,count,mean_ms,level\n19,10,2,1200,2\n");
}
