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
#include "nadir/stabilize.hpp"
#include "nadir/synth.hpp"

using namespace nadir;

namespace
{

TrackPoint pt(long frame, double x, double y, double fps = 30.0)
{
  TrackPoint p;
  p.frame_num = frame;
  p.time_s = frame / fps;
  p.bbox = {x - 15, y - 9, x + 15, y + 9};
  p.center = {x, y};
  return p;
}

}  // namespace

TEST_CASE("a static scene with no offsets produces no events")
{
  std::vector<Trajectory> trajs;
  for (long id = 1; id <= 6; ++id) {
    Trajectory t;
    t.id = id;
    for (long f = 0; f < 60; ++f) t.points.push_back(pt(f, 100.0 * id, 200.0 + 50.0 * id));
    trajs.push_back(t);
  }
  CHECK(detect_deflections(trajs, StabilizeParams{}).empty());
}

TEST_CASE("the scripted deflection preset is recovered at the exact frame")
{
  const Scenario sc = make_preset("deflection");
  const SynthResult res = generate(sc);
  REQUIRE(res.deflections.size() == 1);
  const auto trajs = assemble_trajectories(res.records, sc.scene.fps);

  const auto events = detect_deflections(trajs, StabilizeParams::from_params(sc.scene.params));
  REQUIRE(events.size() == 1);
  CHECK(events[0].frame_start == res.deflections[0].frame);
  CHECK(events[0].dx == doctest::Approx(24.0).epsilon(0.05));
  CHECK(events[0].dy == doctest::Approx(-8.0).epsilon(0.05));
}

TEST_CASE("normal crossing traffic raises no false events")
{
  const Scenario sc = make_preset("no_deflection_control");
  const SynthResult res = generate(sc);
  const auto trajs = assemble_trajectories(res.records, sc.scene.fps);
  CHECK(detect_deflections(trajs, StabilizeParams::from_params(sc.scene.params)).empty());
}

TEST_CASE("correction restores the worked example center")
{
  // Box {845,139,860,190} carries a (+24, -8) displacement; subtracting it
  // restores the center to (828.5, 172.5).
  Trajectory t;
  t.id = 1;
  t.points.push_back(pt(100, 828.5, 172.5));
  TrackPoint moved;
  moved.frame_num = 101;
  moved.time_s = 101 / 30.0;
  moved.bbox = {845, 139, 860, 190};
  moved.center = {852.5, 164.5};
  t.points.push_back(moved);

  DeflectionEvent ev;
  ev.frame_start = 100;
  ev.frame_end = 100;
  ev.dx = 24.0;
  ev.dy = -8.0;
  ev.steps = {{100, 24.0, -8.0}};

  const auto corrected = apply_correction({t}, {ev}, 1920, 1080);
  REQUIRE(corrected.size() == 1);
  const TrackPoint & after = corrected[0].points[1];
  CHECK(after.center.x == doctest::Approx(828.5));
  CHECK(after.center.y == doctest::Approx(172.5));
  CHECK(after.bbox.xmin == doctest::Approx(821.0));
  // Points before the event are untouched.
  CHECK(corrected[0].points[0].center.x == doctest::Approx(828.5));
}

TEST_CASE("empty event list is the identity")
{
  Trajectory t;
  t.id = 2;
  t.points.push_back(pt(0, 300, 300));
  const auto corrected = apply_correction({t}, {}, 1920, 1080);
  CHECK(corrected[0].points[0].center.x == 300);
}

TEST_CASE("two events accumulate")
{
  Trajectory t;
  t.id = 3;
  for (long f = 0; f < 30; ++f) t.points.push_back(pt(f, 500, 500));
  DeflectionEvent e1;
  e1.frame_start = e1.frame_end = 9;
  e1.dx = 10.0;
  e1.dy = 0.0;
  e1.steps = {{9, 10.0, 0.0}};
  DeflectionEvent e2;
  e2.frame_start = e2.frame_end = 19;
  e2.dx = 5.0;
  e2.dy = 5.0;
  e2.steps = {{19, 5.0, 5.0}};

  const auto corrected = apply_correction({t}, {e1, e2}, 1920, 1080);
  // After both events the accumulated shift (15, 5) is subtracted.
  CHECK(corrected[0].points[25].center.x == doctest::Approx(485.0));
  CHECK(corrected[0].points[25].center.y == doctest::Approx(495.0));
  // Between the events only the first is subtracted.
  CHECK(corrected[0].points[15].center.x == doctest::Approx(490.0));
  CHECK(corrected[0].points[15].center.y == doctest::Approx(500.0));
}

TEST_CASE("corrected boxes leaving the image are flagged, not dropped")
{
  Trajectory t;
  t.id = 4;
  t.points.push_back(pt(0, 20, 500));
  t.points.push_back(pt(1, 20, 500));
  DeflectionEvent ev;
  ev.frame_start = ev.frame_end = 0;
  ev.dx = 30.0;  // correction pushes x to -10
  ev.dy = 0.0;
  ev.steps = {{0, 30.0, 0.0}};
  const auto corrected = apply_correction({t}, {ev}, 1920, 1080);
  REQUIRE(corrected[0].points.size() == 2);
  CHECK(corrected[0].points[1].out_of_frame);
  CHECK_FALSE(corrected[0].points[0].out_of_frame);
}

TEST_CASE("pure translation estimates zero rotation")
{
  std::vector<std::pair<Vec2, Vec2>> matches;
  for (double x = 100; x <= 500; x += 100) {
    for (double y = 100; y <= 300; y += 100) matches.push_back({{x, y}, {x + 24, y - 8}});
  }
  const auto rot = estimate_rotation(matches);
  REQUIRE(rot.has_value());
  CHECK(std::abs(*rot) < 1e-9);
}

TEST_CASE("a scripted rotation is estimated to within a tenth of a degree")
{
  const double angle = deg_to_rad(4.4);
  const Vec2 center{960, 540};
  std::vector<std::pair<Vec2, Vec2>> matches;
  for (double x = 200; x <= 1700; x += 300) {
    for (double y = 150; y <= 950; y += 200) {
      const Vec2 d{x - center.x, y - center.y};
      const Vec2 rotated{
        center.x + d.x * std::cos(angle) - d.y * std::sin(angle),
        center.y + d.x * std::sin(angle) + d.y * std::cos(angle)};
      matches.push_back({{x, y}, rotated});
    }
  }
  const auto rot = estimate_rotation(matches);
  REQUIRE(rot.has_value());
  CHECK(*rot == doctest::Approx(4.4).epsilon(0.1 / 4.4));
}

TEST_CASE("rotation estimation needs at least three matches")
{
  CHECK_FALSE(estimate_rotation({{{100, 100}, {101, 100}}}).has_value());
  CHECK_FALSE(
    estimate_rotation({{{100, 100}, {101, 100}}, {{200, 100}, {201, 100}}}).has_value());
}

TEST_CASE("the rotation preset is detected and its angle recovered")
{
  const Scenario sc = make_preset("rotation");
  const SynthResult res = generate(sc);
  REQUIRE(res.deflections.size() == 1);
  const auto trajs = assemble_trajectories(res.records, sc.scene.fps);
  const auto events = detect_deflections(trajs, StabilizeParams::from_params(sc.scene.params));
  REQUIRE(events.size() == 1);
  CHECK(events[0].frame_start == res.deflections[0].frame);
  REQUIRE(events[0].rotation_deg.has_value());
  CHECK(*events[0].rotation_deg == doctest::Approx(0.6).epsilon(0.1));
}

TEST_CASE("deflection CSV has the declared columns")
{
  DeflectionEvent ev;
  ev.frame_start = 100;
  ev.frame_end = 100;
  ev.dx = 24.0;
  ev.dy = -8.0;
  ev.n_matched = 20;
  std::ostringstream out;
  emit_deflection_csv(out, {ev});
  std::istringstream lines(out.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "frame_start,frame_end,dx,dy,rotation_deg,n_matched");
  std::string row;
  std::getline(lines, row);
  CHECK(row == "100,100,24,-8,,20");
}
