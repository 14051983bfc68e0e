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
#include "nadir/kinematics.hpp"
#include "nadir/synth.hpp"

using namespace nadir;

namespace
{

constexpr double kMpp = 0.08364;
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

Trajectory straight_track(long frames, double px_per_frame)
{
  Trajectory t;
  t.id = 1;
  for (long f = 0; f < frames; ++f) t.points.push_back(pt(f, 100.0 + px_per_frame * f, 540.0));
  return t;
}

}  // namespace

TEST_CASE("one pixel per frame is the speed anchor")
{
  // 0.08364 m / (1/30 s) = 2.5092 m/s = 9.03312 km/h.
  const double v = speed_between(pt(0, 100, 540), pt(1, 101, 540), kMpp, kFps);
  CHECK(v == doctest::Approx(9.033).epsilon(1e-4));
  CHECK(std::abs(v - 9.03312) < 1e-9);
}

TEST_CASE("zero displacement gives zero speed")
{
  CHECK(speed_between(pt(0, 100, 540), pt(1, 100, 540), kMpp, kFps) == 0.0);
}

TEST_CASE("a 3-4-5 offset multiplies the anchor by five")
{
  const double v = speed_between(pt(0, 100, 540), pt(1, 103, 544), kMpp, kFps);
  CHECK(v == doctest::Approx(45.166).epsilon(1e-4));
}

TEST_CASE("frame gaps spread the displacement over the real time span")
{
  // 2 px over 2 frames is still 1 px per frame.
  const double v = speed_between(pt(0, 100, 540), pt(2, 102, 540), kMpp, kFps);
  CHECK(v == doctest::Approx(9.03312));
  CHECK_THROWS_AS(speed_between(pt(5, 0, 0), pt(5, 1, 1), kMpp, kFps), Error);
}

TEST_CASE("constant-velocity track enriches to constant speed and zero acceleration")
{
  const Trajectory t = straight_track(90, 1.0);
  const AnalysisParams params;
  const auto samples = enrich_kinematics(t, kMpp, kFps, params);
  REQUIRE(samples.size() == 90);
  CHECK(samples[0].speed_kmh == 0.0);  // first sample has no predecessor
  for (size_t i = 1; i < samples.size(); ++i) {
    CHECK(samples[i].speed_kmh == doctest::Approx(9.03312));
    CHECK(samples[i].speed_ms == doctest::Approx(2.5092));
    CHECK(std::abs(samples[i].accel_ms2) < 1e-9);
  }
}

TEST_CASE("uniform acceleration is recovered within one percent")
{
  // Scripted 0.5 m/s^2 via the synthetic preset.
  const Scenario sc = make_preset("uniform_accel");
  const SynthResult res = generate(sc);
  const auto trajs = assemble_trajectories(res.records, sc.scene.fps);
  REQUIRE(trajs.size() == 1);
  const auto samples =
    enrich_kinematics(trajs[0], sc.scene.meters_per_px(), sc.scene.fps, sc.scene.params);
  REQUIRE(samples.size() > 60);
  // Skip the ramp-in region where the acceleration window is truncated.
  for (size_t i = 30; i + 30 < samples.size(); ++i) {
    CHECK(samples[i].accel_ms2 == doctest::Approx(0.5).epsilon(0.02));
  }
}

TEST_CASE("single-point track yields one zero-speed sample")
{
  Trajectory t;
  t.id = 9;
  t.points.push_back(pt(4, 300, 300));
  AnalysisParams params;
  params.min_kinematics_points = 1;
  const auto samples = enrich_kinematics(t, kMpp, kFps, params);
  REQUIRE(samples.size() == 1);
  CHECK(samples[0].speed_kmh == 0.0);

  // Below the minimum the series is empty.
  params.min_kinematics_points = 2;
  CHECK(enrich_kinematics(t, kMpp, kFps, params).empty());
}

TEST_CASE("mean speed excludes the synthetic leading zero")
{
  const Trajectory t = straight_track(30, 1.0);
  const AnalysisParams params;
  const auto samples = enrich_kinematics(t, kMpp, kFps, params);
  CHECK(trajectory_mean_speed(samples) == doctest::Approx(9.03312));
}

TEST_CASE("mean speed of a sinusoidal profile lands on the scripted mean")
{
  const Scenario sc = make_preset("sinusoid_speed");
  const SynthResult res = generate(sc);
  const auto trajs = assemble_trajectories(res.records, sc.scene.fps);
  REQUIRE(trajs.size() == 1);
  const auto samples =
    enrich_kinematics(trajs[0], sc.scene.meters_per_px(), sc.scene.fps, sc.scene.params);
  // Scripted profile: 4 + 1.5 sin(2 pi t / 10) m/s over whole periods,
  // mean exactly 4 m/s = 14.4 km/h.
  CHECK(trajectory_mean_speed(samples) == doctest::Approx(14.4).epsilon(1e-3));
}

TEST_CASE("corridor transit speed follows length over time")
{
  SceneConfig scene;
  scene.corridor = {Axis::ew, 200.0, 1400.0, 160.6};
  // 1 px/frame track entering at x=200 and leaving at x=1400 takes 1200
  // frames = 40 s: 160.6 m / 40 s = 14.454 km/h.
  const Trajectory t = straight_track(1301, 1.0);
  const auto transit = corridor_speed(t, scene);
  REQUIRE(transit.has_value());
  CHECK(transit->transit_s == doctest::Approx(40.0));
  CHECK(transit->speed_kmh == doctest::Approx(14.454).epsilon(1e-4));

  // Doubling the speed halves the transit.
  const Trajectory fast = straight_track(651, 2.0);
  const auto transit2 = corridor_speed(fast, scene);
  REQUIRE(transit2.has_value());
  CHECK(transit2->speed_kmh == doctest::Approx(28.908).epsilon(1e-4));
}

TEST_CASE("tracks that never span the corridor have no transit")
{
  SceneConfig scene;
  scene.corridor = {Axis::ew, 200.0, 1400.0, 160.6};
  const Trajectory t = straight_track(30, 1.0);  // stays near x=100..130
  CHECK_FALSE(corridor_speed(t, scene).has_value());
}

TEST_CASE("speed interpolation is linear between samples")
{
  const Trajectory t = straight_track(30, 1.0);
  const AnalysisParams params;
  const auto samples = enrich_kinematics(t, kMpp, kFps, params);
  const double mid = interpolate_speed_at(samples, (10.0 + 0.5) / kFps);
  CHECK(mid == doctest::Approx(9.03312));
}

TEST_CASE("kinematics CSV carries one row per sample")
{
  const Trajectory t = straight_track(3, 1.0);
  const AnalysisParams params;
  std::map<long, std::vector<KinematicSample>> series;
  series[t.id] = enrich_kinematics(t, kMpp, kFps, params);
  std::ostringstream out;
  emit_kinematics_csv(out, series);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "id,frame_num,time_s,displacement_px,speed_ms,speed_kmh,accel_ms2");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 3);
}
