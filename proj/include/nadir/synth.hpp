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

#ifndef NADIR__SYNTH_HPP_
#define NADIR__SYNTH_HPP_

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nadir/core.hpp"
#include "nadir/geometry.hpp"
#include "nadir/kinematics.hpp"
#include "nadir/safety.hpp"
#include "nadir/scene.hpp"

namespace nadir
{

/// Piecewise-linear function of time. Values are clamped to the end knots
/// outside the knot range; an empty profile is the constant zero.
struct PlProfile
{
  std::vector<double> t;
  std::vector<double> v;

  bool empty() const { return t.empty(); }
  double at(double time) const;
  /// Slope at a time; knots take the slope of the segment to their right.
  double rate(double time) const;
  /// Exact integral over [t0, t1].
  double integral(double t0, double t1) const;
};

/// One scripted vehicle: a path in pixels, a ground-speed profile along it,
/// and an optional perpendicular offset profile. The offset is applied
/// along the left normal of the travel direction (positive is downward on
/// screen for eastbound travel).
struct SynthVehicle
{
  long id = 0;
  VehicleClass cls = VehicleClass::car;
  Polyline path;
  PlProfile speed_ms;
  PlProfile lateral_px;
  double t_begin_s = 0.0;
  double t_end_s = 0.0;
  double box_w_px = 36.0;
  double box_h_px = 18.0;
};

/// One camera disturbance: every frame after `frame` is shifted by (dx, dy)
/// pixels and rotated about the image center, on top of earlier steps.
struct DeflectionSpec
{
  long frame = 0;
  double dx = 0.0;
  double dy = 0.0;
  double rot_deg = 0.0;
};

/// What to do when a scripted box leaves the image before any disturbance
/// is applied: refuse the scenario, end the track there, or emit anyway.
enum class OutOfImage { error, truncate, keep };

struct Scenario
{
  std::string name;
  SceneConfig scene;
  std::vector<SynthVehicle> vehicles;
  std::vector<DeflectionSpec> deflections;
  double jitter_px = 0.0;
  unsigned seed = 1;
  OutOfImage out_of_image = OutOfImage::error;
};

/// Ground truth for one emitted frame of one vehicle: the undisturbed,
/// unjittered center and the exact motion state.
struct TruthPoint
{
  long frame_num = 0;
  long id = 0;
  Vec2 center;
  double speed_ms = 0.0;
  double accel_ms2 = 0.0;
  std::optional<int> lane;
};

struct SynthResult
{
  std::vector<DetectionRecord> records;
  std::vector<TruthPoint> truth;
  std::vector<DeflectionSpec> deflections;
};

/// Renders a scenario to detection records plus ground truth. Records carry
/// the scripted disturbances and jitter; truth does not.
SynthResult generate(const Scenario & scenario);

/// Truth CSV: point rows with the exact state, deflection rows with the
/// step offsets in the center columns.
void write_truth_csv(std::ostream & out, const SynthResult & result);

/// Built-in scenario by name; throws a config error for unknown names.
Scenario make_preset(const std::string & name);
std::vector<std::string> preset_names();

/// Small random scene for oracle comparisons: up to ten vehicles on a
/// three-lane road with one crossing section, fully determined by the seed.
Scenario random_scene(unsigned seed);

Scenario scenario_from_json_text(const std::string & text, const std::string & source);
Scenario scenario_from_json_file(const std::string & path);

/// Reference conflict extraction written for clarity, not speed: evaluates
/// every vehicle pair at every frame and pairs every crossing combination.
/// Used to cross-check the production extractor.
struct BruteConflict
{
  ConflictKind kind = ConflictKind::ttc;
  long id_a = 0;
  long id_b = 0;
  long frame_start = 0;
  double min_ms = 0.0;
};

std::vector<BruteConflict> brute_force_conflicts(
  const std::vector<Trajectory> & trajectories,
  const std::map<long, std::vector<KinematicSample>> & kinematics, const SceneConfig & scene);

}  // namespace nadir

#endif  // NADIR__SYNTH_HPP_
