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

#ifndef NADIR__KINEMATICS_HPP_
#define NADIR__KINEMATICS_HPP_

#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "nadir/core.hpp"
#include "nadir/scene.hpp"

namespace nadir
{

/// Motion state of one track point. Speeds are displacement over the
/// actual frame span ending at this point; the first sample of a track is
/// pinned to zero because it has no predecessor.
struct KinematicSample
{
  long frame_num = 0;
  double time_s = 0.0;
  double displacement_px = 0.0;
  double speed_ms = 0.0;
  double speed_kmh = 0.0;
  double accel_ms2 = 0.0;
};

/// Speed in km/h between two points of the same track, using the actual
/// frame gap. Same-frame input is an error.
double speed_between(const TrackPoint & a, const TrackPoint & b, double meters_per_px, double fps);

/// Per-point speeds and accelerations for one track. Acceleration is a
/// central difference of speed over params.accel_window frames (window 1
/// degrades to the per-frame backward difference); the window never
/// reaches the synthetic zero-speed first sample. Tracks shorter than
/// params.min_kinematics_points yield an empty series.
std::vector<KinematicSample> enrich_kinematics(
  const Trajectory & traj, double meters_per_px, double fps, const AnalysisParams & params);

/// Mean of the measured speeds, km/h. The synthetic leading zero of a
/// multi-sample series is excluded so a constant-speed track averages to
/// exactly that speed.
double trajectory_mean_speed(const std::vector<KinematicSample> & samples);

struct CorridorTransit
{
  double entry_s = 0.0;
  double exit_s = 0.0;
  double transit_s = 0.0;
  double speed_kmh = 0.0;
};

/// Corridor transit speed: scene corridor length over the time between the
/// interpolated crossings of the two corridor lines. Empty when the track
/// does not cross both lines.
std::optional<CorridorTransit> corridor_speed(const Trajectory & traj, const SceneConfig & scene);

/// Speed at an arbitrary time, linearly interpolated between samples and
/// clamped to the series span, km/h.
double interpolate_speed_at(const std::vector<KinematicSample> & samples, double time_s);

/// One row per sample, grouped by vehicle id:
/// id,frame_num,time_s,displacement_px,speed_ms,speed_kmh,accel_ms2.
void emit_kinematics_csv(
  std::ostream & out, const std::map<long, std::vector<KinematicSample>> & series);

}  // namespace nadir

#endif  // NADIR__KINEMATICS_HPP_
