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

#ifndef NADIR__MANEUVERS_HPP_
#define NADIR__MANEUVERS_HPP_

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nadir/core.hpp"
#include "nadir/kinematics.hpp"
#include "nadir/scene.hpp"

namespace nadir
{

enum class Movement { through = 0, left = 1, right = 2, u_turn = 3 };

const char * to_string(Movement m);

struct TurningMovement
{
  long id = 0;
  VehicleClass cls = VehicleClass::car;
  std::string entry_approach;
  std::string exit_approach;
  Movement movement = Movement::through;
  // Signed heading change, degrees; negative turns left in the y-down
  // image frame (east heading to north heading is -90).
  double heading_change_deg = 0.0;
  double entry_time_s = 0.0;
};

/// Direction of travel over the first points of a track, least-squares
/// fitted. Empty for stationary or too-short tracks.
std::optional<Vec2> fit_heading(
  const std::vector<TrackPoint> & points, size_t count, bool from_end);

/// Classify a track against the scene approaches. Requires at least
/// params.min_maneuver_points points, an entry and an exit approach hit,
/// and a resolvable heading at both ends. through below params.through_deg
/// of heading change, u-turn above params.uturn_deg (or entry == exit),
/// otherwise left/right by the sign of the change.
std::optional<TurningMovement> classify_turn(const Trajectory & traj, const SceneConfig & scene);

struct TurningCountTable
{
  // approach -> counts indexed by Movement order: through, left, right, u_turn.
  std::map<std::string, std::array<long, 4>> counts;
  long classified = 0;
  long unclassified = 0;
};

TurningCountTable count_turns(const std::vector<Trajectory> & trajectories, const SceneConfig & scene);

/// Same table from movements that were already classified; unclassified is
/// the difference against total_trajectories when it is nonnegative.
TurningCountTable count_turns(
  const std::vector<TurningMovement> & movements, const SceneConfig & scene,
  long total_trajectories = -1);

/// Columns: approach,through,left,right,u_turn; one row per entry approach.
void emit_turning_csv(std::ostream & out, const TurningCountTable & table);

/// One row per classified vehicle:
/// id,class,entry,exit,movement,heading_change_deg,entry_time_s.
void emit_movements_csv(std::ostream & out, const std::vector<TurningMovement> & movements);

struct LateralSample
{
  long frame_num = 0;
  double time_s = 0.0;
  double longitudinal_px = 0.0;
  double lateral_px = 0.0;
  std::optional<int> lane_index;  // 1-based from the first listed boundary
};

/// Lateral coordinate and lane assignment of every point against a lane
/// model. Points on a shared boundary go to the lane whose centerline is
/// nearer (ties to the lower index); points outside all bands carry no
/// lane index.
std::vector<LateralSample> lateral_offset_series(const Trajectory & traj, const LaneModel & model);

/// Lane index of a single pixel position under the same rules, 1-based.
std::optional<int> lane_index_at(const LaneModel & model, const Vec2 & center);

struct LaneChangeEvent
{
  long id = 0;
  double time_s = 0.0;  // interpolated instant the boundary was crossed
  int from_lane = 0;
  int to_lane = 0;  // always adjacent to from_lane
  double spot_speed_kmh = 0.0;
};

/// Debounced lane-change detection. A crossing counts once the track
/// penetrates the new band beyond the hysteresis (params.hysteresis_px, or
/// half the local lane width when zero) and the debounced lane persists
/// for params.dwell_frames frames; moves across several lanes decompose
/// into per-boundary events. Oscillation inside the hysteresis margin or
/// excursions that retreat within the dwell produce nothing.
std::vector<LaneChangeEvent> detect_lane_changes(
  const Trajectory & traj, const std::vector<KinematicSample> & samples, const LaneModel & model,
  const AnalysisParams & params);

/// Columns: id,time_s,from_lane,to_lane,spot_speed_kmh.
void emit_lane_change_csv(std::ostream & out, const std::vector<LaneChangeEvent> & events);

struct TsdPoint
{
  long id = 0;
  double time_s = 0.0;
  double distance_m = 0.0;
};

/// Distance along the scene corridor in the given travel direction,
/// measured from the upstream corridor line, for every track point.
std::vector<TsdPoint> time_space_series(
  const Trajectory & traj, const SceneConfig & scene, TravelDir dir);

/// Columns: id,time_s,distance_m.
void emit_tsd_csv(std::ostream & out, const std::vector<TsdPoint> & points);

}  // namespace nadir

#endif  // NADIR__MANEUVERS_HPP_
