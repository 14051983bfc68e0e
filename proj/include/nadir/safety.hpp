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

#ifndef NADIR__SAFETY_HPP_
#define NADIR__SAFETY_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nadir/core.hpp"
#include "nadir/geometry.hpp"
#include "nadir/kinematics.hpp"
#include "nadir/scene.hpp"

namespace nadir
{

/// One car-following observation: two vehicles in the same lane at the same
/// instant, positions measured along the travel direction so the leader is
/// always ahead of the follower.
struct CarFollowingState
{
  double leader_position_m = 0.0;
  double follower_position_m = 0.0;
  double leader_length_m = 0.0;
  double leader_speed_ms = 0.0;
  double follower_speed_ms = 0.0;
};

struct TtcValue
{
  double ttc_ms = 0.0;
  /// True when the net gap (bumper to bumper) is not positive; the time is
  /// clamped to zero in that case.
  bool overlap = false;
};

/// Time-to-collision for one car-following state, in milliseconds. Empty
/// when the follower is not closing on the leader (TTC is undefined, not
/// infinite, for diverging pairs).
std::optional<TtcValue> compute_ttc(const CarFollowingState & state);

/// Post-encroachment time between two arrivals at the same location, in
/// milliseconds. The first vehicle must arrive no later than the second.
double compute_pet_ms(double first_arrival_s, double second_arrival_s);

/// Minimum stopping distance that still avoids a collision with a suddenly
/// stopped obstacle: reaction travel plus braking travel.
double min_warning_distance_m(double speed_ms, double react_time_s, double decel_max_ms2);

enum class ConflictKind : std::uint8_t { ttc = 0, pet = 1 };

std::string to_string(ConflictKind kind);

/// One surrogate-safety event. For TTC events id_a is the leader, id_b the
/// follower, and the series holds one value per frame of the event. For PET
/// events id_a crossed first, id_b second, and the series holds the single
/// encroachment time.
struct ConflictEvent
{
  long conflict_id = 0;
  ConflictKind kind = ConflictKind::ttc;
  long id_a = 0;
  long id_b = 0;
  double t_start_s = 0.0;
  double t_end_s = 0.0;
  std::vector<double> series_ms;
  double min_ms = 0.0;
  long duration_frames = 0;
  Vec2 location_px;
  Vec2 location_m;
  /// Any frame of the event had a non-positive net gap.
  bool overlap = false;
  /// At the minimum-measure frame the gap was below the warning distance
  /// for the follower speed.
  bool within_warning = false;
  /// Standard deviation of the series is below the configured epsilon;
  /// flags suspiciously flat series such as parallel platooning.
  bool low_variance = false;

  double mean_ms() const;
};

/// One row of the per-frame car-following status table: the follower of a
/// same-lane pair, with the gap and closing data behind its TTC value.
struct SafetyStatus
{
  long id = 0;
  long leader_id = 0;
  long frame_num = 0;
  double time_s = 0.0;
  double speed_kmh = 0.0;
  double accel_ms2 = 0.0;
  double gap_m = 0.0;
  double speed_diff_kmh = 0.0;
  bool collision = false;
  std::optional<long> conflict_id;
  std::optional<double> ttc_ms;
};

struct SafetyResult
{
  std::vector<ConflictEvent> events;
  std::vector<SafetyStatus> status;
};

/// Full surrogate-safety extraction over enriched trajectories. TTC events
/// come from consecutive same-lane pairs evaluated every frame and merged
/// over contiguous frame runs; PET events come from ordered crossings of the
/// scene's sections and conflict-zone entries. Events are numbered in order
/// of start time, then second vehicle id, then kind.
SafetyResult extract_conflicts(
  const std::vector<Trajectory> & trajectories,
  const std::map<long, std::vector<KinematicSample>> & kinematics, const SceneConfig & scene);

/// Aggregated cell of the conflict heatmap. Only occupied cells are kept;
/// the mean is a mean over the contained events' own series means.
struct HeatmapCell
{
  int col = 0;
  int row = 0;
  long count = 0;
  double mean_ms = 0.0;
  int level = 1;
};

/// Severity level for a mean measure under ascending band edges: values
/// below the first edge map to level 1, values at or above the last edge to
/// the highest level. Bands are half open, closed on the left.
int heat_level(double mean_ms, const std::vector<double> & band_edges_ms);

std::vector<HeatmapCell> conflict_heatmap(
  const std::vector<ConflictEvent> & events, const SceneConfig & scene);

struct PetSummary
{
  long total = 0;
  long below = 0;
  double percent = 0.0;
  /// Percentage with the fraction truncated to two decimals, the way the
  /// figure is quoted in reports.
  std::string percent_text;
};

PetSummary summarize_pet(const std::vector<ConflictEvent> & events, double cutoff_ms = 1000.0);

void emit_conflicts_csv(std::ostream & out, const std::vector<ConflictEvent> & events);
void emit_safety_status_csv(std::ostream & out, const std::vector<SafetyStatus> & rows);
void emit_heatmap_csv(std::ostream & out, const std::vector<HeatmapCell> & cells);

}  // namespace nadir

#endif  // NADIR__SAFETY_HPP_
