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

#include "nadir/maneuvers.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "nadir/error.hpp"
#include "nadir/format.hpp"

namespace nadir
{

const char * to_string(Movement m)
{
  switch (m) {
    case Movement::through:
      return "through";
    case Movement::left:
      return "left";
    case Movement::right:
      return "right";
    case Movement::u_turn:
      return "u_turn";
  }
  return "through";
}

std::optional<Vec2> fit_heading(
  const std::vector<TrackPoint> & points, size_t count, bool from_end)
{
  const size_t n = std::min(count, points.size());
  if (n < 2) return std::nullopt;
  const size_t begin = from_end ? points.size() - n : 0;

  // Least-squares slope of x and y against time: the mean velocity vector
  // of the window, robust to per-frame jitter.
  double mean_t = 0.0;
  Vec2 mean_p;
  for (size_t i = begin; i < begin + n; ++i) {
    mean_t += points[i].time_s;
    mean_p = mean_p + points[i].center;
  }
  mean_t /= static_cast<double>(n);
  mean_p = mean_p * (1.0 / static_cast<double>(n));

  double stt = 0.0;
  Vec2 stp;
  for (size_t i = begin; i < begin + n; ++i) {
    const double dt = points[i].time_s - mean_t;
    stt += dt * dt;
    stp = stp + (points[i].center - mean_p) * dt;
  }
  if (stt <= 0.0) return std::nullopt;
  const Vec2 v = stp * (1.0 / stt);
  const double norm = v.norm();
  if (norm < 1e-9) return std::nullopt;
  return v * (1.0 / norm);
}

namespace
{

std::optional<std::string> approach_hit(
  const SceneConfig & scene, const std::vector<TrackPoint> & points, bool from_end)
{
  const long n = static_cast<long>(points.size());
  for (long k = 0; k < n; ++k) {
    const TrackPoint & p = points[from_end ? n - 1 - k : k];
    for (const auto & [name, region] : scene.approaches) {
      if (polygon_contains(region.polygon, p.center)) return name;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<TurningMovement> classify_turn(const Trajectory & traj, const SceneConfig & scene)
{
  const AnalysisParams & params = scene.params;
  if (static_cast<int>(traj.points.size()) < params.min_maneuver_points) return std::nullopt;
  if (scene.approaches.empty()) return std::nullopt;

  const auto entry = approach_hit(scene, traj.points, false);
  const auto exit = approach_hit(scene, traj.points, true);
  if (!entry || !exit) return std::nullopt;

  const size_t fit_n = static_cast<size_t>(std::max(params.heading_fit_points, 2));
  const auto entry_heading = fit_heading(traj.points, fit_n, false);
  const auto exit_heading = fit_heading(traj.points, fit_n, true);
  if (!entry_heading || !exit_heading) return std::nullopt;

  TurningMovement tm;
  tm.id = traj.id;
  tm.cls = traj.cls;
  tm.entry_approach = *entry;
  tm.exit_approach = *exit;
  tm.entry_time_s = traj.points.front().time_s;
  tm.heading_change_deg = signed_angle_deg(*entry_heading, *exit_heading);

  const double change = std::abs(tm.heading_change_deg);
  if (*entry == *exit || change > params.uturn_deg) {
    tm.movement = Movement::u_turn;
  } else if (change < params.through_deg) {
    tm.movement = Movement::through;
  } else if (tm.heading_change_deg < 0.0) {
    tm.movement = Movement::left;
  } else {
    tm.movement = Movement::right;
  }
  return tm;
}

TurningCountTable count_turns(const std::vector<Trajectory> & trajectories, const SceneConfig & scene)
{
  TurningCountTable table;
  for (const auto & [name, region] : scene.approaches) {
    table.counts[name] = {0, 0, 0, 0};
  }
  for (const Trajectory & traj : trajectories) {
    const auto tm = classify_turn(traj, scene);
    if (!tm) {
      table.unclassified += 1;
      continue;
    }
    table.counts[tm->entry_approach][static_cast<size_t>(tm->movement)] += 1;
    table.classified += 1;
  }
  return table;
}

TurningCountTable count_turns(
  const std::vector<TurningMovement> & movements, const SceneConfig & scene,
  long total_trajectories)
{
  TurningCountTable table;
  for (const auto & [name, region] : scene.approaches) {
    (void)region;
    table.counts[name] = {0, 0, 0, 0};
  }
  for (const TurningMovement & tm : movements) {
    table.counts[tm.entry_approach][static_cast<size_t>(tm.movement)] += 1;
    table.classified += 1;
  }
  if (total_trajectories >= table.classified) {
    table.unclassified = total_trajectories - table.classified;
  }
  return table;
}

void emit_movements_csv(std::ostream & out, const std::vector<TurningMovement> & movements)
{
  out << "id,class,entry,exit,movement,heading_change_deg,entry_time_s\n";
  for (const TurningMovement & tm : movements) {
    out << tm.id << ',' << to_string(tm.cls) << ',' << tm.entry_approach << ','
        << tm.exit_approach << ',' << to_string(tm.movement) << ','
        << format_double(tm.heading_change_deg) << ',' << format_double(tm.entry_time_s) << '\n';
  }
}

void emit_turning_csv(std::ostream & out, const TurningCountTable & table)
{
  out << "approach,through,left,right,u_turn\n";
  for (const auto & [name, row] : table.counts) {
    out << name;
    for (const long n : row) out << ',' << n;
    out << '\n';
  }
}

namespace
{

/// Boundary lateral values at a given longitudinal position, normalized so
/// they increase with index. Returns the values and whether the listed
/// order was already increasing.
std::vector<double> boundary_values_at(
  const LaneModel & model, double longitudinal, bool & increasing)
{
  std::vector<double> values;
  values.reserve(model.boundaries.size());
  for (const Polyline & b : model.boundaries) {
    values.push_back(lateral_at(b, model.axis, longitudinal));
  }
  increasing = values.front() <= values.back();
  if (!increasing) std::reverse(values.begin(), values.end());
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] <= values[i - 1]) {
      throw_config("lane model boundaries cross or touch at longitudinal " +
                   format_double(longitudinal));
    }
  }
  return values;
}

int lane_from_normalized_band(size_t band_index, bool increasing, int lane_count)
{
  // band_index is 0-based within the increasing ordering.
  const int lane_increasing = static_cast<int>(band_index) + 1;
  return increasing ? lane_increasing : lane_count - lane_increasing + 1;
}

std::optional<int> lane_of_lateral(const LaneModel & model, double longitudinal, double lateral)
{
  if (model.lane_count() < 1) return std::nullopt;
  bool increasing = true;
  const std::vector<double> bounds = boundary_values_at(model, longitudinal, increasing);
  const int lanes = model.lane_count();
  constexpr double kOnBoundary = 1e-9;

  if (lateral < bounds.front() - kOnBoundary || lateral > bounds.back() + kOnBoundary) {
    return std::nullopt;
  }
  for (size_t i = 0; i + 1 < bounds.size(); ++i) {
    const bool on_upper = std::abs(lateral - bounds[i + 1]) <= kOnBoundary;
    if (on_upper && i + 2 < bounds.size()) {
      // Shared boundary: pick the nearer centerline, ties to lower index.
      const double center_lo = (bounds[i] + bounds[i + 1]) / 2.0;
      const double center_hi = (bounds[i + 1] + bounds[i + 2]) / 2.0;
      const double d_lo = std::abs(lateral - center_lo);
      const double d_hi = std::abs(lateral - center_hi);
      size_t band = (d_hi < d_lo) ? i + 1 : i;
      const int lane_a = lane_from_normalized_band(i, increasing, lanes);
      const int lane_b = lane_from_normalized_band(i + 1, increasing, lanes);
      if (d_hi == d_lo) band = (std::min(lane_a, lane_b) == lane_a) ? i : i + 1;
      return lane_from_normalized_band(band, increasing, lanes);
    }
    if (lateral <= bounds[i + 1] + kOnBoundary && lateral >= bounds[i] - kOnBoundary) {
      return lane_from_normalized_band(i, increasing, lanes);
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<LateralSample> lateral_offset_series(const Trajectory & traj, const LaneModel & model)
{
  if (model.boundaries.size() < 2) throw_config("lane model needs at least two boundaries");
  std::vector<LateralSample> out;
  out.reserve(traj.points.size());
  for (const TrackPoint & p : traj.points) {
    LateralSample s;
    s.frame_num = p.frame_num;
    s.time_s = p.time_s;
    s.longitudinal_px = longitudinal_of(p.center, model.axis);
    s.lateral_px = lateral_of(p.center, model.axis);
    s.lane_index = lane_of_lateral(model, s.longitudinal_px, s.lateral_px);
    out.push_back(s);
  }
  return out;
}

std::optional<int> lane_index_at(const LaneModel & model, const Vec2 & center)
{
  if (model.boundaries.size() < 2) throw_config("lane model needs at least two boundaries");
  const double longitudinal = longitudinal_of(center, model.axis);
  const double lateral = lateral_of(center, model.axis);
  return lane_of_lateral(model, longitudinal, lateral);
}

namespace
{

struct DebouncedSegment
{
  int lane = 0;
  size_t begin = 0;  // index into the lateral series
  size_t end = 0;    // inclusive
};

/// Lateral value of one boundary at the longitudinal position of sample i.
double boundary_at_sample(const LaneModel & model, const LateralSample & s, int boundary_index)
{
  return lateral_at(model.boundaries[static_cast<size_t>(boundary_index)], model.axis,
                    s.longitudinal_px);
}

double local_lane_width(const LaneModel & model, const LateralSample & s, int lane)
{
  const double a = boundary_at_sample(model, s, lane - 1);
  const double b = boundary_at_sample(model, s, lane);
  return std::abs(b - a);
}

/// Interpolated crossing time of the boundary between from_lane and
/// to_lane, searching the raw series window [lo, hi] for the last sign
/// change. Falls back to the window start when the series only touches
/// the boundary.
std::pair<double, bool> crossing_time(
  const LaneModel & model, const std::vector<LateralSample> & series, size_t lo, size_t hi,
  int boundary_index)
{
  double time = series[lo].time_s;
  bool found = false;
  for (size_t i = lo + 1; i <= hi; ++i) {
    const double a =
      series[i - 1].lateral_px - boundary_at_sample(model, series[i - 1], boundary_index);
    const double b = series[i].lateral_px - boundary_at_sample(model, series[i], boundary_index);
    if (a == 0.0 && b == 0.0) continue;
    if ((a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0)) {
      const double t = a / (a - b);
      time = series[i - 1].time_s + t * (series[i].time_s - series[i - 1].time_s);
      found = true;
    }
  }
  return {time, found};
}

}  // namespace

std::vector<LaneChangeEvent> detect_lane_changes(
  const Trajectory & traj, const std::vector<KinematicSample> & samples, const LaneModel & model,
  const AnalysisParams & params)
{
  if (static_cast<int>(traj.points.size()) < params.min_maneuver_points) return {};
  const std::vector<LateralSample> series = lateral_offset_series(traj, model);

  // Debounce: switch lanes only after penetrating the new band beyond the
  // hysteresis margin.
  std::vector<int> debounced(series.size(), 0);
  int current = 0;
  size_t first_laned = series.size();
  for (size_t i = 0; i < series.size(); ++i) {
    if (series[i].lane_index) {
      current = *series[i].lane_index;
      first_laned = i;
      break;
    }
  }
  if (first_laned == series.size()) return {};

  for (size_t i = 0; i < series.size(); ++i) {
    if (i < first_laned || !series[i].lane_index) {
      debounced[i] = current;
      continue;
    }
    const int lane = *series[i].lane_index;
    if (lane != current) {
      // Boundary between current and the step toward lane.
      const int step = (lane > current) ? 1 : -1;
      const int target = current + step;
      const int boundary_index = std::min(current, target);
      const double b = boundary_at_sample(model, series[i], boundary_index);
      const double hysteresis = params.hysteresis_px > 0.0
                                  ? params.hysteresis_px
                                  : 0.5 * local_lane_width(model, series[i], target);
      if (std::abs(series[i].lateral_px - b) > hysteresis) {
        // Deep multi-lane moves land directly on the sample's lane.
        const double b_last = boundary_at_sample(model, series[i], std::min(lane - step, lane));
        const double hyst_last = params.hysteresis_px > 0.0
                                   ? params.hysteresis_px
                                   : 0.5 * local_lane_width(model, series[i], lane);
        if (lane == target || std::abs(series[i].lateral_px - b_last) > hyst_last) {
          current = lane;
        } else {
          current = target;
        }
      }
    }
    debounced[i] = current;
  }

  std::vector<DebouncedSegment> segments;
  for (size_t i = first_laned; i < series.size(); ++i) {
    if (segments.empty() || segments.back().lane != debounced[i]) {
      segments.push_back({debounced[i], i, i});
    } else {
      segments.back().end = i;
    }
  }

  const auto segment_frames = [&](const DebouncedSegment & seg) {
    return series[seg.end].frame_num - series[seg.begin].frame_num + 1;
  };

  std::vector<LaneChangeEvent> events;
  const DebouncedSegment * anchor = nullptr;
  for (const DebouncedSegment & seg : segments) {
    if (segment_frames(seg) < params.dwell_frames) continue;
    if (anchor == nullptr) {
      anchor = &seg;
      continue;
    }
    if (seg.lane != anchor->lane) {
      const int step = (seg.lane > anchor->lane) ? 1 : -1;
      // The raw series crosses the boundary before the debounced lane flips,
      // so search from the start of the departed segment and keep the last
      // crossing ahead of the confirmed switch.
      const size_t window_lo = anchor->begin;
      const size_t window_hi = seg.begin;
      for (int from = anchor->lane; from != seg.lane; from += step) {
        const int to = from + step;
        const int boundary_index = std::min(from, to);
        const auto [t_cross, found] =
          crossing_time(model, series, window_lo, window_hi, boundary_index);
        LaneChangeEvent ev;
        ev.id = traj.id;
        ev.time_s = found ? t_cross : series[window_hi].time_s;
        ev.from_lane = from;
        ev.to_lane = to;
        ev.spot_speed_kmh = samples.empty() ? 0.0 : interpolate_speed_at(samples, ev.time_s);
        events.push_back(ev);
      }
    }
    anchor = &seg;
  }
  return events;
}

void emit_lane_change_csv(std::ostream & out, const std::vector<LaneChangeEvent> & events)
{
  out << "id,time_s,from_lane,to_lane,spot_speed_kmh\n";
  for (const LaneChangeEvent & ev : events) {
    out << ev.id << ',' << format_double(ev.time_s) << ',' << ev.from_lane << ',' << ev.to_lane
        << ',' << format_double(ev.spot_speed_kmh) << '\n';
  }
}

std::vector<TsdPoint> time_space_series(
  const Trajectory & traj, const SceneConfig & scene, TravelDir dir)
{
  const Corridor & c = scene.corridor;
  if (axis_of(dir) != c.axis) {
    throw_config("time_space_series: travel direction does not match the corridor axis");
  }
  const double mpp = scene.meters_per_px();
  const bool forward = (dir == TravelDir::east || dir == TravelDir::south);
  std::vector<TsdPoint> out;
  out.reserve(traj.points.size());
  for (const TrackPoint & p : traj.points) {
    const double l = longitudinal_of(p.center, c.axis);
    const double d_px = forward ? l - c.min_px : c.max_px - l;
    out.push_back({traj.id, p.time_s, d_px * mpp});
  }
  return out;
}

void emit_tsd_csv(std::ostream & out, const std::vector<TsdPoint> & points)
{
  out << "id,time_s,distance_m\n";
  for (const TsdPoint & p : points) {
    out << p.id << ',' << format_double(p.time_s) << ',' << format_double(p.distance_m) << '\n';
  }
}

}  // namespace nadir
