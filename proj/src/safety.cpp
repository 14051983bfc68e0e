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

#include "nadir/safety.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <tuple>
#include <utility>

#include "nadir/error.hpp"
#include "nadir/format.hpp"
#include "nadir/maneuvers.hpp"

namespace nadir
{

std::optional<TtcValue> compute_ttc(const CarFollowingState & state)
{
  const double gap =
    state.leader_position_m - state.follower_position_m - state.leader_length_m;
  if (gap <= 0.0) return TtcValue{0.0, true};
  const double closing = state.follower_speed_ms - state.leader_speed_ms;
  if (closing <= 0.0) return std::nullopt;
  return TtcValue{gap / closing * 1000.0, false};
}

double compute_pet_ms(double first_arrival_s, double second_arrival_s)
{
  if (!(second_arrival_s >= first_arrival_s)) {
    throw_invalid("encroachment interval is negative");
  }
  return (second_arrival_s - first_arrival_s) * 1000.0;
}

double min_warning_distance_m(double speed_ms, double react_time_s, double decel_max_ms2)
{
  if (decel_max_ms2 <= 0.0) throw_invalid("deceleration bound must be positive");
  return speed_ms * react_time_s + speed_ms * speed_ms / (2.0 * decel_max_ms2);
}

std::string to_string(ConflictKind kind)
{
  return kind == ConflictKind::ttc ? "ttc" : "pet";
}

double ConflictEvent::mean_ms() const
{
  if (series_ms.empty()) return 0.0;
  double sum = 0.0;
  for (double v : series_ms) sum += v;
  return sum / static_cast<double>(series_ms.size());
}

namespace
{

struct FollowRow
{
  long frame_num = 0;
  double time_s = 0.0;
  long follower_id = 0;
  long leader_id = 0;
  double gap_m = 0.0;
  double follower_speed_ms = 0.0;
  double leader_speed_ms = 0.0;
  double follower_accel_ms2 = 0.0;
  Vec2 follower_center;
  std::optional<TtcValue> ttc;
};

struct TrackIndex
{
  const Trajectory * traj = nullptr;
  const std::vector<KinematicSample> * kin = nullptr;
  std::map<long, size_t> point_at_frame;
  std::map<long, size_t> sample_at_frame;
};

double population_stddev(const std::vector<double> & values)
{
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return std::sqrt(var / static_cast<double>(values.size()));
}

double direction_sign(TravelDir travel)
{
  return (travel == TravelDir::east || travel == TravelDir::south) ? 1.0 : -1.0;
}

/// All same-lane leader/follower observations, frame by frame. Within a
/// frame, pairs come out in lane-model name order, then lane order, then
/// front-to-back position, which keeps every downstream artifact stable.
std::vector<FollowRow> collect_car_following(
  const std::vector<TrackIndex> & tracks, const SceneConfig & scene)
{
  const AnalysisParams & params = scene.params;
  const double mpp = scene.meters_per_px();
  std::map<long, std::vector<size_t>> frame_tracks;
  for (size_t i = 0; i < tracks.size(); ++i) {
    for (const auto & [frame, _] : tracks[i].point_at_frame) frame_tracks[frame].push_back(i);
  }

  struct Entry
  {
    size_t track = 0;
    double s_px = 0.0;
    Vec2 center;
  };

  std::vector<FollowRow> rows;
  for (const auto & [frame, present] : frame_tracks) {
    for (const auto & [model_name, model] : scene.lane_models) {
      const double sign = direction_sign(model.travel);
      std::map<int, std::vector<Entry>> lanes;
      for (size_t t : present) {
        const TrackPoint & p = tracks[t].traj->points[tracks[t].point_at_frame.at(frame)];
        const std::optional<int> lane = lane_index_at(model, p.center);
        if (!lane) continue;
        lanes[*lane].push_back({t, sign * longitudinal_of(p.center, model.axis), p.center});
      }
      for (auto & [lane, entries] : lanes) {
        (void)lane;
        if (entries.size() < 2) continue;
        std::sort(entries.begin(), entries.end(), [](const Entry & a, const Entry & b) {
          if (a.s_px != b.s_px) return a.s_px > b.s_px;
          return a.track < b.track;
        });
        for (size_t k = 0; k + 1 < entries.size(); ++k) {
          const Entry & lead = entries[k];
          const Entry & follow = entries[k + 1];
          const TrackIndex & lt = tracks[lead.track];
          const TrackIndex & ft = tracks[follow.track];
          const auto ls = lt.sample_at_frame.find(frame);
          const auto fs = ft.sample_at_frame.find(frame);
          if (ls == lt.sample_at_frame.end() || fs == ft.sample_at_frame.end()) continue;
          const KinematicSample & lead_kin = (*lt.kin)[ls->second];
          const KinematicSample & follow_kin = (*ft.kin)[fs->second];

          double leader_length = params.vehicle_length_m(lt.traj->cls);
          if (params.vehicle_length_from_bbox) {
            const BBox & box = lt.traj->points[lt.point_at_frame.at(frame)].bbox;
            leader_length = (model.axis == Axis::ew ? box.width() : box.height()) * mpp;
          }

          CarFollowingState state;
          state.leader_position_m = lead.s_px * mpp;
          state.follower_position_m = follow.s_px * mpp;
          state.leader_length_m = leader_length;
          state.leader_speed_ms = lead_kin.speed_ms;
          state.follower_speed_ms = follow_kin.speed_ms;

          FollowRow row;
          row.frame_num = frame;
          row.time_s = follow_kin.time_s;
          row.follower_id = ft.traj->id;
          row.leader_id = lt.traj->id;
          row.gap_m = state.leader_position_m - state.follower_position_m - leader_length;
          row.follower_speed_ms = follow_kin.speed_ms;
          row.leader_speed_ms = lead_kin.speed_ms;
          row.follower_accel_ms2 = follow_kin.accel_ms2;
          row.follower_center = follow.center;
          row.ttc = compute_ttc(state);
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

struct Crossing
{
  double time_s = 0.0;
  long id = 0;
};

void pair_crossings(
  std::vector<Crossing> & crossings, const Vec2 & location_px, double mpp, double threshold_ms,
  std::vector<ConflictEvent> & out)
{
  std::sort(crossings.begin(), crossings.end(), [](const Crossing & a, const Crossing & b) {
    if (a.time_s != b.time_s) return a.time_s < b.time_s;
    return a.id < b.id;
  });
  // Collapse duplicate hits of one pass (a point exactly on the line can
  // register on two adjacent trajectory segments).
  std::vector<Crossing> unique;
  for (const Crossing & c : crossings) {
    if (!unique.empty() && unique.back().id == c.id &&
        std::abs(unique.back().time_s - c.time_s) < 1e-9) {
      continue;
    }
    unique.push_back(c);
  }
  for (size_t i = 0; i + 1 < unique.size(); ++i) {
    const Crossing & first = unique[i];
    const Crossing & second = unique[i + 1];
    if (first.id == second.id) continue;
    const double pet = compute_pet_ms(first.time_s, second.time_s);
    if (pet >= threshold_ms) continue;
    ConflictEvent ev;
    ev.kind = ConflictKind::pet;
    ev.id_a = first.id;
    ev.id_b = second.id;
    ev.t_start_s = first.time_s;
    ev.t_end_s = second.time_s;
    ev.series_ms = {pet};
    ev.min_ms = pet;
    ev.duration_frames = 0;
    ev.location_px = location_px;
    ev.location_m = location_px * mpp;
    out.push_back(ev);
  }
}

Vec2 polygon_centroid(const Polygon & poly)
{
  Vec2 sum;
  for (const Vec2 & v : poly) sum = sum + v;
  return sum * (1.0 / static_cast<double>(poly.size()));
}

}  // namespace

SafetyResult extract_conflicts(
  const std::vector<Trajectory> & trajectories,
  const std::map<long, std::vector<KinematicSample>> & kinematics, const SceneConfig & scene)
{
  const AnalysisParams & params = scene.params;
  const double mpp = scene.meters_per_px();

  std::vector<TrackIndex> tracks;
  for (const Trajectory & traj : trajectories) {
    if (static_cast<long>(traj.points.size()) < params.min_maneuver_points) continue;
    const auto kin = kinematics.find(traj.id);
    if (kin == kinematics.end() || kin->second.empty()) continue;
    TrackIndex idx;
    idx.traj = &traj;
    idx.kin = &kin->second;
    for (size_t i = 0; i < traj.points.size(); ++i) {
      idx.point_at_frame[traj.points[i].frame_num] = i;
    }
    for (size_t i = 0; i < kin->second.size(); ++i) {
      idx.sample_at_frame[kin->second[i].frame_num] = i;
    }
    tracks.push_back(std::move(idx));
  }

  const std::vector<FollowRow> rows = collect_car_following(tracks, scene);

  // Contiguous runs of sub-threshold TTC per ordered pair become events.
  std::map<std::pair<long, long>, std::vector<size_t>> active;
  for (size_t i = 0; i < rows.size(); ++i) {
    const FollowRow & row = rows[i];
    if (!row.ttc || row.ttc->ttc_ms >= params.ttc_threshold_ms) continue;
    active[{row.follower_id, row.leader_id}].push_back(i);
  }

  struct PendingTtc
  {
    ConflictEvent event;
    std::vector<size_t> row_indices;
  };
  std::vector<PendingTtc> ttc_events;
  for (auto & [pair, indices] : active) {
    (void)pair;
    std::sort(indices.begin(), indices.end(), [&rows](size_t a, size_t b) {
      return rows[a].frame_num < rows[b].frame_num;
    });
    size_t run_begin = 0;
    for (size_t i = 1; i <= indices.size(); ++i) {
      const bool broken =
        i == indices.size() || rows[indices[i]].frame_num != rows[indices[i - 1]].frame_num + 1;
      if (!broken) continue;
      PendingTtc pending;
      ConflictEvent & ev = pending.event;
      ev.kind = ConflictKind::ttc;
      ev.id_a = rows[indices[run_begin]].leader_id;
      ev.id_b = rows[indices[run_begin]].follower_id;
      ev.t_start_s = rows[indices[run_begin]].time_s;
      ev.t_end_s = rows[indices[i - 1]].time_s;
      size_t min_at = run_begin;
      for (size_t k = run_begin; k < i; ++k) {
        const FollowRow & row = rows[indices[k]];
        ev.series_ms.push_back(row.ttc->ttc_ms);
        ev.overlap = ev.overlap || row.ttc->overlap;
        if (row.ttc->ttc_ms < rows[indices[min_at]].ttc->ttc_ms) min_at = k;
        pending.row_indices.push_back(indices[k]);
      }
      const FollowRow & at_min = rows[indices[min_at]];
      ev.min_ms = at_min.ttc->ttc_ms;
      ev.duration_frames = static_cast<long>(i - run_begin);
      ev.location_px = at_min.follower_center;
      ev.location_m = at_min.follower_center * mpp;
      ev.within_warning =
        at_min.gap_m <
        min_warning_distance_m(at_min.follower_speed_ms, params.react_time_s, params.decel_max_ms2);
      ev.low_variance =
        ev.series_ms.size() >= 2 && population_stddev(ev.series_ms) < params.low_variance_eps_ms;
      ttc_events.push_back(std::move(pending));
      run_begin = i;
    }
  }

  std::vector<ConflictEvent> events;
  std::vector<std::vector<size_t>> event_rows;
  for (PendingTtc & pending : ttc_events) {
    events.push_back(std::move(pending.event));
    event_rows.push_back(std::move(pending.row_indices));
  }

  // Ordered crossings of each section line.
  for (const auto & [name, section] : scene.sections) {
    (void)name;
    std::vector<Crossing> crossings;
    for (const TrackIndex & t : tracks) {
      const std::vector<TrackPoint> & pts = t.traj->points;
      for (size_t i = 1; i < pts.size(); ++i) {
        const auto param = segment_intersection_param(
          pts[i - 1].center, pts[i].center, section.a, section.b);
        if (!param) continue;
        crossings.push_back(
          {pts[i - 1].time_s + *param * (pts[i].time_s - pts[i - 1].time_s), t.traj->id});
      }
    }
    const Vec2 midpoint = (section.a + section.b) * 0.5;
    pair_crossings(crossings, midpoint, mpp, params.pet_threshold_ms, events);
  }

  // First entry into each conflict zone per pass.
  for (const auto & [name, zone] : scene.conflict_zones) {
    (void)name;
    std::vector<Crossing> crossings;
    for (const TrackIndex & t : tracks) {
      const std::vector<TrackPoint> & pts = t.traj->points;
      bool was_in = pts.empty() ? false : polygon_contains(zone, pts.front().center);
      for (size_t i = 1; i < pts.size(); ++i) {
        const bool is_in = polygon_contains(zone, pts[i].center);
        if (!was_in && is_in) {
          double param = 1.0;
          bool found = false;
          for (size_t e = 0; e < zone.size(); ++e) {
            const Vec2 & a = zone[e];
            const Vec2 & b = zone[(e + 1) % zone.size()];
            const auto hit = segment_intersection_param(pts[i - 1].center, pts[i].center, a, b);
            if (hit && (!found || *hit > param)) {
              param = found ? std::max(param, *hit) : *hit;
              found = true;
            }
          }
          if (!found) param = 0.5;
          crossings.push_back(
            {pts[i - 1].time_s + param * (pts[i].time_s - pts[i - 1].time_s), t.traj->id});
        }
        was_in = is_in;
      }
    }
    pair_crossings(crossings, polygon_centroid(zone), mpp, params.pet_threshold_ms, events);
  }

  // Stable numbering across both kinds.
  std::vector<size_t> order(events.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&events](size_t a, size_t b) {
    const ConflictEvent & x = events[a];
    const ConflictEvent & y = events[b];
    return std::tie(x.t_start_s, x.id_b, x.kind, x.id_a, x.t_end_s) <
           std::tie(y.t_start_s, y.id_b, y.kind, y.id_a, y.t_end_s);
  });
  std::vector<ConflictEvent> numbered;
  numbered.reserve(events.size());
  std::map<size_t, long> event_id_of;
  for (size_t rank = 0; rank < order.size(); ++rank) {
    ConflictEvent ev = events[order[rank]];
    ev.conflict_id = static_cast<long>(rank + 1);
    event_id_of[order[rank]] = ev.conflict_id;
    numbered.push_back(std::move(ev));
  }

  // Per-frame status table; rows inside a TTC event carry its id.
  std::map<size_t, long> conflict_of_row;
  for (size_t e = 0; e < event_rows.size(); ++e) {
    for (size_t r : event_rows[e]) conflict_of_row[r] = event_id_of.at(e);
  }
  std::vector<SafetyStatus> status;
  status.reserve(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    const FollowRow & row = rows[i];
    SafetyStatus s;
    s.id = row.follower_id;
    s.leader_id = row.leader_id;
    s.frame_num = row.frame_num;
    s.time_s = row.time_s;
    s.speed_kmh = row.follower_speed_ms * 3.6;
    s.accel_ms2 = row.follower_accel_ms2;
    s.gap_m = row.gap_m;
    s.speed_diff_kmh = std::abs(row.leader_speed_ms - row.follower_speed_ms) * 3.6;
    if (row.ttc) s.ttc_ms = row.ttc->ttc_ms;
    const auto hit = conflict_of_row.find(i);
    if (hit != conflict_of_row.end()) {
      s.collision = true;
      s.conflict_id = hit->second;
    }
    status.push_back(s);
  }

  return {std::move(numbered), std::move(status)};
}

int heat_level(double mean_ms, const std::vector<double> & band_edges_ms)
{
  for (size_t i = 1; i < band_edges_ms.size(); ++i) {
    if (!(band_edges_ms[i] > band_edges_ms[i - 1])) {
      throw_config("heat band edges must be strictly increasing");
    }
  }
  int level = 1;
  for (double edge : band_edges_ms) {
    if (mean_ms >= edge) ++level;
  }
  return level;
}

std::vector<HeatmapCell> conflict_heatmap(
  const std::vector<ConflictEvent> & events, const SceneConfig & scene)
{
  const AnalysisParams & params = scene.params;
  if (params.heat_cols < 1 || params.heat_rows < 1) {
    throw_config("heatmap grid must have at least one cell");
  }
  const double cell_w = static_cast<double>(scene.image_w) / params.heat_cols;
  const double cell_h = static_cast<double>(scene.image_h) / params.heat_rows;

  struct Acc
  {
    long count = 0;
    double sum = 0.0;
  };
  std::map<std::pair<int, int>, Acc> cells;
  for (const ConflictEvent & ev : events) {
    int col = static_cast<int>(std::floor(ev.location_px.x / cell_w));
    int row = static_cast<int>(std::floor(ev.location_px.y / cell_h));
    col = std::clamp(col, 0, params.heat_cols - 1);
    row = std::clamp(row, 0, params.heat_rows - 1);
    Acc & acc = cells[{row, col}];
    ++acc.count;
    acc.sum += ev.mean_ms();
  }

  std::vector<HeatmapCell> out;
  out.reserve(cells.size());
  for (const auto & [key, acc] : cells) {
    HeatmapCell cell;
    cell.row = key.first;
    cell.col = key.second;
    cell.count = acc.count;
    cell.mean_ms = acc.sum / static_cast<double>(acc.count);
    cell.level = heat_level(cell.mean_ms, params.heat_band_ms);
    out.push_back(cell);
  }
  return out;
}

PetSummary summarize_pet(const std::vector<ConflictEvent> & events, double cutoff_ms)
{
  PetSummary summary;
  for (const ConflictEvent & ev : events) {
    if (ev.kind != ConflictKind::pet) continue;
    ++summary.total;
    if (ev.min_ms < cutoff_ms) ++summary.below;
  }
  summary.percent =
    summary.total == 0 ? 0.0
                       : 100.0 * static_cast<double>(summary.below) /
                           static_cast<double>(summary.total);
  summary.percent_text = format_truncated(summary.percent, 2);
  return summary;
}

void emit_conflicts_csv(std::ostream & out, const std::vector<ConflictEvent> & events)
{
  out << "conflict_id,kind,id_a,id_b,t_start,t_end,min_ms,duration_frames,loc_x,loc_y,"
         "overlap,within_warning,low_variance\n";
  for (const ConflictEvent & ev : events) {
    out << ev.conflict_id << ',' << to_string(ev.kind) << ',' << ev.id_a << ',' << ev.id_b << ','
        << format_double(ev.t_start_s) << ',' << format_double(ev.t_end_s) << ','
        << format_double(ev.min_ms) << ',' << ev.duration_frames << ','
        << format_double(ev.location_px.x) << ',' << format_double(ev.location_px.y) << ','
        << (ev.overlap ? "TRUE" : "FALSE") << ',' << (ev.within_warning ? "TRUE" : "FALSE") << ','
        << (ev.low_variance ? "TRUE" : "FALSE") << '\n';
  }
}

void emit_safety_status_csv(std::ostream & out, const std::vector<SafetyStatus> & rows)
{
  out << "id,speed,acc,time,distance,speed_difference,collision,collisionID,TTC\n";
  for (const SafetyStatus & row : rows) {
    out << row.id << ',' << format_double(row.speed_kmh) << ',' << format_double(row.accel_ms2)
        << ',' << format_double(row.time_s) << ',' << format_double(row.gap_m) << ','
        << format_double(row.speed_diff_kmh) << ',' << (row.collision ? "TRUE" : "FALSE") << ',';
    if (row.conflict_id) out << *row.conflict_id;
    out << ',';
    if (row.ttc_ms) out << format_double(*row.ttc_ms);
    out << '\n';
  }
}

void emit_heatmap_csv(std::ostream & out, const std::vector<HeatmapCell> & cells)
{
  out << "col,row,count,mean_ms,level\n";
  for (const HeatmapCell & cell : cells) {
    out << cell.col << ',' << cell.row << ',' << cell.count << ','
        << format_double(cell.mean_ms) << ',' << cell.level << '\n';
  }
}

}  // namespace nadir
