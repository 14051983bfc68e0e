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

#include "nadir/stabilize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "nadir/error.hpp"
#include "nadir/format.hpp"

namespace nadir
{

StabilizeParams StabilizeParams::from_params(const AnalysisParams & p)
{
  StabilizeParams s;
  s.trigger_px = p.stab_trigger_px;
  s.outlier_px = p.stab_outlier_px;
  s.min_matched = p.stab_min_matched;
  s.dissent_frac = p.stab_dissent_frac;
  return s;
}

namespace
{

struct BoundaryStat
{
  long frame = 0;  // left frame of the boundary
  double dx = 0.0;
  double dy = 0.0;
  double magnitude = 0.0;
  int n_matched = 0;
  bool candidate = false;
  std::vector<std::pair<Vec2, Vec2>> center_matches;
};

/// 1-D two-means split. Returns the decision threshold between the two
/// cluster centers, or nothing when the values do not separate.
std::optional<double> two_means_threshold(const std::vector<double> & values)
{
  if (values.size() < 2) return std::nullopt;
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  if (!(*mx > *mn)) return std::nullopt;
  double lo = *mn;
  double hi = *mx;
  for (int iter = 0; iter < 64; ++iter) {
    double sum_lo = 0.0, sum_hi = 0.0;
    int n_lo = 0, n_hi = 0;
    const double mid = (lo + hi) / 2.0;
    for (const double v : values) {
      if (v <= mid) {
        sum_lo += v;
        ++n_lo;
      } else {
        sum_hi += v;
        ++n_hi;
      }
    }
    if (n_lo == 0 || n_hi == 0) return std::nullopt;
    const double new_lo = sum_lo / n_lo;
    const double new_hi = sum_hi / n_hi;
    if (new_lo == lo && new_hi == hi) break;
    lo = new_lo;
    hi = new_hi;
  }
  return (lo + hi) / 2.0;
}

}  // namespace

std::optional<double> estimate_rotation(const std::vector<std::pair<Vec2, Vec2>> & matches)
{
  const size_t n = matches.size();
  if (n < 3) return std::nullopt;

  Vec2 mean_p, mean_q;
  for (const auto & [p, q] : matches) {
    mean_p = mean_p + p;
    mean_q = mean_q + q;
  }
  mean_p = mean_p * (1.0 / static_cast<double>(n));
  mean_q = mean_q * (1.0 / static_cast<double>(n));

  // The angle needs some spread around the centroid; collinear layouts are
  // fine (a planar rotation is observable from any two distinct points).
  double spread = 0.0;
  for (const auto & [p, q] : matches) {
    const Vec2 d = p - mean_p;
    spread += d.x * d.x + d.y * d.y;
  }
  if (!(spread > 0.0)) return std::nullopt;

  double num = 0.0, den = 0.0;
  for (const auto & [p, q] : matches) {
    const Vec2 a = p - mean_p;
    const Vec2 b = q - mean_q;
    num += cross(a, b);
    den += dot(a, b);
  }
  if (num == 0.0 && den == 0.0) return std::nullopt;
  return rad_to_deg(std::atan2(num, den));
}

std::vector<DeflectionEvent> detect_deflections(
  const std::vector<Trajectory> & trajectories, const StabilizeParams & params,
  std::vector<long> * skipped_frames)
{
  if (params.min_matched < 1) throw_invalid("detect_deflections: min_matched must be at least 1");

  // frame -> (id -> point)
  std::map<long, std::map<long, const TrackPoint *>> frames;
  for (const Trajectory & traj : trajectories) {
    for (const TrackPoint & p : traj.points) {
      frames[p.frame_num][traj.id] = &p;
    }
  }
  if (frames.size() < 2) return {};

  std::vector<BoundaryStat> stats;
  stats.reserve(frames.size() - 1);
  auto prev = frames.begin();
  for (auto it = std::next(frames.begin()); it != frames.end(); prev = it, ++it) {
    BoundaryStat stat;
    stat.frame = prev->first;
    double sum_dx = 0.0, sum_dy = 0.0;
    int moved = 0;
    for (const auto & [id, p_old] : prev->second) {
      const auto found = it->second.find(id);
      if (found == it->second.end()) continue;
      const TrackPoint * p_new = found->second;
      const double dx = p_new->bbox.xmin - p_old->bbox.xmin;
      const double dy = p_new->bbox.ymin - p_old->bbox.ymin;
      if (std::abs(dx) >= params.outlier_px || std::abs(dy) >= params.outlier_px) continue;
      sum_dx += dx;
      sum_dy += dy;
      stat.n_matched += 1;
      if (std::abs(dx) > params.trigger_px && std::abs(dy) > params.trigger_px) moved += 1;
      stat.center_matches.emplace_back(p_old->center, p_new->center);
    }
    if (stat.n_matched < params.min_matched) {
      if (skipped_frames) skipped_frames->push_back(stat.frame);
      continue;
    }
    stat.dx = sum_dx / stat.n_matched;
    stat.dy = sum_dy / stat.n_matched;
    stat.magnitude = std::hypot(stat.dx, stat.dy);
    const double required = (1.0 - params.dissent_frac) * stat.n_matched - 1e-9;
    stat.candidate = moved >= required && std::abs(stat.dx) > params.trigger_px &&
                     std::abs(stat.dy) > params.trigger_px;
    stats.push_back(std::move(stat));
  }

  const bool any_candidate =
    std::any_of(stats.begin(), stats.end(), [](const BoundaryStat & s) { return s.candidate; });
  if (!any_candidate) return {};

  std::vector<double> magnitudes;
  magnitudes.reserve(stats.size());
  for (const BoundaryStat & s : stats) magnitudes.push_back(s.magnitude);
  const auto threshold = two_means_threshold(magnitudes);

  std::vector<const BoundaryStat *> displaced;
  for (const BoundaryStat & s : stats) {
    if (s.candidate && (!threshold || s.magnitude >= *threshold)) {
      displaced.push_back(&s);
    }
  }

  std::vector<DeflectionEvent> events;
  for (size_t i = 0; i < displaced.size();) {
    size_t j = i;
    // Consecutive boundaries chain into one event.
    while (j + 1 < displaced.size() &&
           displaced[j + 1]->frame - displaced[j]->frame == 1) {
      ++j;
    }
    DeflectionEvent ev;
    ev.frame_start = displaced[i]->frame;
    ev.frame_end = displaced[j]->frame;
    for (size_t k = i; k <= j; ++k) {
      ev.dx += displaced[k]->dx;
      ev.dy += displaced[k]->dy;
      ev.steps.push_back({displaced[k]->frame, displaced[k]->dx, displaced[k]->dy});
    }
    ev.n_matched = displaced[i]->n_matched;
    ev.rotation_deg = estimate_rotation(displaced[i]->center_matches);
    events.push_back(std::move(ev));
    i = j + 1;
  }
  return events;
}

std::vector<Trajectory> apply_correction(
  const std::vector<Trajectory> & trajectories, const std::vector<DeflectionEvent> & events,
  int image_w, int image_h)
{
  std::vector<DeflectionStep> steps;
  for (const DeflectionEvent & ev : events) {
    for (const DeflectionStep & s : ev.steps) steps.push_back(s);
  }
  std::sort(steps.begin(), steps.end(), [](const DeflectionStep & a, const DeflectionStep & b) {
    return a.frame < b.frame;
  });

  std::vector<Trajectory> out = trajectories;
  for (Trajectory & traj : out) {
    size_t next_step = 0;
    double sx = 0.0, sy = 0.0;
    for (TrackPoint & p : traj.points) {
      while (next_step < steps.size() && steps[next_step].frame < p.frame_num) {
        sx += steps[next_step].dx;
        sy += steps[next_step].dy;
        ++next_step;
      }
      if (sx == 0.0 && sy == 0.0) continue;
      p.bbox.xmin -= sx;
      p.bbox.xmax -= sx;
      p.bbox.ymin -= sy;
      p.bbox.ymax -= sy;
      p.center = bbox_center(p.bbox);
      p.out_of_frame =
        p.bbox.xmin < 0.0 || p.bbox.ymin < 0.0 || p.bbox.xmax > image_w || p.bbox.ymax > image_h;
    }
  }
  return out;
}

void emit_deflection_csv(std::ostream & out, const std::vector<DeflectionEvent> & events)
{
  out << "frame_start,frame_end,dx,dy,rotation_deg,n_matched\n";
  for (const DeflectionEvent & ev : events) {
    out << ev.frame_start << ',' << ev.frame_end << ',' << format_double(ev.dx) << ','
        << format_double(ev.dy) << ',';
    if (ev.rotation_deg) out << format_double(*ev.rotation_deg);
    out << ',' << ev.n_matched << '\n';
  }
}

}  // namespace nadir
