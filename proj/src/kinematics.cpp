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

#include "nadir/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "nadir/error.hpp"
#include "nadir/format.hpp"

namespace nadir
{

namespace
{
constexpr double kMsToKmh = 3.6;

std::vector<Vec2> smoothed_centers(const Trajectory & traj, int window)
{
  std::vector<Vec2> centers;
  centers.reserve(traj.points.size());
  const int n = static_cast<int>(traj.points.size());
  const int half = std::max(window, 1) / 2;
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    Vec2 acc;
    for (int j = lo; j <= hi; ++j) acc = acc + traj.points[j].center;
    centers.push_back(acc * (1.0 / (hi - lo + 1)));
  }
  return centers;
}

}  // namespace

double speed_between(const TrackPoint & a, const TrackPoint & b, double meters_per_px, double fps)
{
  if (!(meters_per_px > 0.0)) throw_invalid("speed_between: scale must be positive");
  if (!(fps > 0.0)) throw_invalid("speed_between: fps must be positive");
  const long dframe = b.frame_num - a.frame_num;
  if (dframe == 0) throw_invalid("speed_between: points share a frame");
  const double dt = std::abs(static_cast<double>(dframe)) / fps;
  const double dis_px = (b.center - a.center).norm();
  return dis_px * meters_per_px / dt * kMsToKmh;
}

std::vector<KinematicSample> enrich_kinematics(
  const Trajectory & traj, double meters_per_px, double fps, const AnalysisParams & params)
{
  if (!(meters_per_px > 0.0)) throw_invalid("enrich_kinematics: scale must be positive");
  if (!(fps > 0.0)) throw_invalid("enrich_kinematics: fps must be positive");

  const int n = static_cast<int>(traj.points.size());
  const int min_points = std::max(params.min_kinematics_points, 1);
  if (n < min_points) return {};

  std::vector<Vec2> centers;
  if (params.smooth_centers) {
    centers = smoothed_centers(traj, params.smooth_window);
  } else {
    centers.reserve(traj.points.size());
    for (const TrackPoint & p : traj.points) centers.push_back(p.center);
  }

  std::vector<KinematicSample> out(n);
  // Midpoint time of the displacement interval behind each sample; exact
  // sample time of the speed estimate under uniform acceleration.
  std::vector<double> mid_time(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const TrackPoint & p = traj.points[i];
    out[i].frame_num = p.frame_num;
    out[i].time_s = p.time_s;
    if (i == 0) continue;
    const TrackPoint & prev = traj.points[i - 1];
    const double dt = static_cast<double>(p.frame_num - prev.frame_num) / fps;
    const double dis_px = (centers[i] - centers[i - 1]).norm();
    out[i].displacement_px = dis_px;
    out[i].speed_ms = dis_px * meters_per_px / dt;
    out[i].speed_kmh = out[i].speed_ms * kMsToKmh;
    mid_time[i] = (prev.time_s + p.time_s) / 2.0;
  }

  const int half = std::max(params.accel_window, 1) / 2;
  for (int i = 1; i < n; ++i) {
    int lo = (half == 0) ? i - 1 : i - half;
    int hi = (half == 0) ? i : i + half;
    lo = std::max(lo, 1);  // never difference against the synthetic zero
    hi = std::min(hi, n - 1);
    if (hi <= lo) continue;
    const double dt = mid_time[hi] - mid_time[lo];
    if (dt > 0.0) {
      out[i].accel_ms2 = (out[hi].speed_ms - out[lo].speed_ms) / dt;
    }
  }
  return out;
}

double trajectory_mean_speed(const std::vector<KinematicSample> & samples)
{
  if (samples.empty()) throw_invalid("trajectory_mean_speed: empty series");
  if (samples.size() == 1) return samples[0].speed_kmh;
  double sum = 0.0;
  for (size_t i = 1; i < samples.size(); ++i) sum += samples[i].speed_kmh;
  return sum / static_cast<double>(samples.size() - 1);
}

namespace
{

/// First time the longitudinal coordinate reaches the given line,
/// interpolated between frames.
std::optional<double> first_crossing_time(const Trajectory & traj, Axis axis, double line)
{
  for (size_t i = 1; i < traj.points.size(); ++i) {
    const double a = longitudinal_of(traj.points[i - 1].center, axis) - line;
    const double b = longitudinal_of(traj.points[i].center, axis) - line;
    if (a == 0.0) return traj.points[i - 1].time_s;
    if ((a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0)) {
      const double t = a / (a - b);
      return traj.points[i - 1].time_s +
             t * (traj.points[i].time_s - traj.points[i - 1].time_s);
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<CorridorTransit> corridor_speed(const Trajectory & traj, const SceneConfig & scene)
{
  if (traj.points.size() < 2) return std::nullopt;
  const Corridor & c = scene.corridor;
  const auto t_min = first_crossing_time(traj, c.axis, c.min_px);
  const auto t_max = first_crossing_time(traj, c.axis, c.max_px);
  if (!t_min || !t_max) return std::nullopt;
  const double entry = std::min(*t_min, *t_max);
  const double exit = std::max(*t_min, *t_max);
  if (!(exit > entry)) return std::nullopt;
  CorridorTransit transit;
  transit.entry_s = entry;
  transit.exit_s = exit;
  transit.transit_s = exit - entry;
  transit.speed_kmh = c.length_m / transit.transit_s * kMsToKmh;
  return transit;
}

void emit_kinematics_csv(
  std::ostream & out, const std::map<long, std::vector<KinematicSample>> & series)
{
  out << "id,frame_num,time_s,displacement_px,speed_ms,speed_kmh,accel_ms2\n";
  for (const auto & [id, samples] : series) {
    for (const KinematicSample & s : samples) {
      out << id << ',' << s.frame_num << ',' << format_double(s.time_s) << ','
          << format_double(s.displacement_px) << ',' << format_double(s.speed_ms) << ','
          << format_double(s.speed_kmh) << ',' << format_double(s.accel_ms2) << '\n';
    }
  }
}

double interpolate_speed_at(const std::vector<KinematicSample> & samples, double time_s)
{
  if (samples.empty()) throw_invalid("interpolate_speed_at: empty series");
  if (time_s <= samples.front().time_s) return samples.front().speed_kmh;
  if (time_s >= samples.back().time_s) return samples.back().speed_kmh;
  for (size_t i = 1; i < samples.size(); ++i) {
    if (time_s <= samples[i].time_s) {
      const double span = samples[i].time_s - samples[i - 1].time_s;
      if (span <= 0.0) return samples[i].speed_kmh;
      const double t = (time_s - samples[i - 1].time_s) / span;
      return samples[i - 1].speed_kmh + t * (samples[i].speed_kmh - samples[i - 1].speed_kmh);
    }
  }
  return samples.back().speed_kmh;
}

}  // namespace nadir
