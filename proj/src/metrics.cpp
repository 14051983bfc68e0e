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

#include "nadir/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include <nlohmann/json.hpp>

#include "nadir/error.hpp"
#include "nadir/format.hpp"
#include "nadir/geometry.hpp"

namespace nadir
{

double ClassCounts::pcu(const AnalysisParams & params) const
{
  return static_cast<double>(car) * params.pce_car + static_cast<double>(bus) * params.pce_bus +
         static_cast<double>(truck) * params.pce_truck;
}

void ClassCounts::add(VehicleClass cls)
{
  switch (cls) {
    case VehicleClass::car:
      ++car;
      break;
    case VehicleClass::bus:
      ++bus;
      break;
    case VehicleClass::truck:
      ++truck;
      break;
  }
}

std::vector<VolumeBin> bin_volumes(
  const std::vector<std::pair<double, VehicleClass>> & arrivals, double bin_s, double t0_s,
  double t1_s, const AnalysisParams & params)
{
  if (bin_s <= 0.0) throw_config("bin length must be positive");
  if (t1_s <= t0_s) throw_invalid("empty observation window");
  const auto n = static_cast<size_t>(std::ceil((t1_s - t0_s) / bin_s));
  std::vector<VolumeBin> bins(n);
  for (size_t i = 0; i < n; ++i) {
    bins[i].t_begin_s = t0_s + static_cast<double>(i) * bin_s;
    bins[i].t_end_s = std::min(t1_s, bins[i].t_begin_s + bin_s);
  }
  for (const auto & [t, cls] : arrivals) {
    if (t < t0_s || t >= t1_s) continue;
    auto idx = static_cast<size_t>((t - t0_s) / bin_s);
    if (idx >= n) idx = n - 1;
    bins[idx].counts.add(cls);
  }
  for (VolumeBin & bin : bins) bin.pcu = bin.counts.pcu(params);
  return bins;
}

double peak_hour_factor(const std::vector<double> & quarter_volumes)
{
  if (quarter_volumes.size() != 4) {
    throw_invalid("peak hour factor needs exactly four quarter volumes");
  }
  return peak_period_factor(quarter_volumes);
}

double peak_period_factor(const std::vector<double> & bin_volumes)
{
  if (bin_volumes.empty()) throw_invalid("peak period factor needs at least one bin");
  double sum = 0.0;
  double peak = 0.0;
  for (double v : bin_volumes) {
    if (v < 0.0) throw_invalid("bin volume is negative");
    sum += v;
    peak = std::max(peak, v);
  }
  if (peak <= 0.0) throw_invalid("peak period factor is undefined without traffic");
  return sum / (static_cast<double>(bin_volumes.size()) * peak);
}

MeanSpeeds mean_speeds(const std::vector<double> & speeds_kmh)
{
  MeanSpeeds out;
  double sum = 0.0;
  double inv_sum = 0.0;
  for (double v : speeds_kmh) {
    if (v <= 0.0) {
      ++out.zero_excluded;
      continue;
    }
    ++out.n;
    sum += v;
    inv_sum += 1.0 / v;
  }
  if (out.n == 0) return out;
  out.tms_kmh = sum / static_cast<double>(out.n);
  out.sms_kmh = static_cast<double>(out.n) / inv_sum;
  return out;
}

double traffic_density(double volume_per_h, double sms_kmh)
{
  if (sms_kmh <= 0.0) throw_invalid("space mean speed must be positive for density");
  return volume_per_h / sms_kmh;
}

char level_of_service(double density, const std::vector<double> & bounds)
{
  if (bounds.empty() || bounds.size() > 25) throw_config("bad level-of-service bounds");
  for (size_t i = 1; i < bounds.size(); ++i) {
    if (!(bounds[i] > bounds[i - 1])) throw_config("level-of-service bounds must increase");
  }
  for (size_t i = 0; i < bounds.size(); ++i) {
    if (density <= bounds[i]) return static_cast<char>('A' + i);
  }
  return static_cast<char>('A' + bounds.size());
}

double capacity_from_bins(const std::vector<double> & bin_pcu, double bin_s)
{
  if (bin_s <= 0.0) throw_config("bin length must be positive");
  if (bin_pcu.empty()) throw_invalid("capacity needs at least one bin");
  const double peak = *std::max_element(bin_pcu.begin(), bin_pcu.end());
  return peak * (3600.0 / bin_s);
}

std::vector<double> expand_counts(
  const std::vector<double> & bins, const std::vector<bool> & observed)
{
  if (bins.size() != observed.size()) throw_invalid("mask length does not match bins");
  if (bins.empty()) return {};
  std::vector<size_t> known;
  for (size_t i = 0; i < observed.size(); ++i) {
    if (observed[i]) known.push_back(i);
  }
  if (known.empty()) throw_invalid("cannot expand a series with no observed bins");

  std::vector<double> out(bins.size());
  for (size_t i = 0; i < bins.size(); ++i) {
    if (observed[i]) {
      out[i] = bins[i];
      continue;
    }
    const auto next = std::lower_bound(known.begin(), known.end(), i);
    if (next == known.begin()) {
      out[i] = bins[known.front()];
    } else if (next == known.end()) {
      out[i] = bins[known.back()];
    } else {
      const size_t hi = *next;
      const size_t lo = *(next - 1);
      const double t = static_cast<double>(i - lo) / static_cast<double>(hi - lo);
      out[i] = bins[lo] + (bins[hi] - bins[lo]) * t;
    }
  }
  return out;
}

SpeedValidation validate_speeds(const std::vector<std::tuple<long, double, double>> & pairs)
{
  SpeedValidation out;
  double pct_sum = 0.0;
  double sq_sum = 0.0;
  for (const auto & [id, v_video, v_traj] : pairs) {
    if (v_video <= 0.0) {
      ++out.excluded_zero;
      continue;
    }
    SpeedValidationRow row;
    row.id = id;
    row.v_video_kmh = v_video;
    row.v_trajectory_kmh = v_traj;
    row.abs_pct_err = 100.0 * std::abs(v_traj - v_video) / v_video;
    pct_sum += row.abs_pct_err;
    sq_sum += (v_traj - v_video) * (v_traj - v_video);
    out.rows.push_back(row);
  }
  if (!out.rows.empty()) {
    out.mape = pct_sum / static_cast<double>(out.rows.size());
    out.rmse = std::sqrt(sq_sum / static_cast<double>(out.rows.size()));
  }
  return out;
}

void emit_validation_csv(std::ostream & out, const SpeedValidation & validation)
{
  out << "id,v_video,v_trajectory,abs_pct_err\n";
  for (const SpeedValidationRow & row : validation.rows) {
    out << row.id << ',' << format_double(row.v_video_kmh) << ','
        << format_double(row.v_trajectory_kmh) << ',' << format_double(row.abs_pct_err) << '\n';
  }
}

namespace
{

std::optional<Axis> group_axis(const std::string & group)
{
  if (group.empty()) return std::nullopt;
  switch (group.front()) {
    case 'n':
    case 's':
      return Axis::ns;
    case 'e':
    case 'w':
      return Axis::ew;
    default:
      return std::nullopt;
  }
}

/// First crossing time of a section line, interpolated between the frames
/// around the hit.
std::optional<double> section_crossing_time(const Trajectory & traj, const Segment & section)
{
  for (size_t i = 1; i < traj.points.size(); ++i) {
    const auto param = segment_intersection_param(
      traj.points[i - 1].center, traj.points[i].center, section.a, section.b);
    if (param) {
      return traj.points[i - 1].time_s + *param * (traj.points[i].time_s - traj.points[i - 1].time_s);
    }
  }
  return std::nullopt;
}

/// First crossing time of the corridor midline, for scenes without an
/// explicit spot-speed section.
std::optional<double> midline_crossing_time(const Trajectory & traj, const SceneConfig & scene)
{
  const double mid = (scene.corridor.min_px + scene.corridor.max_px) / 2.0;
  for (size_t i = 1; i < traj.points.size(); ++i) {
    const double a = longitudinal_of(traj.points[i - 1].center, scene.corridor.axis) - mid;
    const double b = longitudinal_of(traj.points[i].center, scene.corridor.axis) - mid;
    if (a == 0.0 && b == 0.0) continue;
    if ((a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0)) {
      const double t = a / (a - b);
      return traj.points[i - 1].time_s + t * (traj.points[i].time_s - traj.points[i - 1].time_s);
    }
  }
  return std::nullopt;
}

}  // namespace

IntersectionReport build_intersection_report(
  const std::vector<Trajectory> & trajectories,
  const std::map<long, std::vector<KinematicSample>> & kinematics, const SceneConfig & scene)
{
  const AnalysisParams & params = scene.params;
  IntersectionReport report;

  report.t1_s = 0.0;
  for (const Trajectory & traj : trajectories) {
    report.totals.add(traj.cls);
    if (!traj.points.empty()) report.t1_s = std::max(report.t1_s, traj.points.back().time_s);
  }
  if (report.t1_s <= report.t0_s) report.t1_s = report.t0_s + params.bin_s;

  std::vector<TurningMovement> movements;
  for (const Trajectory & traj : trajectories) {
    const auto movement = classify_turn(traj, scene);
    if (movement) movements.push_back(*movement);
  }
  report.turns = count_turns(movements, scene, static_cast<long>(trajectories.size()));

  // Arrivals and member trajectories per direction group.
  std::map<std::string, std::vector<std::pair<double, VehicleClass>>> arrivals;
  std::map<std::string, std::vector<long>> members;
  for (const auto & [name, approach] : scene.approaches) {
    (void)name;
    arrivals[approach.group];
  }
  std::map<long, const Trajectory *> traj_by_id;
  for (const Trajectory & traj : trajectories) traj_by_id[traj.id] = &traj;
  for (const TurningMovement & movement : movements) {
    const auto approach = scene.approaches.find(movement.entry_approach);
    if (approach == scene.approaches.end()) continue;
    arrivals[approach->second.group].push_back({movement.entry_time_s, movement.cls});
    members[approach->second.group].push_back(movement.id);
  }

  const Segment * tms_section = nullptr;
  if (!params.tms_section.empty()) {
    const auto found = scene.sections.find(params.tms_section);
    if (found == scene.sections.end()) {
      throw_config("spot speed section '" + params.tms_section + "' is not in the scene");
    }
    tms_section = &found->second;
  }

  for (const auto & [group, group_arrivals] : arrivals) {
    GroupMetrics gm;
    gm.group = group;
    gm.bins = bin_volumes(group_arrivals, params.bin_s, report.t0_s, report.t1_s, params);
    std::vector<double> pcu_series;
    for (const VolumeBin & bin : gm.bins) {
      gm.totals.car += bin.counts.car;
      gm.totals.bus += bin.counts.bus;
      gm.totals.truck += bin.counts.truck;
      gm.total_pcu += bin.pcu;
      pcu_series.push_back(bin.pcu);
    }
    gm.volume_pcu_h = gm.total_pcu * 3600.0 / (report.t1_s - report.t0_s);
    if (gm.total_pcu > 0.0) {
      gm.ppf = peak_period_factor(pcu_series);
      gm.capacity_pcu_h = capacity_from_bins(pcu_series, params.bin_s);
      if (pcu_series.size() >= 4) {
        // Busiest four consecutive bins stand in for the peak hour.
        size_t best = 0;
        double best_sum = -1.0;
        for (size_t i = 0; i + 4 <= pcu_series.size(); ++i) {
          const double sum = pcu_series[i] + pcu_series[i + 1] + pcu_series[i + 2] +
                             pcu_series[i + 3];
          if (sum > best_sum) {
            best_sum = sum;
            best = i;
          }
        }
        const std::vector<double> window(
          pcu_series.begin() + static_cast<long>(best),
          pcu_series.begin() + static_cast<long>(best) + 4);
        if (*std::max_element(window.begin(), window.end()) > 0.0) {
          gm.phf = peak_hour_factor(window);
        }
      }
    }

    // Spot speeds give the time mean; corridor transits give the space mean.
    const std::optional<Axis> axis = group_axis(group);
    std::vector<double> spot_kmh;
    std::vector<double> transit_kmh;
    const auto group_members = members.find(group);
    if (group_members != members.end()) {
      for (long id : group_members->second) {
        const Trajectory & traj = *traj_by_id.at(id);
        const auto kin = kinematics.find(id);
        if (kin == kinematics.end() || kin->second.empty()) continue;
        std::optional<double> cross;
        if (tms_section) {
          cross = section_crossing_time(traj, *tms_section);
        } else if (axis && *axis == scene.corridor.axis) {
          cross = midline_crossing_time(traj, scene);
        }
        if (cross) spot_kmh.push_back(interpolate_speed_at(kin->second, *cross));
        if (axis && *axis == scene.corridor.axis) {
          const auto transit = corridor_speed(traj, scene);
          if (transit) transit_kmh.push_back(transit->speed_kmh);
        }
      }
    }
    if (!spot_kmh.empty()) {
      const MeanSpeeds spot = mean_speeds(spot_kmh);
      if (spot.n > 0) gm.tms_kmh = spot.tms_kmh;
    }
    if (!transit_kmh.empty()) {
      const MeanSpeeds transit = mean_speeds(transit_kmh);
      gm.zero_speed_excluded = transit.zero_excluded;
      if (transit.n > 0) gm.sms_kmh = transit.sms_kmh;
    }
    if (gm.sms_kmh && *gm.sms_kmh > 0.0) {
      gm.density_pcu_km = traffic_density(gm.volume_pcu_h, *gm.sms_kmh);
      gm.los = level_of_service(*gm.density_pcu_km, params.los_density_bounds);
    }
    report.groups.push_back(std::move(gm));
  }

  return report;
}

std::string report_to_json(const IntersectionReport & report, const SceneConfig & scene)
{
  using nlohmann::json;
  json j;
  j["window"] = {{"t0_s", report.t0_s}, {"t1_s", report.t1_s}};

  json vehicles;
  vehicles["total"] = report.totals.total();
  vehicles["car"] = report.totals.car;
  vehicles["bus"] = report.totals.bus;
  vehicles["truck"] = report.totals.truck;
  if (report.totals.total() > 0) {
    const double n = static_cast<double>(report.totals.total());
    vehicles["share_percent"] = {
      {"car", 100.0 * static_cast<double>(report.totals.car) / n},
      {"bus", 100.0 * static_cast<double>(report.totals.bus) / n},
      {"truck", 100.0 * static_cast<double>(report.totals.truck) / n}};
  }
  j["vehicles"] = vehicles;

  json turns;
  for (const auto & [approach, counts] : report.turns.counts) {
    turns[approach] = {
      {"through", counts[0]}, {"left", counts[1]}, {"right", counts[2]}, {"u_turn", counts[3]}};
  }
  j["turning_counts"] = turns;
  j["turning_classified"] = report.turns.classified;
  j["turning_unclassified"] = report.turns.unclassified;

  json groups = json::array();
  for (const GroupMetrics & gm : report.groups) {
    json g;
    g["group"] = gm.group;
    json bins = json::array();
    for (const VolumeBin & bin : gm.bins) {
      bins.push_back(
        {{"t_begin_s", bin.t_begin_s},
         {"t_end_s", bin.t_end_s},
         {"car", bin.counts.car},
         {"bus", bin.counts.bus},
         {"truck", bin.counts.truck},
         {"pcu", bin.pcu}});
    }
    g["bins"] = bins;
    g["vehicles"] = gm.totals.total();
    g["total_pcu"] = gm.total_pcu;
    g["volume_pcu_h"] = gm.volume_pcu_h;
    g["phf"] = gm.phf ? json(*gm.phf) : json(nullptr);
    g["ppf"] = gm.ppf;
    g["capacity_pcu_h"] = gm.capacity_pcu_h;
    g["tms_kmh"] = gm.tms_kmh ? json(*gm.tms_kmh) : json(nullptr);
    g["sms_kmh"] = gm.sms_kmh ? json(*gm.sms_kmh) : json(nullptr);
    g["zero_speed_excluded"] = gm.zero_speed_excluded;
    g["density_pcu_km"] = gm.density_pcu_km ? json(*gm.density_pcu_km) : json(nullptr);
    g["los"] = gm.los == '-' ? json(nullptr) : json(std::string(1, gm.los));
    groups.push_back(g);
  }
  j["groups"] = groups;
  j["meters_per_px"] = scene.meters_per_px();
  j["fps"] = scene.fps;
  return j.dump(2) + "\n";
}

}  // namespace nadir
