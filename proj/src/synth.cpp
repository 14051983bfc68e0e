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

#include "nadir/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <random>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "nadir/error.hpp"
#include "nadir/format.hpp"
#include "nadir/maneuvers.hpp"

namespace nadir
{

double PlProfile::at(double time) const
{
  if (t.empty()) return 0.0;
  if (time <= t.front()) return v.front();
  if (time >= t.back()) return v.back();
  const auto hi = std::upper_bound(t.begin(), t.end(), time);
  const size_t i = static_cast<size_t>(hi - t.begin());
  const double span = t[i] - t[i - 1];
  if (span <= 0.0) return v[i];
  const double w = (time - t[i - 1]) / span;
  return v[i - 1] + (v[i] - v[i - 1]) * w;
}

double PlProfile::rate(double time) const
{
  if (t.size() < 2) return 0.0;
  if (time < t.front() || time >= t.back()) return 0.0;
  const auto hi = std::upper_bound(t.begin(), t.end(), time);
  size_t i = static_cast<size_t>(hi - t.begin());
  if (i == 0) i = 1;
  if (i >= t.size()) i = t.size() - 1;
  const double span = t[i] - t[i - 1];
  if (span <= 0.0) return 0.0;
  return (v[i] - v[i - 1]) / span;
}

double PlProfile::integral(double t0, double t1) const
{
  if (empty() || t1 <= t0) return 0.0;
  if (t.size() == 1) return v.front() * (t1 - t0);
  double total = 0.0;
  double lo = t0;
  if (lo < t.front()) {
    const double end = std::min(t1, t.front());
    total += v.front() * (end - lo);
    lo = end;
  }
  double hi = t1;
  double tail = 0.0;
  if (hi > t.back()) {
    const double begin = std::max(lo, t.back());
    tail = v.back() * (hi - begin);
    hi = begin;
  }
  for (size_t i = 0; i + 1 < t.size() && lo < hi; ++i) {
    const double s = std::max(lo, t[i]);
    const double e = std::min(hi, t[i + 1]);
    if (s >= e) continue;
    total += (at(s) + at(e)) / 2.0 * (e - s);
  }
  return total + tail;
}

namespace
{

void validate_profile(const PlProfile & profile, const std::string & what)
{
  if (profile.t.size() != profile.v.size()) {
    throw_config(what + ": knot times and values differ in length");
  }
  for (size_t i = 1; i < profile.t.size(); ++i) {
    if (!(profile.t[i] > profile.t[i - 1])) {
      throw_config(what + ": knot times must be strictly increasing");
    }
  }
}

struct VehicleMotion
{
  const SynthVehicle * vehicle = nullptr;
  double path_length = 0.0;

  Vec2 center_at(double time, double t_begin, double mpp) const
  {
    const double s_px = vehicle->speed_ms.integral(t_begin, time) / mpp;
    const Vec2 base = point_at_arclength(vehicle->path, s_px);
    const Vec2 dir = direction_at_arclength(vehicle->path, s_px);
    const Vec2 normal{-dir.y, dir.x};
    return base + normal * vehicle->lateral_px.at(time);
  }

  double ground_speed_at(double time, double mpp) const
  {
    const double along = vehicle->speed_ms.at(time);
    const double lateral = vehicle->lateral_px.rate(time) * mpp;
    return std::hypot(along, lateral);
  }
};

Vec2 rotate_about(const Vec2 & p, const Vec2 & pivot, double rad)
{
  const double c = std::cos(rad);
  const double s = std::sin(rad);
  const Vec2 r = p - pivot;
  return {pivot.x + c * r.x - s * r.y, pivot.y + s * r.x + c * r.y};
}

Polyline hline(double y, double x0, double x1)
{
  return {{x0, y}, {x1, y}};
}

Polyline vline(double x, double y0, double y1)
{
  return {{x, y0}, {x, y1}};
}

PlProfile constant_profile(double value)
{
  return {{0.0}, {value}};
}

LaneModel ew_lane_model(const std::vector<double> & boundary_ys, TravelDir travel)
{
  LaneModel model;
  model.axis = Axis::ew;
  model.travel = travel;
  for (double y : boundary_ys) model.boundaries.push_back(hline(y, 0.0, 1920.0));
  return model;
}

}  // namespace

SynthResult generate(const Scenario & scenario)
{
  const SceneConfig & scene = scenario.scene;
  if (scene.fps <= 0.0) throw_config("scenario needs a positive frame rate");
  const double mpp = scene.meters_per_px();
  const Vec2 image_center{scene.image_w / 2.0, scene.image_h / 2.0};

  std::vector<DeflectionSpec> steps = scenario.deflections;
  std::sort(steps.begin(), steps.end(), [](const DeflectionSpec & a, const DeflectionSpec & b) {
    return a.frame < b.frame;
  });

  std::mt19937 rng(scenario.seed);
  std::uniform_real_distribution<double> jitter(-scenario.jitter_px, scenario.jitter_px);

  const LaneModel * lanes = nullptr;
  if (!scene.lane_models.empty()) lanes = &scene.lane_models.begin()->second;

  SynthResult result;
  result.deflections = steps;
  for (const SynthVehicle & vehicle : scenario.vehicles) {
    if (vehicle.path.size() < 2) throw_config("scripted vehicle path needs at least two points");
    if (!(vehicle.t_end_s > vehicle.t_begin_s)) {
      throw_config("scripted vehicle needs a positive time span");
    }
    validate_profile(vehicle.speed_ms, "speed profile");
    validate_profile(vehicle.lateral_px, "lateral profile");
    VehicleMotion motion{&vehicle, polyline_length(vehicle.path)};

    const long f0 = static_cast<long>(std::ceil(vehicle.t_begin_s * scene.fps - 1e-9));
    const long f1 = static_cast<long>(std::floor(vehicle.t_end_s * scene.fps + 1e-9));
    for (long f = std::max<long>(f0, 0); f <= f1; ++f) {
      const double time = static_cast<double>(f) / scene.fps;
      const Vec2 center = motion.center_at(time, vehicle.t_begin_s, mpp);
      BBox box;
      box.xmin = center.x - vehicle.box_w_px / 2.0;
      box.ymin = center.y - vehicle.box_h_px / 2.0;
      box.xmax = center.x + vehicle.box_w_px / 2.0;
      box.ymax = center.y + vehicle.box_h_px / 2.0;
      const bool inside = box.xmin >= 0.0 && box.ymin >= 0.0 &&
                          box.xmax <= static_cast<double>(scene.image_w) &&
                          box.ymax <= static_cast<double>(scene.image_h);
      if (!inside) {
        if (scenario.out_of_image == OutOfImage::error) {
          throw_invalid(
            "scripted box leaves the image: vehicle " + std::to_string(vehicle.id) + " at frame " +
            std::to_string(f));
        }
        if (scenario.out_of_image == OutOfImage::truncate) break;
      }

      TruthPoint truth;
      truth.frame_num = f;
      truth.id = vehicle.id;
      truth.center = center;
      truth.speed_ms = motion.ground_speed_at(time, mpp);
      constexpr double kDt = 1e-4;
      truth.accel_ms2 =
        (motion.ground_speed_at(time + kDt, mpp) - motion.ground_speed_at(time - kDt, mpp)) /
        (2.0 * kDt);
      if (lanes) truth.lane = lane_index_at(*lanes, center);
      result.truth.push_back(truth);

      double shift_x = 0.0;
      double shift_y = 0.0;
      double rot_deg = 0.0;
      for (const DeflectionSpec & step : steps) {
        if (f <= step.frame) break;
        shift_x += step.dx;
        shift_y += step.dy;
        rot_deg += step.rot_deg;
      }
      Vec2 moved = center;
      if (rot_deg != 0.0) moved = rotate_about(moved, image_center, deg_to_rad(rot_deg));
      moved.x += shift_x;
      moved.y += shift_y;

      BBox out;
      out.xmin = moved.x - vehicle.box_w_px / 2.0;
      out.ymin = moved.y - vehicle.box_h_px / 2.0;
      out.xmax = moved.x + vehicle.box_w_px / 2.0;
      out.ymax = moved.y + vehicle.box_h_px / 2.0;
      if (scenario.jitter_px > 0.0) {
        out.xmin += jitter(rng);
        out.ymin += jitter(rng);
        out.xmax += jitter(rng);
        out.ymax += jitter(rng);
        if (!(out.xmin < out.xmax) || !(out.ymin < out.ymax)) {
          throw_invalid("jitter collapsed a box; lower jitter_px or enlarge the boxes");
        }
      }
      result.records.push_back({f, vehicle.id, vehicle.cls, out});
    }
  }

  const auto order = [](const DetectionRecord & a, const DetectionRecord & b) {
    if (a.frame_num != b.frame_num) return a.frame_num < b.frame_num;
    return a.id < b.id;
  };
  std::sort(result.records.begin(), result.records.end(), order);
  std::sort(result.truth.begin(), result.truth.end(), [](const TruthPoint & a, const TruthPoint & b) {
    if (a.frame_num != b.frame_num) return a.frame_num < b.frame_num;
    return a.id < b.id;
  });
  return result;
}

void write_truth_csv(std::ostream & out, const SynthResult & result)
{
  out << "kind,frame_num,id,cx,cy,speed_ms,accel_ms2,lane,rot_deg\n";
  for (const DeflectionSpec & step : result.deflections) {
    out << "deflection," << step.frame << ",," << format_double(step.dx) << ','
        << format_double(step.dy) << ",,,," << format_double(step.rot_deg) << '\n';
  }
  for (const TruthPoint & p : result.truth) {
    out << "point," << p.frame_num << ',' << p.id << ',' << format_double(p.center.x) << ','
        << format_double(p.center.y) << ',' << format_double(p.speed_ms) << ','
        << format_double(p.accel_ms2) << ',';
    if (p.lane) out << *p.lane;
    out << ",\n";
  }
}

namespace
{

Scenario base_scenario(const std::string & name)
{
  Scenario s;
  s.name = name;
  return s;  // scene defaults: 30 fps, 1920x1080, 120 m altitude
}

Scenario preset_constant_speed()
{
  Scenario s = base_scenario("constant_speed");
  const double mpp = s.scene.meters_per_px();
  SynthVehicle v;
  v.id = 1;
  v.path = hline(540.0, 100.0, 1800.0);
  v.speed_ms = constant_profile(mpp * s.scene.fps);  // exactly one pixel per frame
  v.t_begin_s = 0.0;
  v.t_end_s = 30.0;
  s.vehicles.push_back(v);
  return s;
}

Scenario preset_uniform_accel()
{
  Scenario s = base_scenario("uniform_accel");
  SynthVehicle v;
  v.id = 1;
  v.path = hline(540.0, 100.0, 1800.0);
  v.speed_ms = {{0.0, 20.0}, {2.0, 12.0}};  // 0.5 m/s^2 throughout
  v.t_begin_s = 0.0;
  v.t_end_s = 20.0;
  s.vehicles.push_back(v);
  return s;
}

Scenario preset_sinusoid_speed()
{
  Scenario s = base_scenario("sinusoid_speed");
  SynthVehicle v;
  v.id = 1;
  v.path = hline(540.0, 60.0, 1880.0);
  for (int k = 0; k <= 60; ++k) {
    const double t = 0.5 * k;
    v.speed_ms.t.push_back(t);
    v.speed_ms.v.push_back(4.0 + 1.5 * std::sin(2.0 * 3.14159265358979323846 * t / 10.0));
  }
  v.t_begin_s = 0.0;
  v.t_end_s = 30.0;
  s.vehicles.push_back(v);
  return s;
}

/// Twenty vehicles on all four headings; the camera jumps 24 px right and
/// 8 px up after frame 100.
Scenario preset_deflection(bool with_step)
{
  Scenario s = base_scenario(with_step ? "deflection" : "no_deflection_control");
  const double mpp = s.scene.meters_per_px();
  const double one_px_per_frame = mpp * s.scene.fps;
  long id = 1;
  for (int i = 0; i < 10; ++i) {
    SynthVehicle v;
    v.id = id++;
    v.path = hline(100.0 + 90.0 * i, 80.0 + 40.0 * i, 1700.0);
    v.speed_ms = constant_profile(one_px_per_frame);
    v.t_begin_s = 0.0;
    v.t_end_s = 20.0;
    s.vehicles.push_back(v);
  }
  for (int i = 0; i < 5; ++i) {
    SynthVehicle v;
    v.id = id++;
    v.path = {{1800.0 - 40.0 * i, 145.0 + 90.0 * i}, {200.0, 145.0 + 90.0 * i}};
    v.speed_ms = constant_profile(one_px_per_frame);
    v.t_begin_s = 0.0;
    v.t_end_s = 20.0;
    s.vehicles.push_back(v);
  }
  for (int i = 0; i < 3; ++i) {
    SynthVehicle v;
    v.id = id++;
    v.path = vline(1100.0 + 70.0 * i, 80.0, 900.0);
    v.speed_ms = constant_profile(one_px_per_frame);
    v.t_begin_s = 0.0;
    v.t_end_s = 20.0;
    s.vehicles.push_back(v);
  }
  for (int i = 0; i < 2; ++i) {
    SynthVehicle v;
    v.id = id++;
    v.path = vline(1400.0 + 70.0 * i, 1000.0, 100.0);
    v.speed_ms = constant_profile(one_px_per_frame);
    v.t_begin_s = 0.0;
    v.t_end_s = 20.0;
    s.vehicles.push_back(v);
  }
  if (with_step) s.deflections.push_back({100, 24.0, -8.0, 0.0});
  return s;
}

/// A small yaw plus a shift; all vehicles sit left of the image center so
/// the rotation does not cancel out of the mean offset.
Scenario preset_rotation()
{
  Scenario s = base_scenario("rotation");
  const double mpp = s.scene.meters_per_px();
  for (int i = 0; i < 12; ++i) {
    SynthVehicle v;
    v.id = i + 1;
    v.path = hline(600.0 + 35.0 * i, 100.0 + 30.0 * i, 1700.0);
    v.speed_ms = constant_profile(mpp * s.scene.fps);
    v.t_begin_s = 0.0;
    v.t_end_s = 10.0;
    s.vehicles.push_back(v);
  }
  // Shift large enough that the yaw term cannot cancel either axis below
  // the per-vehicle jump trigger anywhere in the frame.
  s.deflections.push_back({150, 10.0, 14.0, 0.6});
  return s;
}

SceneConfig lane_change_scene()
{
  SceneConfig scene;
  scene.lane_models["main"] =
    ew_lane_model({500.0, 540.0, 580.0, 620.0, 660.0, 700.0}, TravelDir::east);
  return scene;
}

/// One eastbound vehicle at 14 km/h drifting two lanes over: lane 3 to 4
/// with the boundary crossed at exactly t = 242.44 s, then 4 to 5 at
/// t = 250.44 s.
Scenario preset_lane_change_double()
{
  Scenario s = base_scenario("lane_change_double");
  s.scene = lane_change_scene();
  SynthVehicle v;
  v.id = 7;
  v.path = hline(600.0, 60.0, 1900.0);
  v.speed_ms = constant_profile(14.0 / 3.6);
  const double rate = 42.0 / 6.3;  // px/s; 20 px after exactly 3 s
  v.lateral_px.t = {0.0, 239.44, 239.44 + 6.3, 247.74, 247.74 + 6.0};
  v.lateral_px.v = {0.0, 0.0, 42.0, 42.0, 82.0};
  (void)rate;
  v.t_begin_s = 230.0;
  v.t_end_s = 262.0;
  s.vehicles.push_back(v);
  return s;
}

/// Same vehicle, but the drift pokes only 14 px past the boundary, below
/// the 20 px debounce, three times.
Scenario preset_lane_change_wiggle()
{
  Scenario s = base_scenario("lane_change_wiggle");
  s.scene = lane_change_scene();
  SynthVehicle v;
  v.id = 7;
  v.path = hline(600.0, 60.0, 1900.0);
  v.speed_ms = constant_profile(14.0 / 3.6);
  v.lateral_px.t = {0.0, 239.44, 242.0, 244.56, 247.0, 249.56, 252.0, 254.56};
  v.lateral_px.v = {0.0, 0.0, 34.0, 0.0, 34.0, 0.0, 34.0, 0.0};
  v.t_begin_s = 230.0;
  v.t_end_s = 262.0;
  s.vehicles.push_back(v);
  return s;
}

/// 198 constant-speed vehicles transiting a 1500 px corridor; ground truth
/// speed equals the corridor transit speed.
Scenario preset_corridor198()
{
  Scenario s = base_scenario("corridor198");
  const double mpp = s.scene.meters_per_px();
  s.scene.corridor.axis = Axis::ew;
  s.scene.corridor.min_px = 200.0;
  s.scene.corridor.max_px = 1700.0;
  s.scene.corridor.length_m = 1500.0 * mpp;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> speed(8.0, 15.0);
  for (int i = 0; i < 198; ++i) {
    SynthVehicle v;
    v.id = i + 1;
    const double y = 150.0 + 120.0 * (i % 6);
    const bool east = (i % 2) == 0;
    v.path = east ? hline(y, 100.0, 1800.0) : Polyline{{1800.0, y}, {100.0, y}};
    const double v0 = speed(rng);
    v.speed_ms = constant_profile(v0);
    v.t_begin_s = 0.35 * i;
    v.t_end_s = v.t_begin_s + 1690.0 * mpp / v0;
    s.vehicles.push_back(v);
  }
  return s;
}

/// A follower closes on a 5 m/s leader at exactly 8.39 km/h and stops
/// closing at t = 12 s, when the net gap is exactly 1.402625 m.
Scenario preset_closing_pair()
{
  Scenario s = base_scenario("closing_pair");
  const double mpp = s.scene.meters_per_px();
  s.scene.lane_models["main"] = ew_lane_model({560.0, 640.0}, TravelDir::east);

  const double v_leader = 5.0;
  const double dv = 8.39 / 3.6;
  const double gap_at_12 = 1.402625;
  const double gap0 = gap_at_12 + dv * 12.0;
  const double follower_x0 = 100.0;
  const double leader_x0 = (follower_x0 * mpp + 4.5 + gap0) / mpp;

  SynthVehicle leader;
  leader.id = 1;
  leader.path = hline(600.0, leader_x0, 1850.0);
  leader.speed_ms = constant_profile(v_leader);
  leader.t_begin_s = 0.0;
  leader.t_end_s = 16.0;
  s.vehicles.push_back(leader);

  SynthVehicle follower;
  follower.id = 2;
  follower.path = hline(600.0, follower_x0, 1850.0);
  // The ramp down starts exactly on the frame boundary so the speed
  // measured over the frame ending at t = 12 is still the closing speed.
  follower.speed_ms = {{0.0, 12.0, 12.0 + 1.0 / 30.0}, {v_leader + dv, v_leader + dv, v_leader}};
  follower.t_begin_s = 0.0;
  follower.t_end_s = 16.0;
  s.vehicles.push_back(follower);
  return s;
}

/// Two vehicles cross a section line 987 ms apart.
Scenario preset_pet_pair()
{
  Scenario s = base_scenario("pet_pair");
  s.scene.sections["main"] = Segment{{1400.0, 400.0}, {1400.0, 800.0}};
  const double v_px = 60.0;  // px/s
  const double v_ms = v_px * s.scene.meters_per_px();

  SynthVehicle first;
  first.id = 1;
  first.path = hline(600.0, 862.0, 1750.0);
  first.speed_ms = constant_profile(v_ms);
  first.t_begin_s = 0.0;
  first.t_end_s = 14.0;
  s.vehicles.push_back(first);

  SynthVehicle second;
  second.id = 2;
  second.path = hline(600.0, 862.0 - 59.22, 1750.0);
  second.speed_ms = constant_profile(v_ms);
  second.t_begin_s = 0.0;
  second.t_end_s = 14.0;
  s.vehicles.push_back(second);
  return s;
}

/// Thirty non-interacting vehicles, each in its own row, entering from the
/// west; a smoke scene for the intersection report.
Scenario preset_free_flow()
{
  Scenario s = base_scenario("free_flow");
  const double mpp = s.scene.meters_per_px();
  s.scene.corridor.axis = Axis::ew;
  s.scene.corridor.min_px = 200.0;
  s.scene.corridor.max_px = 1700.0;
  s.scene.corridor.length_m = 1500.0 * mpp;
  s.scene.approaches["west"] = {{{0.0, 0.0}, {250.0, 0.0}, {250.0, 1080.0}, {0.0, 1080.0}},
                                "west_east"};
  s.scene.approaches["east"] = {{{1670.0, 0.0}, {1920.0, 0.0}, {1920.0, 1080.0}, {1670.0, 1080.0}},
                                "west_east"};
  for (int i = 0; i < 30; ++i) {
    SynthVehicle v;
    v.id = i + 1;
    v.cls = (i % 10 == 9) ? VehicleClass::truck : ((i % 10 == 4) ? VehicleClass::bus : VehicleClass::car);
    v.path = hline(60.0 + 33.0 * i, 100.0, 1800.0);
    const double v0 = 6.0 + 0.2 * i;
    v.speed_ms = constant_profile(v0);
    v.t_begin_s = 0.2 * i;
    v.t_end_s = v.t_begin_s + 1700.0 * mpp / v0;
    s.vehicles.push_back(v);
  }
  return s;
}

/// Five-vehicle platoon braking to a stop front-first and pulling away
/// together; exercises stopped leaders and zero-speed samples.
Scenario preset_platoon_stop_go()
{
  Scenario s = base_scenario("platoon_stop_go");
  s.scene.lane_models["main"] = ew_lane_model({560.0, 640.0}, TravelDir::east);
  for (int k = 0; k < 5; ++k) {
    SynthVehicle v;
    v.id = k + 1;
    v.path = hline(600.0, 580.0 - 115.0 * k, 1850.0);
    const double brake = 8.0 + 0.5 * k;
    v.speed_ms = {{0.0, brake, brake + 2.0, 14.0, 16.0}, {8.0, 8.0, 0.0, 0.0, 8.0}};
    v.t_begin_s = 0.0;
    v.t_end_s = 16.0;
    s.vehicles.push_back(v);
  }
  return s;
}

}  // namespace

Scenario random_scene(unsigned seed)
{
  Scenario s = base_scenario("random_" + std::to_string(seed));
  s.seed = seed;
  s.out_of_image = OutOfImage::truncate;
  s.scene.lane_models["road"] = ew_lane_model({500.0, 560.0, 620.0, 680.0}, TravelDir::east);
  s.scene.sections["mid"] = Segment{{1200.0, 480.0}, {1200.0, 700.0}};

  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> n_dist(2, 10);
  std::uniform_int_distribution<int> lane_dist(0, 2);
  std::uniform_real_distribution<double> x0_dist(80.0, 600.0);
  std::uniform_real_distribution<double> v1_dist(3.0, 12.0);
  std::uniform_real_distribution<double> v2_dist(2.0, 13.0);
  std::uniform_real_distribution<double> knot_dist(3.0, 8.0);

  const int n = n_dist(rng);
  for (int i = 0; i < n; ++i) {
    SynthVehicle v;
    v.id = i + 1;
    const double y = 530.0 + 60.0 * lane_dist(rng);
    v.path = hline(y, x0_dist(rng), 3000.0);
    const double v1 = v1_dist(rng);
    const double v2 = v2_dist(rng);
    const double knot = knot_dist(rng);
    v.speed_ms = {{0.0, knot, knot + 2.0}, {v1, v1, v2}};
    v.t_begin_s = 0.0;
    v.t_end_s = 15.0;
    s.vehicles.push_back(v);
  }
  return s;
}

Scenario make_preset(const std::string & name)
{
  if (name == "constant_speed") return preset_constant_speed();
  if (name == "uniform_accel") return preset_uniform_accel();
  if (name == "sinusoid_speed") return preset_sinusoid_speed();
  if (name == "deflection") return preset_deflection(true);
  if (name == "no_deflection_control") return preset_deflection(false);
  if (name == "rotation") return preset_rotation();
  if (name == "lane_change_double") return preset_lane_change_double();
  if (name == "lane_change_wiggle") return preset_lane_change_wiggle();
  if (name == "corridor198") return preset_corridor198();
  if (name == "closing_pair") return preset_closing_pair();
  if (name == "pet_pair") return preset_pet_pair();
  if (name == "free_flow") return preset_free_flow();
  if (name == "platoon_stop_go") return preset_platoon_stop_go();
  if (name == "random") return random_scene(1);
  throw_config("unknown scenario preset '" + name + "'");
}

std::vector<std::string> preset_names()
{
  return {"constant_speed", "uniform_accel",   "sinusoid_speed",     "deflection",
          "no_deflection_control", "rotation", "lane_change_double", "lane_change_wiggle",
          "corridor198",     "closing_pair",   "pet_pair",           "free_flow",
          "platoon_stop_go", "random"};
}

namespace
{

PlProfile profile_from_json(const nlohmann::json & j, const std::string & what)
{
  PlProfile p;
  if (!j.is_object() || !j.contains("t") || !j.contains("v")) {
    throw_config(what + ": profile needs 't' and 'v' arrays");
  }
  for (const auto & v : j.at("t")) p.t.push_back(v.get<double>());
  for (const auto & v : j.at("v")) p.v.push_back(v.get<double>());
  validate_profile(p, what);
  return p;
}

}  // namespace

Scenario scenario_from_json_text(const std::string & text, const std::string & source)
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception & e) {
    throw_parse(source + ": " + e.what());
  }
  if (!j.is_object()) throw_parse(source + ": scenario must be a JSON object");

  Scenario s;
  try {
    s.name = j.value("name", std::string("custom"));
    if (j.contains("scene")) {
      s.scene = scene_from_json_text(j.at("scene").dump());
    }
    s.jitter_px = j.value("jitter_px", 0.0);
    s.seed = j.value("seed", 1u);
    const std::string policy = j.value("out_of_image", std::string("error"));
    if (policy == "error") {
      s.out_of_image = OutOfImage::error;
    } else if (policy == "truncate") {
      s.out_of_image = OutOfImage::truncate;
    } else if (policy == "keep") {
      s.out_of_image = OutOfImage::keep;
    } else {
      throw_config(source + ": out_of_image must be error, truncate, or keep");
    }
    for (const auto & jv : j.value("vehicles", nlohmann::json::array())) {
      SynthVehicle v;
      v.id = jv.at("id").get<long>();
      if (jv.contains("class")) {
        const auto cls = vehicle_class_from_string(jv.at("class").get<std::string>());
        if (!cls) throw_config(source + ": unknown vehicle class in scenario");
        v.cls = *cls;
      }
      for (const auto & pt : jv.at("path")) {
        if (!pt.is_array() || pt.size() != 2) throw_config(source + ": path points are [x, y]");
        v.path.push_back({pt[0].get<double>(), pt[1].get<double>()});
      }
      v.speed_ms = profile_from_json(jv.at("speed_ms"), source + "#speed_ms");
      if (jv.contains("lateral_px")) {
        v.lateral_px = profile_from_json(jv.at("lateral_px"), source + "#lateral_px");
      }
      v.t_begin_s = jv.at("t_begin_s").get<double>();
      v.t_end_s = jv.at("t_end_s").get<double>();
      v.box_w_px = jv.value("box_w_px", 36.0);
      v.box_h_px = jv.value("box_h_px", 18.0);
      s.vehicles.push_back(std::move(v));
    }
    for (const auto & jd : j.value("deflections", nlohmann::json::array())) {
      DeflectionSpec step;
      step.frame = jd.at("frame").get<long>();
      step.dx = jd.value("dx", 0.0);
      step.dy = jd.value("dy", 0.0);
      step.rot_deg = jd.value("rot_deg", 0.0);
      s.deflections.push_back(step);
    }
  } catch (const nlohmann::json::exception & e) {
    throw_config(source + ": " + e.what());
  }
  return s;
}

Scenario scenario_from_json_file(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw_io("cannot open scenario file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return scenario_from_json_text(buffer.str(), path);
}

std::vector<BruteConflict> brute_force_conflicts(
  const std::vector<Trajectory> & trajectories,
  const std::map<long, std::vector<KinematicSample>> & kinematics, const SceneConfig & scene)
{
  const AnalysisParams & params = scene.params;
  const double mpp = scene.meters_per_px();

  struct Obs
  {
    long id = 0;
    double s_px = 0.0;
    int lane = 0;
    double speed_ms = 0.0;
    double length_px = 0.0;
  };

  // Everything indexed the slow way: by (frame, lane model) from scratch.
  std::vector<const Trajectory *> eligible;
  for (const Trajectory & traj : trajectories) {
    if (static_cast<long>(traj.points.size()) < params.min_maneuver_points) continue;
    const auto kin = kinematics.find(traj.id);
    if (kin == kinematics.end() || kin->second.empty()) continue;
    eligible.push_back(&traj);
  }

  std::map<std::pair<long, long>, std::vector<std::pair<long, double>>> active;
  long frame_lo = 0;
  long frame_hi = -1;
  for (const Trajectory * traj : eligible) {
    if (frame_hi < frame_lo) {
      frame_lo = traj->first_frame();
      frame_hi = traj->last_frame();
    } else {
      frame_lo = std::min(frame_lo, traj->first_frame());
      frame_hi = std::max(frame_hi, traj->last_frame());
    }
  }

  for (long frame = frame_lo; frame <= frame_hi; ++frame) {
    for (const auto & [model_name, model] : scene.lane_models) {
      (void)model_name;
      const double sign =
        (model.travel == TravelDir::east || model.travel == TravelDir::south) ? 1.0 : -1.0;
      std::vector<Obs> present;
      for (const Trajectory * traj : eligible) {
        const TrackPoint * point = nullptr;
        for (const TrackPoint & p : traj->points) {
          if (p.frame_num == frame) {
            point = &p;
            break;
          }
        }
        if (!point) continue;
        const auto lane = lane_index_at(model, point->center);
        if (!lane) continue;
        double speed = 0.0;
        bool have_speed = false;
        for (const KinematicSample & sample : kinematics.at(traj->id)) {
          if (sample.frame_num == frame) {
            speed = sample.speed_ms;
            have_speed = true;
            break;
          }
        }
        if (!have_speed) continue;
        Obs obs;
        obs.id = traj->id;
        obs.s_px = sign * longitudinal_of(point->center, model.axis);
        obs.lane = *lane;
        obs.speed_ms = speed;
        obs.length_px =
          params.vehicle_length_from_bbox
            ? (model.axis == Axis::ew ? point->bbox.width() : point->bbox.height())
            : params.vehicle_length_m(traj->cls) / mpp;
        present.push_back(obs);
      }
      for (const Obs & follower : present) {
        for (const Obs & leader : present) {
          if (leader.id == follower.id) continue;
          if (leader.lane != follower.lane) continue;
          if (!(leader.s_px > follower.s_px)) continue;
          bool blocked = false;
          for (const Obs & mid : present) {
            if (mid.id == leader.id || mid.id == follower.id) continue;
            if (mid.lane != follower.lane) continue;
            if (mid.s_px > follower.s_px && mid.s_px < leader.s_px) {
              blocked = true;
              break;
            }
          }
          if (blocked) continue;
          const double gap = (leader.s_px - follower.s_px - leader.length_px) * mpp;
          double ttc_ms = -1.0;
          if (gap <= 0.0) {
            ttc_ms = 0.0;
          } else if (follower.speed_ms > leader.speed_ms) {
            ttc_ms = gap / (follower.speed_ms - leader.speed_ms) * 1000.0;
          }
          if (ttc_ms >= 0.0 && ttc_ms < params.ttc_threshold_ms) {
            active[{follower.id, leader.id}].push_back({frame, ttc_ms});
          }
        }
      }
    }
  }

  std::vector<BruteConflict> out;
  for (const auto & [pair, samples] : active) {
    size_t begin = 0;
    for (size_t i = 1; i <= samples.size(); ++i) {
      const bool broken = i == samples.size() || samples[i].first != samples[i - 1].first + 1;
      if (!broken) continue;
      BruteConflict bc;
      bc.kind = ConflictKind::ttc;
      bc.id_a = pair.second;
      bc.id_b = pair.first;
      bc.frame_start = samples[begin].first;
      bc.min_ms = samples[begin].second;
      for (size_t k = begin; k < i; ++k) bc.min_ms = std::min(bc.min_ms, samples[k].second);
      out.push_back(bc);
      begin = i;
    }
  }

  // Every ordered crossing pair with nothing in between, per section.
  struct Cross
  {
    double t = 0.0;
    long id = 0;
  };
  for (const auto & [name, section] : scene.sections) {
    (void)name;
    std::vector<Cross> pool;
    for (const Trajectory * traj : eligible) {
      const std::vector<TrackPoint> & pts = traj->points;
      for (size_t i = 1; i < pts.size(); ++i) {
        const auto param =
          segment_intersection_param(pts[i - 1].center, pts[i].center, section.a, section.b);
        if (!param) continue;
        const double t = pts[i - 1].time_s + *param * (pts[i].time_s - pts[i - 1].time_s);
        bool dup = false;
        for (const Cross & c : pool) {
          if (c.id == traj->id && std::abs(c.t - t) < 1e-9) dup = true;
        }
        if (!dup) pool.push_back({t, traj->id});
      }
    }
    for (const Cross & a : pool) {
      for (const Cross & b : pool) {
        if (a.id == b.id) continue;
        if (b.t < a.t) continue;
        if (b.t == a.t && b.id < a.id) continue;
        bool between = false;
        for (const Cross & c : pool) {
          if ((c.id == a.id && std::abs(c.t - a.t) < 1e-12) ||
              (c.id == b.id && std::abs(c.t - b.t) < 1e-12)) {
            continue;
          }
          if (c.t > a.t && c.t < b.t) between = true;
          if (c.id == a.id && c.t > a.t && c.t <= b.t) between = true;
          if (c.id == b.id && c.t >= a.t && c.t < b.t) between = true;
        }
        if (between) continue;
        const double pet = (b.t - a.t) * 1000.0;
        if (pet >= params.pet_threshold_ms) continue;
        BruteConflict bc;
        bc.kind = ConflictKind::pet;
        bc.id_a = a.id;
        bc.id_b = b.id;
        bc.frame_start = static_cast<long>(std::llround(a.t * scene.fps));
        bc.min_ms = pet;
        out.push_back(bc);
      }
    }
  }

  std::sort(out.begin(), out.end(), [](const BruteConflict & a, const BruteConflict & b) {
    if (a.frame_start != b.frame_start) return a.frame_start < b.frame_start;
    if (a.id_b != b.id_b) return a.id_b < b.id_b;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.id_a < b.id_a;
  });
  return out;
}

}  // namespace nadir
