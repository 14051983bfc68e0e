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

#include "nadir/scene.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nadir/error.hpp"

namespace nadir
{

using nlohmann::json;

const char * to_string(TravelDir dir)
{
  switch (dir) {
    case TravelDir::east:
      return "east";
    case TravelDir::west:
      return "west";
    case TravelDir::north:
      return "north";
    case TravelDir::south:
      return "south";
  }
  return "east";
}

std::optional<TravelDir> travel_dir_from_string(std::string_view name)
{
  if (name == "east") return TravelDir::east;
  if (name == "west") return TravelDir::west;
  if (name == "north") return TravelDir::north;
  if (name == "south") return TravelDir::south;
  return std::nullopt;
}

Axis axis_of(TravelDir dir)
{
  return (dir == TravelDir::east || dir == TravelDir::west) ? Axis::ew : Axis::ns;
}

double AnalysisParams::vehicle_length_m(VehicleClass cls) const
{
  switch (cls) {
    case VehicleClass::bus:
      return vehicle_length_bus_m;
    case VehicleClass::truck:
      return vehicle_length_truck_m;
    default:
      return vehicle_length_car_m;
  }
}

int AnalysisParams::class_index(VehicleClass cls) const
{
  switch (cls) {
    case VehicleClass::bus:
      return class_index_bus;
    case VehicleClass::truck:
      return class_index_truck;
    default:
      return class_index_car;
  }
}

double AnalysisParams::pce(VehicleClass cls) const
{
  switch (cls) {
    case VehicleClass::bus:
      return pce_bus;
    case VehicleClass::truck:
      return pce_truck;
    default:
      return pce_car;
  }
}

double SceneConfig::meters_per_px() const
{
  if (scale.has_value()) return meters_per_pixel(*scale, altitude_m);
  if (camera.has_value()) return meters_per_pixel(*camera, image_w, image_h, altitude_m);
  return meters_per_pixel(ScaleModel{}, altitude_m);
}

namespace
{

[[noreturn]] void unknown_key(const std::string & where, const std::string & key)
{
  throw_config("unknown key '" + key + "' in " + where);
}

double as_double(const json & j, const std::string & where)
{
  if (!j.is_number()) throw_config(where + " must be a number");
  return j.get<double>();
}

int as_int(const json & j, const std::string & where)
{
  if (!j.is_number_integer()) throw_config(where + " must be an integer");
  return j.get<int>();
}

bool as_bool(const json & j, const std::string & where)
{
  if (!j.is_boolean()) throw_config(where + " must be a boolean");
  return j.get<bool>();
}

std::string as_string(const json & j, const std::string & where)
{
  if (!j.is_string()) throw_config(where + " must be a string");
  return j.get<std::string>();
}

Vec2 as_vec2(const json & j, const std::string & where)
{
  if (!j.is_array() || j.size() != 2) throw_config(where + " must be a [x, y] pair");
  return {as_double(j[0], where + "[0]"), as_double(j[1], where + "[1]")};
}

Polyline as_polyline(const json & j, const std::string & where, size_t min_points)
{
  if (!j.is_array() || j.size() < min_points) {
    throw_config(where + " must be an array of at least " + std::to_string(min_points) +
                 " [x, y] pairs");
  }
  Polyline line;
  line.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    line.push_back(as_vec2(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return line;
}

Axis as_axis(const json & j, const std::string & where)
{
  const std::string s = as_string(j, where);
  if (s == "ew") return Axis::ew;
  if (s == "ns") return Axis::ns;
  throw_config(where + " must be \"ew\" or \"ns\"");
}

YoloMode as_yolo_mode(const std::string & s, const std::string & where)
{
  if (s == "standard") return YoloMode::standard;
  if (s == "paper-exact" || s == "paper_exact") return YoloMode::paper_exact;
  throw_config(where + " must be \"standard\" or \"paper-exact\"");
}

std::string default_group(const std::string & approach_name)
{
  if (approach_name.empty()) return approach_name;
  switch (approach_name.front()) {
    case 'n':
    case 'N':
    case 's':
    case 'S':
      return "south_north";
    case 'e':
    case 'E':
    case 'w':
    case 'W':
      return "west_east";
    default:
      return approach_name;
  }
}

void parse_params(const json & j, AnalysisParams & p)
{
  for (const auto & [key, value] : j.items()) {
    const std::string where = "params." + key;
    if (key == "qaqc_in_frame") {
      p.qaqc_in_frame = as_bool(value, where);
    } else if (key == "qaqc_min_side_px") {
      p.qaqc_min_side_px = as_double(value, where);
    } else if (key == "qaqc_max_side_px") {
      p.qaqc_max_side_px = as_double(value, where);
    } else if (key == "qaqc_aspect_min") {
      p.qaqc_aspect_min = as_double(value, where);
    } else if (key == "qaqc_aspect_max") {
      p.qaqc_aspect_max = as_double(value, where);
    } else if (key == "qaqc_min_track_len") {
      p.qaqc_min_track_len = as_int(value, where);
    } else if (key == "stab_trigger_px") {
      p.stab_trigger_px = as_double(value, where);
    } else if (key == "stab_outlier_px") {
      p.stab_outlier_px = as_double(value, where);
    } else if (key == "stab_min_matched") {
      p.stab_min_matched = as_int(value, where);
    } else if (key == "stab_dissent_frac") {
      p.stab_dissent_frac = as_double(value, where);
    } else if (key == "accel_window") {
      p.accel_window = as_int(value, where);
    } else if (key == "smooth_centers") {
      p.smooth_centers = as_bool(value, where);
    } else if (key == "smooth_window") {
      p.smooth_window = as_int(value, where);
    } else if (key == "min_kinematics_points") {
      p.min_kinematics_points = as_int(value, where);
    } else if (key == "min_maneuver_points") {
      p.min_maneuver_points = as_int(value, where);
    } else if (key == "dwell_frames") {
      p.dwell_frames = as_int(value, where);
    } else if (key == "hysteresis_px") {
      p.hysteresis_px = as_double(value, where);
    } else if (key == "through_deg") {
      p.through_deg = as_double(value, where);
    } else if (key == "uturn_deg") {
      p.uturn_deg = as_double(value, where);
    } else if (key == "heading_fit_points") {
      p.heading_fit_points = as_int(value, where);
    } else if (key == "ttc_threshold_ms") {
      p.ttc_threshold_ms = as_double(value, where);
    } else if (key == "pet_threshold_ms") {
      p.pet_threshold_ms = as_double(value, where);
    } else if (key == "react_time_s") {
      p.react_time_s = as_double(value, where);
    } else if (key == "decel_max_ms2") {
      p.decel_max_ms2 = as_double(value, where);
    } else if (key == "vehicle_length_car_m") {
      p.vehicle_length_car_m = as_double(value, where);
    } else if (key == "vehicle_length_bus_m") {
      p.vehicle_length_bus_m = as_double(value, where);
    } else if (key == "vehicle_length_truck_m") {
      p.vehicle_length_truck_m = as_double(value, where);
    } else if (key == "vehicle_length_from_bbox") {
      p.vehicle_length_from_bbox = as_bool(value, where);
    } else if (key == "heat_cols") {
      p.heat_cols = as_int(value, where);
    } else if (key == "heat_rows") {
      p.heat_rows = as_int(value, where);
    } else if (key == "heat_band_ms") {
      if (!value.is_array() || value.empty()) throw_config(where + " must be a number array");
      p.heat_band_ms.clear();
      for (size_t i = 0; i < value.size(); ++i) {
        p.heat_band_ms.push_back(as_double(value[i], where));
      }
    } else if (key == "low_variance_eps_ms") {
      p.low_variance_eps_ms = as_double(value, where);
    } else if (key == "pce_car") {
      p.pce_car = as_double(value, where);
    } else if (key == "pce_bus") {
      p.pce_bus = as_double(value, where);
    } else if (key == "pce_truck") {
      p.pce_truck = as_double(value, where);
    } else if (key == "bin_s") {
      p.bin_s = as_double(value, where);
    } else if (key == "tms_section") {
      p.tms_section = as_string(value, where);
    } else if (key == "los_density_bounds") {
      if (!value.is_array() || value.size() != 5) {
        throw_config(where + " must list five density bounds (levels A..E)");
      }
      p.los_density_bounds.clear();
      for (size_t i = 0; i < value.size(); ++i) {
        p.los_density_bounds.push_back(as_double(value[i], where));
      }
    } else if (key == "yolo_mode") {
      p.yolo_mode = as_yolo_mode(as_string(value, where), where);
    } else if (key == "class_index_car") {
      p.class_index_car = as_int(value, where);
    } else if (key == "class_index_bus") {
      p.class_index_bus = as_int(value, where);
    } else if (key == "class_index_truck") {
      p.class_index_truck = as_int(value, where);
    } else {
      unknown_key("params", key);
    }
  }
}

}  // namespace

SceneConfig scene_from_json_text(const std::string & json_text)
{
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error & e) {
    throw_config(std::string("scene config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw_config("scene config must be a JSON object");

  SceneConfig scene;
  for (const auto & [key, value] : j.items()) {
    if (key == "fps") {
      scene.fps = as_double(value, "fps");
      if (!(scene.fps > 0.0)) throw_config("fps must be positive");
    } else if (key == "image_w") {
      scene.image_w = as_int(value, "image_w");
    } else if (key == "image_h") {
      scene.image_h = as_int(value, "image_h");
    } else if (key == "altitude_m") {
      scene.altitude_m = as_double(value, "altitude_m");
    } else if (key == "camera") {
      CameraModel cam;
      for (const auto & [ck, cv] : value.items()) {
        if (ck == "fov_diag_deg") {
          cam.fov_diag_deg = as_double(cv, "camera.fov_diag_deg");
        } else {
          unknown_key("camera", ck);
        }
      }
      scene.camera = cam;
    } else if (key == "scale") {
      ScaleModel sc;
      for (const auto & [sk, sv] : value.items()) {
        if (sk == "meters_per_px") {
          sc.meters_per_px_ref = as_double(sv, "scale.meters_per_px");
        } else if (sk == "reference_altitude_m") {
          sc.reference_altitude_m = as_double(sv, "scale.reference_altitude_m");
        } else {
          unknown_key("scale", sk);
        }
      }
      scene.scale = sc;
    } else if (key == "corridor") {
      for (const auto & [ck, cv] : value.items()) {
        if (ck == "axis") {
          scene.corridor.axis = as_axis(cv, "corridor.axis");
        } else if (ck == "min_px") {
          scene.corridor.min_px = as_double(cv, "corridor.min_px");
        } else if (ck == "max_px") {
          scene.corridor.max_px = as_double(cv, "corridor.max_px");
        } else if (ck == "length_m") {
          scene.corridor.length_m = as_double(cv, "corridor.length_m");
        } else {
          unknown_key("corridor", ck);
        }
      }
      if (!(scene.corridor.min_px < scene.corridor.max_px)) {
        throw_config("corridor.min_px must be below corridor.max_px");
      }
      if (!(scene.corridor.length_m > 0.0)) throw_config("corridor.length_m must be positive");
    } else if (key == "approaches") {
      if (!value.is_object()) throw_config("approaches must be an object");
      for (const auto & [name, av] : value.items()) {
        ApproachRegion region;
        if (av.is_array()) {
          region.polygon = as_polyline(av, "approaches." + name, 3);
          region.group = default_group(name);
        } else if (av.is_object()) {
          bool have_polygon = false;
          for (const auto & [ak, aval] : av.items()) {
            if (ak == "polygon") {
              region.polygon = as_polyline(aval, "approaches." + name + ".polygon", 3);
              have_polygon = true;
            } else if (ak == "group") {
              region.group = as_string(aval, "approaches." + name + ".group");
            } else {
              unknown_key("approaches." + name, ak);
            }
          }
          if (!have_polygon) throw_config("approaches." + name + " is missing its polygon");
          if (region.group.empty()) region.group = default_group(name);
        } else {
          throw_config("approaches." + name + " must be a polygon or an object");
        }
        scene.approaches.emplace(name, std::move(region));
      }
    } else if (key == "lane_models") {
      if (!value.is_object()) throw_config("lane_models must be an object");
      for (const auto & [name, lv] : value.items()) {
        LaneModel model;
        bool have_boundaries = false;
        for (const auto & [lk, lval] : lv.items()) {
          const std::string where = "lane_models." + name + "." + lk;
          if (lk == "axis") {
            model.axis = as_axis(lval, where);
          } else if (lk == "travel") {
            const auto dir = travel_dir_from_string(as_string(lval, where));
            if (!dir) throw_config(where + " must be east, west, north or south");
            model.travel = *dir;
          } else if (lk == "boundaries") {
            if (!lval.is_array() || lval.size() < 2) {
              throw_config(where + " must list at least two boundary polylines");
            }
            for (size_t i = 0; i < lval.size(); ++i) {
              model.boundaries.push_back(
                as_polyline(lval[i], where + "[" + std::to_string(i) + "]", 2));
            }
            have_boundaries = true;
          } else {
            unknown_key("lane_models." + name, lk);
          }
        }
        if (!have_boundaries) throw_config("lane_models." + name + " is missing boundaries");
        if (axis_of(model.travel) != model.axis) {
          throw_config("lane_models." + name + ": travel direction does not match axis");
        }
        scene.lane_models.emplace(name, std::move(model));
      }
    } else if (key == "sections") {
      if (!value.is_object()) throw_config("sections must be an object");
      for (const auto & [name, sv] : value.items()) {
        const Polyline line = as_polyline(sv, "sections." + name, 2);
        if (line.size() != 2) throw_config("sections." + name + " must be a two-point segment");
        scene.sections.emplace(name, Segment{line[0], line[1]});
      }
    } else if (key == "conflict_zones") {
      if (!value.is_object()) throw_config("conflict_zones must be an object");
      for (const auto & [name, zv] : value.items()) {
        scene.conflict_zones.emplace(name, as_polyline(zv, "conflict_zones." + name, 3));
      }
    } else if (key == "params") {
      if (!value.is_object()) throw_config("params must be an object");
      parse_params(value, scene.params);
    } else {
      unknown_key("scene config", key);
    }
  }
  if (scene.image_w <= 0 || scene.image_h <= 0) throw_config("image size must be positive");
  return scene;
}

SceneConfig scene_from_json_file(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw_io("cannot open scene config: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return scene_from_json_text(buf.str());
}

namespace
{

json polyline_to_json(const Polyline & line)
{
  json arr = json::array();
  for (const Vec2 & v : line) arr.push_back({v.x, v.y});
  return arr;
}

}  // namespace

std::string scene_to_json_text(const SceneConfig & scene)
{
  json j;
  j["fps"] = scene.fps;
  j["image_w"] = scene.image_w;
  j["image_h"] = scene.image_h;
  j["altitude_m"] = scene.altitude_m;
  if (scene.camera) j["camera"] = {{"fov_diag_deg", scene.camera->fov_diag_deg}};
  if (scene.scale) {
    j["scale"] = {
      {"meters_per_px", scene.scale->meters_per_px_ref},
      {"reference_altitude_m", scene.scale->reference_altitude_m}};
  }
  j["corridor"] = {
    {"axis", scene.corridor.axis == Axis::ew ? "ew" : "ns"},
    {"min_px", scene.corridor.min_px},
    {"max_px", scene.corridor.max_px},
    {"length_m", scene.corridor.length_m}};
  if (!scene.approaches.empty()) {
    json a = json::object();
    for (const auto & [name, region] : scene.approaches) {
      a[name] = {{"polygon", polyline_to_json(region.polygon)}, {"group", region.group}};
    }
    j["approaches"] = a;
  }
  if (!scene.lane_models.empty()) {
    json m = json::object();
    for (const auto & [name, model] : scene.lane_models) {
      json bounds = json::array();
      for (const Polyline & b : model.boundaries) bounds.push_back(polyline_to_json(b));
      m[name] = {
        {"axis", model.axis == Axis::ew ? "ew" : "ns"},
        {"travel", to_string(model.travel)},
        {"boundaries", bounds}};
    }
    j["lane_models"] = m;
  }
  if (!scene.sections.empty()) {
    json s = json::object();
    for (const auto & [name, seg] : scene.sections) {
      s[name] = polyline_to_json({seg.a, seg.b});
    }
    j["sections"] = s;
  }
  if (!scene.conflict_zones.empty()) {
    json z = json::object();
    for (const auto & [name, poly] : scene.conflict_zones) z[name] = polyline_to_json(poly);
    j["conflict_zones"] = z;
  }

  const AnalysisParams def;
  const AnalysisParams & p = scene.params;
  json pj = json::object();
  if (p.qaqc_in_frame != def.qaqc_in_frame) pj["qaqc_in_frame"] = p.qaqc_in_frame;
  if (p.qaqc_min_side_px != def.qaqc_min_side_px) pj["qaqc_min_side_px"] = p.qaqc_min_side_px;
  if (p.qaqc_max_side_px != def.qaqc_max_side_px) pj["qaqc_max_side_px"] = p.qaqc_max_side_px;
  if (p.qaqc_aspect_min != def.qaqc_aspect_min) pj["qaqc_aspect_min"] = p.qaqc_aspect_min;
  if (p.qaqc_aspect_max != def.qaqc_aspect_max) pj["qaqc_aspect_max"] = p.qaqc_aspect_max;
  if (p.qaqc_min_track_len != def.qaqc_min_track_len) {
    pj["qaqc_min_track_len"] = p.qaqc_min_track_len;
  }
  if (p.stab_trigger_px != def.stab_trigger_px) pj["stab_trigger_px"] = p.stab_trigger_px;
  if (p.stab_outlier_px != def.stab_outlier_px) pj["stab_outlier_px"] = p.stab_outlier_px;
  if (p.stab_min_matched != def.stab_min_matched) pj["stab_min_matched"] = p.stab_min_matched;
  if (p.stab_dissent_frac != def.stab_dissent_frac) pj["stab_dissent_frac"] = p.stab_dissent_frac;
  if (p.accel_window != def.accel_window) pj["accel_window"] = p.accel_window;
  if (p.smooth_centers != def.smooth_centers) pj["smooth_centers"] = p.smooth_centers;
  if (p.smooth_window != def.smooth_window) pj["smooth_window"] = p.smooth_window;
  if (p.min_kinematics_points != def.min_kinematics_points) {
    pj["min_kinematics_points"] = p.min_kinematics_points;
  }
  if (p.min_maneuver_points != def.min_maneuver_points) {
    pj["min_maneuver_points"] = p.min_maneuver_points;
  }
  if (p.dwell_frames != def.dwell_frames) pj["dwell_frames"] = p.dwell_frames;
  if (p.hysteresis_px != def.hysteresis_px) pj["hysteresis_px"] = p.hysteresis_px;
  if (p.through_deg != def.through_deg) pj["through_deg"] = p.through_deg;
  if (p.uturn_deg != def.uturn_deg) pj["uturn_deg"] = p.uturn_deg;
  if (p.heading_fit_points != def.heading_fit_points) {
    pj["heading_fit_points"] = p.heading_fit_points;
  }
  if (p.ttc_threshold_ms != def.ttc_threshold_ms) pj["ttc_threshold_ms"] = p.ttc_threshold_ms;
  if (p.pet_threshold_ms != def.pet_threshold_ms) pj["pet_threshold_ms"] = p.pet_threshold_ms;
  if (p.react_time_s != def.react_time_s) pj["react_time_s"] = p.react_time_s;
  if (p.decel_max_ms2 != def.decel_max_ms2) pj["decel_max_ms2"] = p.decel_max_ms2;
  if (p.vehicle_length_car_m != def.vehicle_length_car_m) {
    pj["vehicle_length_car_m"] = p.vehicle_length_car_m;
  }
  if (p.vehicle_length_bus_m != def.vehicle_length_bus_m) {
    pj["vehicle_length_bus_m"] = p.vehicle_length_bus_m;
  }
  if (p.vehicle_length_truck_m != def.vehicle_length_truck_m) {
    pj["vehicle_length_truck_m"] = p.vehicle_length_truck_m;
  }
  if (p.vehicle_length_from_bbox != def.vehicle_length_from_bbox) {
    pj["vehicle_length_from_bbox"] = p.vehicle_length_from_bbox;
  }
  if (p.heat_cols != def.heat_cols) pj["heat_cols"] = p.heat_cols;
  if (p.heat_rows != def.heat_rows) pj["heat_rows"] = p.heat_rows;
  if (p.heat_band_ms != def.heat_band_ms) pj["heat_band_ms"] = p.heat_band_ms;
  if (p.low_variance_eps_ms != def.low_variance_eps_ms) {
    pj["low_variance_eps_ms"] = p.low_variance_eps_ms;
  }
  if (p.pce_car != def.pce_car) pj["pce_car"] = p.pce_car;
  if (p.pce_bus != def.pce_bus) pj["pce_bus"] = p.pce_bus;
  if (p.pce_truck != def.pce_truck) pj["pce_truck"] = p.pce_truck;
  if (p.bin_s != def.bin_s) pj["bin_s"] = p.bin_s;
  if (!p.tms_section.empty()) pj["tms_section"] = p.tms_section;
  if (p.los_density_bounds != def.los_density_bounds) {
    pj["los_density_bounds"] = p.los_density_bounds;
  }
  if (p.yolo_mode != def.yolo_mode) {
    pj["yolo_mode"] = p.yolo_mode == YoloMode::standard ? "standard" : "paper-exact";
  }
  if (p.class_index_car != def.class_index_car) pj["class_index_car"] = p.class_index_car;
  if (p.class_index_bus != def.class_index_bus) pj["class_index_bus"] = p.class_index_bus;
  if (p.class_index_truck != def.class_index_truck) pj["class_index_truck"] = p.class_index_truck;
  if (!pj.empty()) j["params"] = pj;

  return j.dump(2) + "\n";
}

void scene_set(SceneConfig & scene, const std::string & key, const std::string & value)
{
  const auto to_double = [&](const char * what) {
    try {
      size_t pos = 0;
      const double v = std::stod(value, &pos);
      if (pos != value.size()) throw std::invalid_argument(value);
      return v;
    } catch (const std::exception &) {
      throw_config(std::string(what) + " expects a number, got '" + value + "'");
    }
  };
  const auto to_int = [&](const char * what) {
    try {
      size_t pos = 0;
      const long v = std::stol(value, &pos);
      if (pos != value.size()) throw std::invalid_argument(value);
      return v;
    } catch (const std::exception &) {
      throw_config(std::string(what) + " expects an integer, got '" + value + "'");
    }
  };
  const auto to_bool = [&](const char * what) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw_config(std::string(what) + " expects true or false, got '" + value + "'");
  };

  if (key == "fps") {
    scene.fps = to_double("fps");
    if (!(scene.fps > 0.0)) throw_config("fps must be positive");
  } else if (key == "image_w") {
    scene.image_w = static_cast<int>(to_int("image_w"));
  } else if (key == "image_h") {
    scene.image_h = static_cast<int>(to_int("image_h"));
  } else if (key == "altitude_m") {
    scene.altitude_m = to_double("altitude_m");
  } else if (key == "camera.fov_diag_deg") {
    CameraModel cam = scene.camera.value_or(CameraModel{});
    cam.fov_diag_deg = to_double(key.c_str());
    scene.camera = cam;
  } else if (key == "scale.meters_per_px") {
    ScaleModel sc = scene.scale.value_or(ScaleModel{});
    sc.meters_per_px_ref = to_double(key.c_str());
    scene.scale = sc;
  } else if (key == "scale.reference_altitude_m") {
    ScaleModel sc = scene.scale.value_or(ScaleModel{});
    sc.reference_altitude_m = to_double(key.c_str());
    scene.scale = sc;
  } else if (key == "corridor.axis") {
    if (value == "ew") {
      scene.corridor.axis = Axis::ew;
    } else if (value == "ns") {
      scene.corridor.axis = Axis::ns;
    } else {
      throw_config("corridor.axis must be ew or ns");
    }
  } else if (key == "corridor.min_px") {
    scene.corridor.min_px = to_double(key.c_str());
  } else if (key == "corridor.max_px") {
    scene.corridor.max_px = to_double(key.c_str());
  } else if (key == "corridor.length_m") {
    scene.corridor.length_m = to_double(key.c_str());
  } else if (key.rfind("params.", 0) == 0) {
    const std::string name = key.substr(7);
    AnalysisParams & p = scene.params;
    if (name == "qaqc_in_frame") {
      p.qaqc_in_frame = to_bool(key.c_str());
    } else if (name == "qaqc_min_side_px") {
      p.qaqc_min_side_px = to_double(key.c_str());
    } else if (name == "qaqc_max_side_px") {
      p.qaqc_max_side_px = to_double(key.c_str());
    } else if (name == "qaqc_aspect_min") {
      p.qaqc_aspect_min = to_double(key.c_str());
    } else if (name == "qaqc_aspect_max") {
      p.qaqc_aspect_max = to_double(key.c_str());
    } else if (name == "qaqc_min_track_len") {
      p.qaqc_min_track_len = to_int(key.c_str());
    } else if (name == "stab_trigger_px") {
      p.stab_trigger_px = to_double(key.c_str());
    } else if (name == "stab_outlier_px") {
      p.stab_outlier_px = to_double(key.c_str());
    } else if (name == "stab_min_matched") {
      p.stab_min_matched = static_cast<int>(to_int(key.c_str()));
    } else if (name == "stab_dissent_frac") {
      p.stab_dissent_frac = to_double(key.c_str());
    } else if (name == "accel_window") {
      p.accel_window = static_cast<int>(to_int(key.c_str()));
    } else if (name == "smooth_centers") {
      p.smooth_centers = to_bool(key.c_str());
    } else if (name == "smooth_window") {
      p.smooth_window = static_cast<int>(to_int(key.c_str()));
    } else if (name == "min_kinematics_points") {
      p.min_kinematics_points = static_cast<int>(to_int(key.c_str()));
    } else if (name == "min_maneuver_points") {
      p.min_maneuver_points = static_cast<int>(to_int(key.c_str()));
    } else if (name == "dwell_frames") {
      p.dwell_frames = static_cast<int>(to_int(key.c_str()));
    } else if (name == "hysteresis_px") {
      p.hysteresis_px = to_double(key.c_str());
    } else if (name == "through_deg") {
      p.through_deg = to_double(key.c_str());
    } else if (name == "uturn_deg") {
      p.uturn_deg = to_double(key.c_str());
    } else if (name == "heading_fit_points") {
      p.heading_fit_points = static_cast<int>(to_int(key.c_str()));
    } else if (name == "ttc_threshold_ms") {
      p.ttc_threshold_ms = to_double(key.c_str());
    } else if (name == "pet_threshold_ms") {
      p.pet_threshold_ms = to_double(key.c_str());
    } else if (name == "react_time_s") {
      p.react_time_s = to_double(key.c_str());
    } else if (name == "decel_max_ms2") {
      p.decel_max_ms2 = to_double(key.c_str());
    } else if (name == "vehicle_length_car_m") {
      p.vehicle_length_car_m = to_double(key.c_str());
    } else if (name == "vehicle_length_bus_m") {
      p.vehicle_length_bus_m = to_double(key.c_str());
    } else if (name == "vehicle_length_truck_m") {
      p.vehicle_length_truck_m = to_double(key.c_str());
    } else if (name == "vehicle_length_from_bbox") {
      p.vehicle_length_from_bbox = to_bool(key.c_str());
    } else if (name == "heat_cols") {
      p.heat_cols = static_cast<int>(to_int(key.c_str()));
    } else if (name == "heat_rows") {
      p.heat_rows = static_cast<int>(to_int(key.c_str()));
    } else if (name == "heat_band_ms") {
      std::vector<double> bands;
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          bands.push_back(std::stod(item));
        } catch (const std::exception &) {
          throw_config("params.heat_band_ms expects comma-separated numbers");
        }
      }
      if (bands.empty()) throw_config("params.heat_band_ms expects comma-separated numbers");
      p.heat_band_ms = bands;
    } else if (name == "low_variance_eps_ms") {
      p.low_variance_eps_ms = to_double(key.c_str());
    } else if (name == "pce_car") {
      p.pce_car = to_double(key.c_str());
    } else if (name == "pce_bus") {
      p.pce_bus = to_double(key.c_str());
    } else if (name == "pce_truck") {
      p.pce_truck = to_double(key.c_str());
    } else if (name == "bin_s") {
      p.bin_s = to_double(key.c_str());
    } else if (name == "tms_section") {
      p.tms_section = value;
    } else if (name == "yolo_mode") {
      p.yolo_mode = as_yolo_mode(value, "params.yolo_mode");
    } else if (name == "class_index_car") {
      p.class_index_car = static_cast<int>(to_int(key.c_str()));
    } else if (name == "class_index_bus") {
      p.class_index_bus = static_cast<int>(to_int(key.c_str()));
    } else if (name == "class_index_truck") {
      p.class_index_truck = static_cast<int>(to_int(key.c_str()));
    } else {
      unknown_key("params", name);
    }
  } else {
    unknown_key("scene config", key);
  }
}

}  // namespace nadir
