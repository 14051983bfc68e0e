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

#ifndef NADIR__SCENE_HPP_
#define NADIR__SCENE_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nadir/core.hpp"
#include "nadir/geometry.hpp"
#include "nadir/georef.hpp"

namespace nadir
{

enum class TravelDir { east, west, north, south };

const char * to_string(TravelDir dir);
std::optional<TravelDir> travel_dir_from_string(std::string_view name);
Axis axis_of(TravelDir dir);

enum class YoloMode { standard, paper_exact };

/// Named entry/exit region of the intersection, with the direction group
/// its counts roll up into (e.g. "west_east" for both east and west legs).
struct ApproachRegion
{
  Polygon polygon;
  std::string group;
};

/// Corridor used for transit speeds and time-space diagrams: two virtual
/// lines perpendicular to the axis, `length_m` meters apart.
struct Corridor
{
  Axis axis = Axis::ew;
  double min_px = 0.0;
  double max_px = 1920.0;
  double length_m = 160.6;
};

/// Ordered lane boundaries for one carriageway. boundaries[i] and
/// boundaries[i+1] enclose lane i+1; lanes are indexed from 1 at the first
/// listed boundary. Boundary polylines must be monotone along the axis.
struct LaneModel
{
  Axis axis = Axis::ew;
  TravelDir travel = TravelDir::east;
  std::vector<Polyline> boundaries;

  int lane_count() const { return static_cast<int>(boundaries.size()) - 1; }
};

/// Knobs for every analysis stage, with the stage defaults baked in.
struct AnalysisParams
{
  // QA/QC
  bool qaqc_in_frame = true;
  double qaqc_min_side_px = 4.0;
  double qaqc_max_side_px = 400.0;
  double qaqc_aspect_min = 0.2;
  double qaqc_aspect_max = 5.0;
  long qaqc_min_track_len = 2;

  // Stabilization
  double stab_trigger_px = 1.0;
  double stab_outlier_px = 40.0;
  int stab_min_matched = 3;
  double stab_dissent_frac = 0.1;

  // Kinematics
  int accel_window = 15;
  bool smooth_centers = false;
  int smooth_window = 5;
  int min_kinematics_points = 2;

  // Maneuvers
  int min_maneuver_points = 15;
  int dwell_frames = 15;
  double hysteresis_px = 0.0;  // 0 selects half the local lane width
  double through_deg = 30.0;
  double uturn_deg = 150.0;
  int heading_fit_points = 15;

  // Safety
  double ttc_threshold_ms = 2000.0;
  double pet_threshold_ms = 1500.0;
  double react_time_s = 2.5;
  double decel_max_ms2 = 3.4;
  double vehicle_length_car_m = 4.5;
  double vehicle_length_bus_m = 11.0;
  double vehicle_length_truck_m = 8.0;
  bool vehicle_length_from_bbox = false;
  int heat_cols = 32;
  int heat_rows = 18;
  std::vector<double> heat_band_ms = {1000.0, 2000.0, 3000.0, 4000.0};
  double low_variance_eps_ms = 1.0;

  // Traffic metrics
  double pce_car = 1.0;
  double pce_bus = 2.0;
  double pce_truck = 1.5;
  double bin_s = 900.0;
  std::string tms_section;  // empty: spot speeds from every section
  // Density upper bounds (pcu/km) for levels A..E; F above the last bound.
  std::vector<double> los_density_bounds = {10.0, 20.0, 32.0, 52.0, 67.0};

  // Annotation
  YoloMode yolo_mode = YoloMode::standard;
  int class_index_car = 0;
  int class_index_bus = 1;
  int class_index_truck = 2;

  double vehicle_length_m(VehicleClass cls) const;
  int class_index(VehicleClass cls) const;
  double pce(VehicleClass cls) const;
};

/// Everything the pipeline needs to know about one recording site.
/// Defaults describe a 1920x1080, 30 fps nadir video at 120 m with the
/// stock scale calibration; geometry maps start empty.
struct SceneConfig
{
  double fps = 30.0;
  int image_w = 1920;
  int image_h = 1080;
  double altitude_m = 120.0;

  std::optional<CameraModel> camera;
  // Explicit calibration wins over the camera-derived scale when both are
  // configured; when neither is, the stock ScaleModel applies.
  std::optional<ScaleModel> scale;

  Corridor corridor;
  std::map<std::string, ApproachRegion> approaches;
  std::map<std::string, LaneModel> lane_models;
  std::map<std::string, Segment> sections;
  std::map<std::string, Polygon> conflict_zones;

  AnalysisParams params;

  double meters_per_px() const;
};

SceneConfig scene_from_json_text(const std::string & json_text);
SceneConfig scene_from_json_file(const std::string & path);
std::string scene_to_json_text(const SceneConfig & scene);

/// Set one field by dotted key, e.g. "fps", "altitude_m",
/// "params.ttc_threshold_ms", "params.yolo_mode". Unknown keys or
/// unparseable values raise config errors.
void scene_set(SceneConfig & scene, const std::string & key, const std::string & value);

}  // namespace nadir

#endif  // NADIR__SCENE_HPP_
