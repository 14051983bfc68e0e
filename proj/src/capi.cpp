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

#include "nadir/nadir.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "nadir/core.hpp"
#include "nadir/error.hpp"
#include "nadir/format.hpp"
#include "nadir/georef.hpp"
#include "nadir/ingest.hpp"
#include "nadir/kinematics.hpp"
#include "nadir/maneuvers.hpp"
#include "nadir/metrics.hpp"
#include "nadir/safety.hpp"
#include "nadir/scene.hpp"
#include "nadir/stabilize.hpp"
#include "nadir/svg.hpp"
#include "nadir/synth.hpp"

struct nadir_scene
{
  nadir::SceneConfig config;
};

struct nadir_dataset
{
  std::vector<nadir::DetectionRecord> records;
};

namespace
{

thread_local std::string g_last_error;

nadir_status status_of(const nadir::Error & e)
{
  switch (e.code()) {
    case nadir::ErrorCode::io:
      return NADIR_ERR_IO;
    case nadir::ErrorCode::parse:
      return NADIR_ERR_PARSE;
    case nadir::ErrorCode::config:
      return NADIR_ERR_CONFIG;
    case nadir::ErrorCode::invalid:
      return NADIR_ERR_INVALID;
  }
  return NADIR_ERR_INTERNAL;
}

template <typename Fn>
nadir_status guarded(Fn && fn)
{
  try {
    fn();
    return NADIR_OK;
  } catch (const nadir::Error & e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception & e) {
    g_last_error = e.what();
    return NADIR_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return NADIR_ERR_INTERNAL;
  }
}

void require(bool ok, const char * what)
{
  if (!ok) nadir::throw_invalid(what);
}

std::ofstream open_out(const std::string & path)
{
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) nadir::throw_io("cannot write '" + path + "'");
  return out;
}

std::vector<nadir::Trajectory> tracks_of(const nadir_dataset & ds, const nadir::SceneConfig & scene)
{
  return nadir::assemble_trajectories(ds.records, scene.fps);
}

std::map<long, std::vector<nadir::KinematicSample>> kinematics_of(
  const std::vector<nadir::Trajectory> & trajectories, const nadir::SceneConfig & scene)
{
  const double mpp = scene.meters_per_px();
  std::map<long, std::vector<nadir::KinematicSample>> out;
  for (const nadir::Trajectory & traj : trajectories) {
    auto samples = nadir::enrich_kinematics(traj, mpp, scene.fps, scene.params);
    if (!samples.empty()) out[traj.id] = std::move(samples);
  }
  return out;
}

/// Travel direction of one track along the corridor axis, by net
/// displacement.
nadir::TravelDir travel_of(const nadir::Trajectory & traj, nadir::Axis axis)
{
  const double first = nadir::longitudinal_of(traj.points.front().center, axis);
  const double last = nadir::longitudinal_of(traj.points.back().center, axis);
  if (axis == nadir::Axis::ew) {
    return last >= first ? nadir::TravelDir::east : nadir::TravelDir::west;
  }
  return last >= first ? nadir::TravelDir::south : nadir::TravelDir::north;
}

}  // namespace

extern "C" {

const char * nadir_version(void)
{
  return "0.1.0";
}

const char * nadir_last_error(void)
{
  return g_last_error.c_str();
}

nadir_status nadir_scene_create(nadir_scene ** out_scene)
{
  return guarded([&] {
    require(out_scene != nullptr, "out_scene is NULL");
    *out_scene = new nadir_scene{};
  });
}

nadir_status nadir_scene_load(const char * json_path, nadir_scene ** out_scene)
{
  return guarded([&] {
    require(json_path != nullptr, "json_path is NULL");
    require(out_scene != nullptr, "out_scene is NULL");
    auto config = nadir::scene_from_json_file(json_path);
    *out_scene = new nadir_scene{std::move(config)};
  });
}

nadir_status nadir_scene_set(nadir_scene * scene, const char * key, const char * value)
{
  return guarded([&] {
    require(scene != nullptr, "scene is NULL");
    require(key != nullptr, "key is NULL");
    require(value != nullptr, "value is NULL");
    nadir::scene_set(scene->config, key, value);
  });
}

nadir_status nadir_scene_to_json(nadir_scene * scene, const char * out_path)
{
  return guarded([&] {
    require(scene != nullptr, "scene is NULL");
    require(out_path != nullptr, "out_path is NULL");
    auto out = open_out(out_path);
    out << nadir::scene_to_json_text(scene->config);
  });
}

void nadir_scene_free(nadir_scene * scene)
{
  delete scene;
}

nadir_status nadir_dataset_open_csv(const char * path, nadir_dataset ** out_dataset)
{
  return guarded([&] {
    require(path != nullptr, "path is NULL");
    require(out_dataset != nullptr, "out_dataset is NULL");
    auto records = nadir::parse_tracking_csv_file(path);
    *out_dataset = new nadir_dataset{std::move(records)};
  });
}

nadir_status nadir_dataset_write_csv(const nadir_dataset * dataset, const char * path)
{
  return guarded([&] {
    require(dataset != nullptr, "dataset is NULL");
    require(path != nullptr, "path is NULL");
    auto out = open_out(path);
    nadir::emit_tracking_csv(out, dataset->records);
  });
}

nadir_status nadir_dataset_record_count(const nadir_dataset * dataset, long * out_count)
{
  return guarded([&] {
    require(dataset != nullptr, "dataset is NULL");
    require(out_count != nullptr, "out_count is NULL");
    *out_count = static_cast<long>(dataset->records.size());
  });
}

nadir_status nadir_dataset_trajectory_count(
  const nadir_dataset * dataset, const nadir_scene * scene, long * out_count)
{
  return guarded([&] {
    require(dataset != nullptr, "dataset is NULL");
    require(scene != nullptr, "scene is NULL");
    require(out_count != nullptr, "out_count is NULL");
    *out_count = static_cast<long>(tracks_of(*dataset, scene->config).size());
  });
}

void nadir_dataset_free(nadir_dataset * dataset)
{
  delete dataset;
}

nadir_status nadir_run_qaqc(
  nadir_dataset * dataset, const nadir_scene * scene, const char * report_csv_path,
  long * out_kept, long * out_dropped)
{
  return guarded([&] {
    require(dataset != nullptr, "dataset is NULL");
    require(scene != nullptr, "scene is NULL");
    const nadir::SceneConfig & config = scene->config;
    auto result = nadir::qaqc_filter(
      dataset->records, config.image_w, config.image_h,
      nadir::QaqcRules::from_params(config.params));
    if (report_csv_path != nullptr) {
      auto out = open_out(report_csv_path);
      nadir::emit_qaqc_report(out, result.report);
    }
    if (out_kept != nullptr) *out_kept = result.report.kept;
    if (out_dropped != nullptr) *out_dropped = result.report.dropped_total();
    dataset->records = std::move(result.kept);
  });
}

nadir_status nadir_run_stabilize(
  nadir_dataset * dataset, const nadir_scene * scene, const char * report_csv_path,
  long * out_events)
{
  return guarded([&] {
    require(dataset != nullptr, "dataset is NULL");
    require(scene != nullptr, "scene is NULL");
    const nadir::SceneConfig & config = scene->config;
    const auto trajectories = tracks_of(*dataset, config);
    const auto events = nadir::detect_deflections(
      trajectories, nadir::StabilizeParams::from_params(config.params));
    if (report_csv_path != nullptr) {
      auto out = open_out(report_csv_path);
      nadir::emit_deflection_csv(out, events);
    }
    if (out_events != nullptr) *out_events = static_cast<long>(events.size());
    const auto corrected =
      nadir::apply_correction(trajectories, events, config.image_w, config.image_h);
    dataset->records = nadir::flatten_trajectories(corrected);
  });
}

nadir_status nadir_run_kinematics(
  const nadir_dataset * dataset, const nadir_scene * scene, const char * out_csv_path)
{
  return guarded([&] {
    require(dataset != nullptr, "dataset is NULL");
    require(scene != nullptr, "scene is NULL");
    require(out_csv_path != nullptr, "out_csv_path is NULL");
    const auto trajectories = tracks_of(*dataset, scene->config);
    const auto kinematics = kinematics_of(trajectories, scene->config);
    auto out = open_out(out_csv_path);
    nadir::emit_kinematics_csv(out, kinematics);
  });
}

nadir_status nadir_run_maneuvers(
  const nadir_dataset * dataset, const nadir_scene * scene, const char * out_dir)
{
  return guarded([&] {
    require(dataset != nullptr, "dataset is NULL");
    require(scene != nullptr, "scene is NULL");
    require(out_dir != nullptr, "out_dir is NULL");
    const nadir::SceneConfig & config = scene->config;
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);

    const auto trajectories = tracks_of(*dataset, config);
    const auto kinematics = kinematics_of(trajectories, config);

    std::vector<nadir::TurningMovement> movements;
    for (const nadir::Trajectory & traj : trajectories) {
      const auto movement = nadir::classify_turn(traj, config);
      if (movement) movements.push_back(*movement);
    }
    {
      auto out = open_out((dir / "movements.csv").string());
      nadir::emit_movements_csv(out, movements);
    }
    {
      auto out = open_out((dir / "turning_counts.csv").string());
      nadir::emit_turning_csv(
        out, nadir::count_turns(movements, config, static_cast<long>(trajectories.size())));
    }

    std::vector<nadir::LaneChangeEvent> lane_changes;
    std::map<long, std::vector<nadir::LateralSample>> lateral_series;
    if (!config.lane_models.empty()) {
      const nadir::LaneModel & first_model = config.lane_models.begin()->second;
      for (const nadir::Trajectory & traj : trajectories) {
        for (const auto & [model_name, model] : config.lane_models) {
          (void)model_name;
          const auto series = nadir::lateral_offset_series(traj, model);
          const auto kin = kinematics.find(traj.id);
          if (kin == kinematics.end()) continue;
          const auto events =
            nadir::detect_lane_changes(traj, kin->second, model, config.params);
          lane_changes.insert(lane_changes.end(), events.begin(), events.end());
          if (&model == &first_model) lateral_series[traj.id] = series;
        }
      }
    }
    {
      auto out = open_out((dir / "lane_changes.csv").string());
      nadir::emit_lane_change_csv(out, lane_changes);
    }
    {
      auto out = open_out((dir / "lateral_offsets.svg").string());
      const nadir::LaneModel empty_model;
      nadir::write_lateral_svg(
        out, lateral_series,
        config.lane_models.empty() ? empty_model : config.lane_models.begin()->second);
    }

    std::map<long, std::vector<nadir::TsdPoint>> tsd;
    for (const nadir::Trajectory & traj : trajectories) {
      if (traj.points.empty()) continue;
      const auto dir_of = travel_of(traj, config.corridor.axis);
      tsd[traj.id] = nadir::time_space_series(traj, config, dir_of);
    }
    {
      std::vector<nadir::TsdPoint> flat;
      for (const auto & [id, points] : tsd) {
        (void)id;
        flat.insert(flat.end(), points.begin(), points.end());
      }
      auto out = open_out((dir / "tsd.csv").string());
      nadir::emit_tsd_csv(out, flat);
    }
    {
      auto out = open_out((dir / "tsd.svg").string());
      nadir::write_tsd_svg(out, tsd);
    }
  });
}

nadir_status nadir_run_safety(
  const nadir_dataset * dataset, const nadir_scene * scene, const char * out_dir)
{
  return guarded([&] {
    require(dataset != nullptr, "dataset is NULL");
    require(scene != nullptr, "scene is NULL");
    require(out_dir != nullptr, "out_dir is NULL");
    const nadir::SceneConfig & config = scene->config;
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);

    const auto trajectories = tracks_of(*dataset, config);
    const auto kinematics = kinematics_of(trajectories, config);
    const auto result = nadir::extract_conflicts(trajectories, kinematics, config);
    {
      auto out = open_out((dir / "conflicts.csv").string());
      nadir::emit_conflicts_csv(out, result.events);
    }
    {
      auto out = open_out((dir / "safety_status.csv").string());
      nadir::emit_safety_status_csv(out, result.status);
    }
    const auto cells = nadir::conflict_heatmap(result.events, config);
    {
      auto out = open_out((dir / "heatmap.csv").string());
      nadir::emit_heatmap_csv(out, cells);
    }
    {
      auto out = open_out((dir / "heatmap.svg").string());
      nadir::write_heatmap_svg(out, cells, config);
    }
    {
      const auto summary = nadir::summarize_pet(result.events);
      auto out = open_out((dir / "pet_summary.csv").string());
      out << "total,below_1000,percent\n";
      out << summary.total << ',' << summary.below << ',' << summary.percent_text << '\n';
    }
  });
}

nadir_status nadir_run_metrics(
  const nadir_dataset * dataset, const nadir_scene * scene, const char * out_json_path)
{
  return guarded([&] {
    require(dataset != nullptr, "dataset is NULL");
    require(scene != nullptr, "scene is NULL");
    require(out_json_path != nullptr, "out_json_path is NULL");
    const auto trajectories = tracks_of(*dataset, scene->config);
    const auto kinematics = kinematics_of(trajectories, scene->config);
    const auto report = nadir::build_intersection_report(trajectories, kinematics, scene->config);
    auto out = open_out(out_json_path);
    out << nadir::report_to_json(report, scene->config);
  });
}

nadir_status nadir_export_yolo(
  const nadir_dataset * dataset, const nadir_scene * scene, const char * out_dir, long * out_files)
{
  return guarded([&] {
    require(dataset != nullptr, "dataset is NULL");
    require(scene != nullptr, "scene is NULL");
    require(out_dir != nullptr, "out_dir is NULL");
    const long files = nadir::export_yolo_labels(dataset->records, scene->config, out_dir);
    if (out_files != nullptr) *out_files = files;
  });
}

nadir_status nadir_synth_generate(
  const char * preset_or_json_path, const char * tracks_csv_path, const char * truth_csv_path)
{
  return guarded([&] {
    require(preset_or_json_path != nullptr, "preset_or_json_path is NULL");
    require(tracks_csv_path != nullptr, "tracks_csv_path is NULL");
    const std::string spec(preset_or_json_path);
    const bool is_file = spec.find('/') != std::string::npos ||
                         spec.find('\\') != std::string::npos ||
                         (spec.size() > 5 && spec.rfind(".json") == spec.size() - 5);
    const nadir::Scenario scenario =
      is_file ? nadir::scenario_from_json_file(spec) : nadir::make_preset(spec);
    const nadir::SynthResult result = nadir::generate(scenario);
    nadir::emit_tracking_csv_file(tracks_csv_path, result.records);
    if (truth_csv_path != nullptr) {
      auto out = open_out(truth_csv_path);
      nadir::write_truth_csv(out, result);
    }
  });
}

nadir_status nadir_synth_scene(const char * preset_or_json_path, const char * out_json_path)
{
  return guarded([&] {
    require(preset_or_json_path != nullptr, "preset_or_json_path is NULL");
    require(out_json_path != nullptr, "out_json_path is NULL");
    const std::string spec(preset_or_json_path);
    const bool is_file = spec.find('/') != std::string::npos ||
                         spec.find('\\') != std::string::npos ||
                         (spec.size() > 5 && spec.rfind(".json") == spec.size() - 5);
    const nadir::Scenario scenario =
      is_file ? nadir::scenario_from_json_file(spec) : nadir::make_preset(spec);
    auto out = open_out(out_json_path);
    out << nadir::scene_to_json_text(scenario.scene);
  });
}

const char * nadir_synth_presets(void)
{
  static const std::string names = [] {
    std::string joined;
    for (const std::string & name : nadir::preset_names()) {
      if (!joined.empty()) joined += ' ';
      joined += name;
    }
    return joined;
  }();
  return names.c_str();
}

nadir_status nadir_validate_speeds_csv(
  const char * pairs_csv_path, const char * out_csv_path, double * out_mape, double * out_rmse)
{
  return guarded([&] {
    require(pairs_csv_path != nullptr, "pairs_csv_path is NULL");
    std::ifstream in(pairs_csv_path);
    if (!in) nadir::throw_io("cannot open '" + std::string(pairs_csv_path) + "'");

    std::string line;
    if (!std::getline(in, line)) {
      nadir::throw_parse(std::string(pairs_csv_path) + ": empty file");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::map<std::string, size_t> columns;
    {
      std::istringstream header(line);
      std::string name;
      size_t idx = 0;
      while (std::getline(header, name, ',')) columns[name] = idx++;
    }
    for (const char * needed : {"id", "v_video", "v_trajectory"}) {
      if (columns.find(needed) == columns.end()) {
        nadir::throw_parse(
          std::string(pairs_csv_path) + ": missing column '" + needed + "'");
      }
    }

    std::vector<std::tuple<long, double, double>> pairs;
    long line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<std::string> fields;
      std::istringstream row(line);
      std::string field;
      while (std::getline(row, field, ',')) fields.push_back(field);
      if (fields.size() < columns.size()) {
        nadir::throw_parse(
          std::string(pairs_csv_path) + ":" + std::to_string(line_no) + ": too few fields");
      }
      try {
        pairs.emplace_back(
          std::stol(fields[columns.at("id")]), std::stod(fields[columns.at("v_video")]),
          std::stod(fields[columns.at("v_trajectory")]));
      } catch (const std::exception &) {
        nadir::throw_parse(
          std::string(pairs_csv_path) + ":" + std::to_string(line_no) + ": bad number");
      }
    }

    const nadir::SpeedValidation validation = nadir::validate_speeds(pairs);
    if (out_csv_path != nullptr) {
      auto out = open_out(out_csv_path);
      nadir::emit_validation_csv(out, validation);
    }
    if (out_mape != nullptr) *out_mape = validation.mape;
    if (out_rmse != nullptr) *out_rmse = validation.rmse;
  });
}

nadir_status nadir_bbox_to_yolo(
  double xmin, double ymin, double xmax, double ymax, long image_w, long image_h, int paper_exact,
  double out_yolo[4])
{
  return guarded([&] {
    require(out_yolo != nullptr, "out_yolo is NULL");
    const nadir::BBox box{xmin, ymin, xmax, ymax};
    const auto yolo = nadir::bbox_to_yolo(
      box, static_cast<int>(image_w), static_cast<int>(image_h),
      paper_exact ? nadir::YoloMode::paper_exact : nadir::YoloMode::standard);
    out_yolo[0] = yolo.x_center;
    out_yolo[1] = yolo.y_center;
    out_yolo[2] = yolo.width;
    out_yolo[3] = yolo.height;
  });
}

nadir_status nadir_yolo_to_bbox(
  const double yolo[4], long image_w, long image_h, int paper_exact, double out_bbox[4])
{
  return guarded([&] {
    require(yolo != nullptr, "yolo is NULL");
    require(out_bbox != nullptr, "out_bbox is NULL");
    const nadir::YoloBox y{yolo[0], yolo[1], yolo[2], yolo[3]};
    const auto box = nadir::yolo_to_bbox(
      y, static_cast<int>(image_w), static_cast<int>(image_h),
      paper_exact ? nadir::YoloMode::paper_exact : nadir::YoloMode::standard);
    out_bbox[0] = box.xmin;
    out_bbox[1] = box.ymin;
    out_bbox[2] = box.xmax;
    out_bbox[3] = box.ymax;
  });
}

nadir_status nadir_ground_footprint(
  double fov_diag_deg, double altitude_m, long image_w, long image_h, double * out_diag_m,
  double * out_length_m, double * out_width_m)
{
  return guarded([&] {
    const auto footprint = nadir::ground_footprint(
      nadir::CameraModel{fov_diag_deg}, static_cast<int>(image_w), static_cast<int>(image_h),
      altitude_m);
    if (out_diag_m != nullptr) *out_diag_m = footprint.diagonal_m;
    if (out_length_m != nullptr) *out_length_m = footprint.length_m;
    if (out_width_m != nullptr) *out_width_m = footprint.width_m;
  });
}

nadir_status nadir_meters_per_pixel(const nadir_scene * scene, double * out_mpp)
{
  return guarded([&] {
    require(scene != nullptr, "scene is NULL");
    require(out_mpp != nullptr, "out_mpp is NULL");
    *out_mpp = scene->config.meters_per_px();
  });
}

double nadir_ttc_ms(double gap_m, double v_follower_ms, double v_leader_ms)
{
  if (!std::isfinite(gap_m) || !std::isfinite(v_follower_ms) || !std::isfinite(v_leader_ms)) {
    return std::nan("");
  }
  if (gap_m <= 0.0) return 0.0;
  const double closing = v_follower_ms - v_leader_ms;
  if (closing <= 0.0) return INFINITY;
  return gap_m / closing * 1000.0;
}

double nadir_min_warning_distance_m(double speed_ms, double react_time_s, double decel_ms2)
{
  if (!(speed_ms >= 0.0) || !(react_time_s >= 0.0) || !(decel_ms2 > 0.0)) return -1.0;
  return speed_ms * react_time_s + speed_ms * speed_ms / (2.0 * decel_ms2);
}

}  // extern "C"
