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

// C interface of the nadir trajectory analytics library. All entry points
// return a status code; on failure nadir_last_error() describes the problem
// for the calling thread. Handles are opaque and single-threaded.

#ifndef NADIR__NADIR_H_
#define NADIR__NADIR_H_

#if defined(_WIN32)
#define NADIR_EXPORT __declspec(dllexport)
#else
#define NADIR_EXPORT __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nadir_status {
  NADIR_OK = 0,
  NADIR_ERR_IO = 1,
  NADIR_ERR_PARSE = 2,
  NADIR_ERR_CONFIG = 3,
  NADIR_ERR_INVALID = 4,
  NADIR_ERR_INTERNAL = 5
} nadir_status;

/* Scene description: camera, scale, regions, and analysis parameters. */
typedef struct nadir_scene nadir_scene;

/* A loaded set of per-frame detection records. Pipeline stages that clean
 * or correct the data mutate the dataset in place, so one handle can be
 * carried through qaqc -> stabilize -> analysis. */
typedef struct nadir_dataset nadir_dataset;

NADIR_EXPORT const char * nadir_version(void);

/* Message of the last failing call on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread. */
NADIR_EXPORT const char * nadir_last_error(void);

/* ---- scene ---- */

NADIR_EXPORT nadir_status nadir_scene_create(nadir_scene ** out_scene);
NADIR_EXPORT nadir_status nadir_scene_load(const char * json_path, nadir_scene ** out_scene);

/* Dotted keys: fps, image_w, image_h, altitude_m, camera.fov_diag_deg,
 * scale.meters_per_px / scale.reference_altitude_m, corridor.axis /
 * corridor.min_px / corridor.max_px / corridor.length_m, params.<name>.
 * Values are parsed from the string form. */
NADIR_EXPORT nadir_status nadir_scene_set(
  nadir_scene * scene, const char * key, const char * value);
NADIR_EXPORT nadir_status nadir_scene_to_json(nadir_scene * scene, const char * out_path);
NADIR_EXPORT void nadir_scene_free(nadir_scene * scene);

/* ---- dataset ---- */

NADIR_EXPORT nadir_status nadir_dataset_open_csv(const char * path, nadir_dataset ** out_dataset);
NADIR_EXPORT nadir_status nadir_dataset_write_csv(const nadir_dataset * dataset, const char * path);
NADIR_EXPORT nadir_status nadir_dataset_record_count(
  const nadir_dataset * dataset, long * out_count);
NADIR_EXPORT nadir_status nadir_dataset_trajectory_count(
  const nadir_dataset * dataset, const nadir_scene * scene, long * out_count);
NADIR_EXPORT void nadir_dataset_free(nadir_dataset * dataset);

/* ---- pipeline stages ---- */

/* Drop out-of-frame, malformed, and too-short records in place; write the
 * per-rule drop counts to report_csv_path when it is non-NULL. */
NADIR_EXPORT nadir_status nadir_run_qaqc(
  nadir_dataset * dataset, const nadir_scene * scene, const char * report_csv_path,
  long * out_kept, long * out_dropped);

/* Detect camera deflection events and subtract them in place; write the
 * event table to report_csv_path when non-NULL. */
NADIR_EXPORT nadir_status nadir_run_stabilize(
  nadir_dataset * dataset, const nadir_scene * scene, const char * report_csv_path,
  long * out_events);

/* Per-point speeds and accelerations for every track. */
NADIR_EXPORT nadir_status nadir_run_kinematics(
  const nadir_dataset * dataset, const nadir_scene * scene, const char * out_csv_path);

/* Turning movements, lane changes, and time-space series. Writes
 * movements.csv, turning_counts.csv, lane_changes.csv, tsd.csv, tsd.svg,
 * and lateral_offsets.svg into out_dir. */
NADIR_EXPORT nadir_status nadir_run_maneuvers(
  const nadir_dataset * dataset, const nadir_scene * scene, const char * out_dir);

/* Surrogate safety extraction. Writes conflicts.csv, safety_status.csv,
 * heatmap.csv, heatmap.svg, and pet_summary.csv into out_dir. */
NADIR_EXPORT nadir_status nadir_run_safety(
  const nadir_dataset * dataset, const nadir_scene * scene, const char * out_dir);

/* Intersection traffic metrics report as JSON. */
NADIR_EXPORT nadir_status nadir_run_metrics(
  const nadir_dataset * dataset, const nadir_scene * scene, const char * out_json_path);

/* Normalized per-frame label files for detector training. */
NADIR_EXPORT nadir_status nadir_export_yolo(
  const nadir_dataset * dataset, const nadir_scene * scene, const char * out_dir,
  long * out_files);

/* ---- synthetic scenarios ---- */

/* Renders a built-in preset name or a scenario JSON file (anything
 * containing a path separator or ending in .json is treated as a file).
 * Writes the tracking CSV and, when truth_csv_path is non-NULL, the ground
 * truth CSV. */
NADIR_EXPORT nadir_status nadir_synth_generate(
  const char * preset_or_json_path, const char * tracks_csv_path, const char * truth_csv_path);

/* Scene config JSON for a preset name or scenario JSON file, so the
 * generated tracks can be analyzed with the geometry they were built for. */
NADIR_EXPORT nadir_status nadir_synth_scene(
  const char * preset_or_json_path, const char * out_json_path);

/* Space-separated preset names; static storage. */
NADIR_EXPORT const char * nadir_synth_presets(void);

/* ---- validation ---- */

/* pairs CSV columns: id,v_video,v_trajectory (km/h). Writes the per-row
 * error table when out_csv_path is non-NULL. */
NADIR_EXPORT nadir_status nadir_validate_speeds_csv(
  const char * pairs_csv_path, const char * out_csv_path, double * out_mape, double * out_rmse);

/* ---- scalar primitives ---- */

/* out_yolo: {x_center, y_center, width, height}, fractions of the image. */
NADIR_EXPORT nadir_status nadir_bbox_to_yolo(
  double xmin, double ymin, double xmax, double ymax, long image_w, long image_h,
  int paper_exact, double out_yolo[4]);

/* out_bbox: {xmin, ymin, xmax, ymax} in pixels. */
NADIR_EXPORT nadir_status nadir_yolo_to_bbox(
  const double yolo[4], long image_w, long image_h, int paper_exact, double out_bbox[4]);

/* Ground rectangle under a nadir camera from the diagonal field of view. */
NADIR_EXPORT nadir_status nadir_ground_footprint(
  double fov_diag_deg, double altitude_m, long image_w, long image_h, double * out_diag_m,
  double * out_length_m, double * out_width_m);

NADIR_EXPORT nadir_status nadir_meters_per_pixel(const nadir_scene * scene, double * out_mpp);

/* Time to collision in milliseconds for a net gap (bumper to bumper) and
 * the two speeds: 0 when the gap is not positive, INFINITY when the
 * follower is not closing, NaN for non-finite input. */
NADIR_EXPORT double nadir_ttc_ms(double gap_m, double v_follower_ms, double v_leader_ms);

/* Reaction travel plus braking travel; negative on invalid input. */
NADIR_EXPORT double nadir_min_warning_distance_m(
  double speed_ms, double react_time_s, double decel_ms2);

#ifdef __cplusplus
}
#endif

#endif  // NADIR__NADIR_H_
