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

#ifndef NADIR__INGEST_HPP_
#define NADIR__INGEST_HPP_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nadir/core.hpp"
#include "nadir/scene.hpp"

namespace nadir
{

/// Read tracker output. The header must name at least
/// frame_num,id,name,xmin,ymin,xmax,ymax; column order is free and extra
/// columns (speed, acceleration, ...) are ignored. Errors carry the
/// offending line number.
std::vector<DetectionRecord> parse_tracking_csv(std::istream & in, const std::string & source);
std::vector<DetectionRecord> parse_tracking_csv_file(const std::string & path);

/// Write records in the canonical column order. parse(emit(x)) == x.
void emit_tracking_csv(std::ostream & out, const std::vector<DetectionRecord> & records);
void emit_tracking_csv_file(const std::string & path, const std::vector<DetectionRecord> & records);

struct QaqcRules
{
  bool require_in_frame = true;
  double min_side_px = 4.0;
  double max_side_px = 400.0;
  double aspect_min = 0.2;
  double aspect_max = 5.0;
  long min_track_len = 2;

  static QaqcRules from_params(const AnalysisParams & p);
};

struct QaqcReport
{
  long kept = 0;
  // Keyed by rule name in application order: out_of_frame, too_small,
  // too_large, bad_aspect, short_track.
  std::map<std::string, long> dropped;

  long dropped_total() const;
};

struct QaqcResult
{
  std::vector<DetectionRecord> kept;
  QaqcReport report;
};

/// Drop records violating the box rules, then tracks shorter than
/// min_track_len. kept + dropped partitions the input; a second pass over
/// the survivors drops nothing.
QaqcResult qaqc_filter(
  const std::vector<DetectionRecord> & records, int image_w, int image_h,
  const QaqcRules & rules);

void emit_qaqc_report(std::ostream & out, const QaqcReport & report);

/// Normalized YOLO box. All fields are fractions of the image size;
/// width/height are in (0, 1], centers in [0, 1].
struct YoloBox
{
  double x_center = 0.0;
  double y_center = 0.0;
  double width = 0.0;
  double height = 0.0;
};

/// standard: x = cx / image_w. paper_exact additionally shifts the center
/// by one pixel (x = (cx - 1) / image_w), reproducing the reference
/// converter bit for bit.
YoloBox bbox_to_yolo(const BBox & box, int image_w, int image_h, YoloMode mode);

/// Inverse of bbox_to_yolo. Degenerate (non-positive width/height) or
/// out-of-image results are errors.
BBox yolo_to_bbox(const YoloBox & y, int image_w, int image_h, YoloMode mode);

/// One label file per frame, named <frame zero-padded to 6>.txt, lines
/// "class x_center y_center width height" with 6-decimal fields.
/// Returns the number of files written.
long export_yolo_labels(
  const std::vector<DetectionRecord> & records, const SceneConfig & scene,
  const std::string & out_dir);

std::string yolo_label_line(int class_index, const YoloBox & box);

}  // namespace nadir

#endif  // NADIR__INGEST_HPP_
