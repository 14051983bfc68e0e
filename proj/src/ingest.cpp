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

#include "nadir/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nadir/error.hpp"
#include "nadir/format.hpp"

namespace nadir
{

namespace
{

std::vector<std::string> split_csv_line(const std::string & line)
{
  std::vector<std::string> fields;
  std::string field;
  for (const char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  for (std::string & f : fields) {
    const size_t b = f.find_first_not_of(" \t");
    const size_t e = f.find_last_not_of(" \t");
    f = (b == std::string::npos) ? std::string() : f.substr(b, e - b + 1);
  }
  return fields;
}

double parse_double_field(const std::string & s, const std::string & what, long line_no)
{
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw_parse("line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
  }
  return v;
}

long parse_long_field(const std::string & s, const std::string & what, long line_no)
{
  long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw_parse("line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<DetectionRecord> parse_tracking_csv(std::istream & in, const std::string & source)
{
  std::string line;
  if (!std::getline(in, line)) throw_parse(source + ": empty file");
  const std::vector<std::string> header = split_csv_line(line);

  std::map<std::string, size_t> columns;
  for (size_t i = 0; i < header.size(); ++i) columns[header[i]] = i;
  const char * required[] = {"frame_num", "id", "name", "xmin", "ymin", "xmax", "ymax"};
  size_t idx[7] = {};
  for (size_t i = 0; i < 7; ++i) {
    const auto it = columns.find(required[i]);
    if (it == columns.end()) {
      throw_parse(source + ": header is missing column '" + std::string(required[i]) + "'");
    }
    idx[i] = it->second;
  }

  std::vector<DetectionRecord> records;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() < header.size()) {
      throw_parse(
        source + ": line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
        " fields, expected " + std::to_string(header.size()));
    }
    DetectionRecord r;
    r.frame_num = parse_long_field(fields[idx[0]], "frame_num", line_no);
    r.id = parse_long_field(fields[idx[1]], "id", line_no);
    const auto cls = vehicle_class_from_string(fields[idx[2]]);
    if (!cls) {
      throw_parse(
        source + ": line " + std::to_string(line_no) + ": unknown vehicle class '" +
        fields[idx[2]] + "'");
    }
    r.cls = *cls;
    r.bbox.xmin = parse_double_field(fields[idx[3]], "xmin", line_no);
    r.bbox.ymin = parse_double_field(fields[idx[4]], "ymin", line_no);
    r.bbox.xmax = parse_double_field(fields[idx[5]], "xmax", line_no);
    r.bbox.ymax = parse_double_field(fields[idx[6]], "ymax", line_no);
    if (r.frame_num < 0) {
      throw_parse(source + ": line " + std::to_string(line_no) + ": negative frame_num");
    }
    if (!r.bbox.valid()) {
      throw_parse(
        source + ": line " + std::to_string(line_no) +
        ": box must satisfy 0 <= xmin < xmax and 0 <= ymin < ymax with finite values");
    }
    records.push_back(r);
  }
  return records;
}

std::vector<DetectionRecord> parse_tracking_csv_file(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw_io("cannot open tracking csv: " + path);
  return parse_tracking_csv(in, path);
}

void emit_tracking_csv(std::ostream & out, const std::vector<DetectionRecord> & records)
{
  out << "frame_num,id,name,xmin,ymin,xmax,ymax\n";
  for (const DetectionRecord & r : records) {
    out << r.frame_num << ',' << r.id << ',' << to_string(r.cls) << ','
        << format_double(r.bbox.xmin) << ',' << format_double(r.bbox.ymin) << ','
        << format_double(r.bbox.xmax) << ',' << format_double(r.bbox.ymax) << '\n';
  }
}

void emit_tracking_csv_file(const std::string & path, const std::vector<DetectionRecord> & records)
{
  std::ofstream out(path);
  if (!out) throw_io("cannot write tracking csv: " + path);
  emit_tracking_csv(out, records);
}

QaqcRules QaqcRules::from_params(const AnalysisParams & p)
{
  QaqcRules r;
  r.require_in_frame = p.qaqc_in_frame;
  r.min_side_px = p.qaqc_min_side_px;
  r.max_side_px = p.qaqc_max_side_px;
  r.aspect_min = p.qaqc_aspect_min;
  r.aspect_max = p.qaqc_aspect_max;
  r.min_track_len = p.qaqc_min_track_len;
  return r;
}

long QaqcReport::dropped_total() const
{
  long total = 0;
  for (const auto & [rule, n] : dropped) total += n;
  return total;
}

QaqcResult qaqc_filter(
  const std::vector<DetectionRecord> & records, int image_w, int image_h, const QaqcRules & rules)
{
  QaqcResult result;
  QaqcReport & report = result.report;
  report.dropped["out_of_frame"] = 0;
  report.dropped["too_small"] = 0;
  report.dropped["too_large"] = 0;
  report.dropped["bad_aspect"] = 0;
  report.dropped["short_track"] = 0;

  std::vector<DetectionRecord> survivors;
  survivors.reserve(records.size());
  for (const DetectionRecord & r : records) {
    const double w = r.bbox.width();
    const double h = r.bbox.height();
    if (
      rules.require_in_frame &&
      (r.bbox.xmin < 0.0 || r.bbox.ymin < 0.0 || r.bbox.xmax > image_w || r.bbox.ymax > image_h)) {
      report.dropped["out_of_frame"] += 1;
      continue;
    }
    if (w < rules.min_side_px || h < rules.min_side_px) {
      report.dropped["too_small"] += 1;
      continue;
    }
    if (w > rules.max_side_px || h > rules.max_side_px) {
      report.dropped["too_large"] += 1;
      continue;
    }
    const double aspect = w / h;
    if (aspect < rules.aspect_min || aspect > rules.aspect_max) {
      report.dropped["bad_aspect"] += 1;
      continue;
    }
    survivors.push_back(r);
  }

  std::map<long, long> track_len;
  for (const DetectionRecord & r : survivors) track_len[r.id] += 1;
  for (const DetectionRecord & r : survivors) {
    if (track_len[r.id] < rules.min_track_len) {
      report.dropped["short_track"] += 1;
    } else {
      result.kept.push_back(r);
    }
  }
  report.kept = static_cast<long>(result.kept.size());
  return result;
}

void emit_qaqc_report(std::ostream & out, const QaqcReport & report)
{
  out << "metric,count\n";
  out << "kept," << report.kept << '\n';
  for (const char * rule : {"out_of_frame", "too_small", "too_large", "bad_aspect", "short_track"}) {
    const auto it = report.dropped.find(rule);
    out << "dropped_" << rule << ',' << (it == report.dropped.end() ? 0 : it->second) << '\n';
  }
}

YoloBox bbox_to_yolo(const BBox & box, int image_w, int image_h, YoloMode mode)
{
  if (image_w <= 0 || image_h <= 0) throw_invalid("bbox_to_yolo: image size must be positive");
  if (!box.valid()) throw_invalid("bbox_to_yolo: degenerate box");
  if (box.xmax > image_w || box.ymax > image_h) {
    throw_invalid("bbox_to_yolo: box extends past the image");
  }
  const double shift = (mode == YoloMode::paper_exact) ? 1.0 : 0.0;
  YoloBox y;
  y.x_center = ((box.xmin + box.xmax) / 2.0 - shift) / image_w;
  y.y_center = ((box.ymin + box.ymax) / 2.0 - shift) / image_h;
  y.width = (box.xmax - box.xmin) / image_w;
  y.height = (box.ymax - box.ymin) / image_h;
  return y;
}

BBox yolo_to_bbox(const YoloBox & y, int image_w, int image_h, YoloMode mode)
{
  if (image_w <= 0 || image_h <= 0) throw_invalid("yolo_to_bbox: image size must be positive");
  if (!(y.width > 0.0) || !(y.height > 0.0)) {
    throw_invalid("yolo_to_bbox: width and height must be positive");
  }
  const double shift = (mode == YoloMode::paper_exact) ? 1.0 : 0.0;
  const double cx = y.x_center * image_w + shift;
  const double cy = y.y_center * image_h + shift;
  const double w = y.width * image_w;
  const double h = y.height * image_h;
  BBox box{cx - w / 2.0, cy - h / 2.0, cx + w / 2.0, cy + h / 2.0};
  // Small slack absorbs round-trips through 6-decimal label files.
  const double eps = 1e-6 * std::max(image_w, image_h);
  if (box.xmin < -eps || box.ymin < -eps || box.xmax > image_w + eps || box.ymax > image_h + eps) {
    throw_invalid("yolo_to_bbox: resulting box falls outside the image");
  }
  box.xmin = std::max(box.xmin, 0.0);
  box.ymin = std::max(box.ymin, 0.0);
  return box;
}

std::string yolo_label_line(int class_index, const YoloBox & box)
{
  std::string line = std::to_string(class_index);
  for (const double v : {box.x_center, box.y_center, box.width, box.height}) {
    line += ' ';
    line += format_fixed(v, 6);
  }
  return line;
}

long export_yolo_labels(
  const std::vector<DetectionRecord> & records, const SceneConfig & scene,
  const std::string & out_dir)
{
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw_io("cannot create label directory: " + out_dir);

  std::map<long, std::vector<const DetectionRecord *>> by_frame;
  for (const DetectionRecord & r : records) by_frame[r.frame_num].push_back(&r);

  for (auto & [frame, rows] : by_frame) {
    std::sort(rows.begin(), rows.end(), [](const DetectionRecord * a, const DetectionRecord * b) {
      return a->id < b->id;
    });
    char name[32];
    std::snprintf(name, sizeof(name), "%06ld.txt", frame);
    const fs::path path = fs::path(out_dir) / name;
    std::ofstream out(path);
    if (!out) throw_io("cannot write label file: " + path.string());
    for (const DetectionRecord * r : rows) {
      const YoloBox y = bbox_to_yolo(r->bbox, scene.image_w, scene.image_h, scene.params.yolo_mode);
      out << yolo_label_line(scene.params.class_index(r->cls), y) << '\n';
    }
  }
  return static_cast<long>(by_frame.size());
}

}  // namespace nadir
