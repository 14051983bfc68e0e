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

#ifndef NADIR__CORE_HPP_
#define NADIR__CORE_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nadir/geometry.hpp"

namespace nadir
{

enum class VehicleClass { car = 0, bus = 1, truck = 2 };

const char * to_string(VehicleClass cls);
std::optional<VehicleClass> vehicle_class_from_string(std::string_view name);

/// Axis-aligned box in pixel coordinates (y down). xmin < xmax and
/// ymin < ymax for every box accepted by the pipeline.
struct BBox
{
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  bool valid() const;
};

Vec2 bbox_center(const BBox & box);

/// One tracker output row: a detection of vehicle `id` at `frame_num`.
struct DetectionRecord
{
  long frame_num = 0;
  long id = 0;
  VehicleClass cls = VehicleClass::car;
  BBox bbox;
};

struct TrackPoint
{
  long frame_num = 0;
  double time_s = 0.0;
  BBox bbox;
  Vec2 center;
  // Set when a stabilization correction pushes the box outside the frame;
  // such points are kept but flagged.
  bool out_of_frame = false;
};

/// Per-vehicle track. Points are ordered by frame with no duplicates; frame
/// gaps are preserved (downstream time deltas use the actual frame spans).
struct Trajectory
{
  long id = 0;
  VehicleClass cls = VehicleClass::car;
  std::vector<TrackPoint> points;

  long first_frame() const { return points.front().frame_num; }
  long last_frame() const { return points.back().frame_num; }
};

/// Group records by id and order each track by frame. Timestamps are
/// frame_num / fps. Duplicate (frame, id) pairs are an error naming the
/// pair. A track whose records disagree on the class keeps the majority
/// class (ties go to the smaller class value).
std::vector<Trajectory> assemble_trajectories(
  const std::vector<DetectionRecord> & records, double fps);

/// Inverse of assemble_trajectories, ordered by frame then id.
std::vector<DetectionRecord> flatten_trajectories(const std::vector<Trajectory> & trajectories);

}  // namespace nadir

#endif  // NADIR__CORE_HPP_
