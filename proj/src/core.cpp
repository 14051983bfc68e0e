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

#include "nadir/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "nadir/error.hpp"

namespace nadir
{

const char * to_string(VehicleClass cls)
{
  switch (cls) {
    case VehicleClass::car:
      return "car";
    case VehicleClass::bus:
      return "bus";
    case VehicleClass::truck:
      return "truck";
  }
  return "car";
}

std::optional<VehicleClass> vehicle_class_from_string(std::string_view name)
{
  if (name == "car") return VehicleClass::car;
  if (name == "bus") return VehicleClass::bus;
  if (name == "truck") return VehicleClass::truck;
  return std::nullopt;
}

bool BBox::valid() const
{
  return std::isfinite(xmin) && std::isfinite(ymin) && std::isfinite(xmax) &&
         std::isfinite(ymax) && xmin >= 0.0 && ymin >= 0.0 && xmin < xmax && ymin < ymax;
}

Vec2 bbox_center(const BBox & box)
{
  return {(box.xmin + box.xmax) / 2.0, (box.ymin + box.ymax) / 2.0};
}

std::vector<Trajectory> assemble_trajectories(
  const std::vector<DetectionRecord> & records, double fps)
{
  if (!(fps > 0.0)) throw_invalid("assemble_trajectories: fps must be positive");

  std::map<long, std::vector<const DetectionRecord *>> by_id;
  for (const DetectionRecord & r : records) {
    by_id[r.id].push_back(&r);
  }

  std::vector<Trajectory> out;
  out.reserve(by_id.size());
  for (auto & [id, rows] : by_id) {
    std::sort(rows.begin(), rows.end(), [](const DetectionRecord * a, const DetectionRecord * b) {
      return a->frame_num < b->frame_num;
    });
    Trajectory traj;
    traj.id = id;
    traj.points.reserve(rows.size());
    std::array<long, 3> class_votes{0, 0, 0};
    long prev_frame = -1;
    for (const DetectionRecord * r : rows) {
      if (r->frame_num == prev_frame) {
        throw_parse(
          "duplicate record for frame " + std::to_string(r->frame_num) + ", id " +
          std::to_string(id));
      }
      prev_frame = r->frame_num;
      class_votes[static_cast<size_t>(r->cls)] += 1;
      TrackPoint p;
      p.frame_num = r->frame_num;
      p.time_s = static_cast<double>(r->frame_num) / fps;
      p.bbox = r->bbox;
      p.center = bbox_center(r->bbox);
      traj.points.push_back(p);
    }
    const size_t winner =
      std::max_element(class_votes.begin(), class_votes.end()) - class_votes.begin();
    traj.cls = static_cast<VehicleClass>(winner);
    out.push_back(std::move(traj));
  }
  return out;
}

std::vector<DetectionRecord> flatten_trajectories(const std::vector<Trajectory> & trajectories)
{
  std::vector<DetectionRecord> out;
  for (const Trajectory & traj : trajectories) {
    for (const TrackPoint & p : traj.points) {
      out.push_back({p.frame_num, traj.id, traj.cls, p.bbox});
    }
  }
  std::sort(out.begin(), out.end(), [](const DetectionRecord & a, const DetectionRecord & b) {
    if (a.frame_num != b.frame_num) return a.frame_num < b.frame_num;
    return a.id < b.id;
  });
  return out;
}

}  // namespace nadir
