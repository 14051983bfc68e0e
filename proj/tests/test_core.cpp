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

#include <string>

#include "doctest.h"
#include "nadir/core.hpp"
#include "nadir/error.hpp"

using namespace nadir;

TEST_CASE("vehicle class names round-trip")
{
  CHECK(std::string(to_string(VehicleClass::car)) == "car");
  CHECK(std::string(to_string(VehicleClass::bus)) == "bus");
  CHECK(std::string(to_string(VehicleClass::truck)) == "truck");
  CHECK(vehicle_class_from_string("car") == VehicleClass::car);
  CHECK(vehicle_class_from_string("bus") == VehicleClass::bus);
  CHECK(vehicle_class_from_string("truck") == VehicleClass::truck);
  CHECK_FALSE(vehicle_class_from_string("bicycle").has_value());
  CHECK_FALSE(vehicle_class_from_string("").has_value());
}

TEST_CASE("bbox center is the midpoint")
{
  // The worked deflection example: box {820,148,837,197} centers at
  // (828.5, 172.5).
  const BBox paper{820, 148, 837, 197};
  const Vec2 c = bbox_center(paper);
  CHECK(c.x == doctest::Approx(828.5));
  CHECK(c.y == doctest::Approx(172.5));

  const Vec2 unit = bbox_center({0, 0, 2, 2});
  CHECK(unit.x == doctest::Approx(1.0));
  CHECK(unit.y == doctest::Approx(1.0));

  // The same vehicle's post-deflection box.
  const Vec2 shifted = bbox_center({845, 139, 860, 190});
  CHECK(shifted.x == doctest::Approx(852.5));
  CHECK(shifted.y == doctest::Approx(164.5));
}

TEST_CASE("bbox validity requires positive extent")
{
  CHECK(BBox{0, 0, 1, 1}.valid());
  CHECK_FALSE(BBox{0, 0, 0, 1}.valid());
  CHECK_FALSE(BBox{5, 5, 4, 9}.valid());
}

namespace
{

DetectionRecord rec(long frame, long id, VehicleClass cls = VehicleClass::car)
{
  DetectionRecord r;
  r.frame_num = frame;
  r.id = id;
  r.cls = cls;
  r.bbox = {100.0 + frame, 100.0, 130.0 + frame, 120.0};
  return r;
}

}  // namespace

TEST_CASE("assemble groups by id and orders by frame")
{
  const auto trajs = assemble_trajectories({rec(7, 7), rec(5, 7), rec(6, 7)}, 30.0);
  REQUIRE(trajs.size() == 1);
  const Trajectory & t = trajs[0];
  CHECK(t.id == 7);
  REQUIRE(t.points.size() == 3);
  CHECK(t.first_frame() == 5);
  CHECK(t.last_frame() == 7);
  CHECK(t.points[0].time_s == doctest::Approx(5.0 / 30.0));
  CHECK(t.points[2].time_s == doctest::Approx(7.0 / 30.0));
  CHECK(t.points[1].center.x == doctest::Approx(121.0));
}

TEST_CASE("assemble on empty input yields no trajectories")
{
  CHECK(assemble_trajectories({}, 30.0).empty());
}

TEST_CASE("eight ids at one frame give eight single-point tracks")
{
  std::vector<DetectionRecord> records;
  for (long id = 103; id <= 110; ++id) records.push_back(rec(5, id));
  const auto trajs = assemble_trajectories(records, 30.0);
  CHECK(trajs.size() == 8);
  for (const Trajectory & t : trajs) CHECK(t.points.size() == 1);
}

TEST_CASE("duplicate frame-id pairs are rejected with the pair named")
{
  CHECK_THROWS_WITH_AS(
    assemble_trajectories({rec(5, 9), rec(5, 9)}, 30.0),
    doctest::Contains("frame 5"), Error);
}

TEST_CASE("majority class wins, ties to the smaller class value")
{
  const auto majority = assemble_trajectories(
    {rec(1, 3, VehicleClass::bus), rec(2, 3, VehicleClass::truck), rec(3, 3, VehicleClass::bus)},
    30.0);
  REQUIRE(majority.size() == 1);
  CHECK(majority[0].cls == VehicleClass::bus);

  const auto tie = assemble_trajectories(
    {rec(1, 4, VehicleClass::truck), rec(2, 4, VehicleClass::car)}, 30.0);
  REQUIRE(tie.size() == 1);
  CHECK(tie[0].cls == VehicleClass::car);
}

TEST_CASE("flatten inverts assemble")
{
  const std::vector<DetectionRecord> records{rec(5, 2), rec(5, 1), rec(6, 1), rec(7, 3)};
  const auto flat = flatten_trajectories(assemble_trajectories(records, 30.0));
  REQUIRE(flat.size() == records.size());
  // Canonical order: frame then id.
  CHECK(flat[0].id == 1);
  CHECK(flat[1].id == 2);
  CHECK(flat[2].id == 1);
  CHECK(flat[3].id == 3);
  for (const DetectionRecord & r : flat) {
    CHECK(r.bbox.xmin == doctest::Approx(100.0 + r.frame_num));
  }
}
