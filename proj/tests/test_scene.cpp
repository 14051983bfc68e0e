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
#include "nadir/error.hpp"
#include "nadir/scene.hpp"

using namespace nadir;

TEST_CASE("defaults describe the stock recording setup")
{
  const SceneConfig scene;
  CHECK(scene.fps == 30.0);
  CHECK(scene.image_w == 1920);
  CHECK(scene.image_h == 1080);
  CHECK(scene.altitude_m == 120.0);
  CHECK_FALSE(scene.camera.has_value());
  CHECK_FALSE(scene.scale.has_value());
  // Stock calibration: 0.08364 m/px at the 120 m reference altitude.
  CHECK(scene.meters_per_px() == doctest::Approx(0.08364));
}

TEST_CASE("scale precedence: explicit calibration, then camera, then stock")
{
  SceneConfig scene;
  scene.camera = CameraModel{90.0};
  scene.altitude_m = 100.0;
  scene.image_w = 1920;
  scene.image_h = 1080;
  // fov-derived: footprint length / image width = 0.09079 m/px.
  CHECK(scene.meters_per_px() == doctest::Approx(0.09079).epsilon(1e-4));

  scene.scale = ScaleModel{0.05, 100.0};
  CHECK(scene.meters_per_px() == doctest::Approx(0.05));
}

TEST_CASE("json round trip preserves the scene")
{
  SceneConfig scene;
  scene.fps = 25.0;
  scene.image_w = 3840;
  scene.image_h = 2160;
  scene.altitude_m = 150.0;
  scene.scale = ScaleModel{0.1, 150.0};
  scene.corridor = {Axis::ns, 100.0, 900.0, 66.9};
  scene.approaches["east"] = {{{1800, 400}, {1920, 400}, {1920, 700}, {1800, 700}}, "east_west"};
  LaneModel lanes;
  lanes.axis = Axis::ew;
  lanes.travel = TravelDir::east;
  lanes.boundaries = {{{0, 500}, {1920, 500}}, {{0, 540}, {1920, 540}}, {{0, 580}, {1920, 580}}};
  scene.lane_models["main"] = lanes;
  scene.sections["mid"] = {{960, 0}, {960, 1080}};
  scene.conflict_zones["box"] = {{900, 500}, {1000, 500}, {1000, 600}, {900, 600}};
  scene.params.ttc_threshold_ms = 1500.0;
  scene.params.yolo_mode = YoloMode::paper_exact;

  const SceneConfig back = scene_from_json_text(scene_to_json_text(scene));
  CHECK(back.fps == 25.0);
  CHECK(back.image_w == 3840);
  CHECK(back.altitude_m == 150.0);
  REQUIRE(back.scale.has_value());
  CHECK(back.scale->meters_per_px_ref == 0.1);
  CHECK(back.corridor.axis == Axis::ns);
  CHECK(back.corridor.length_m == 66.9);
  REQUIRE(back.approaches.count("east") == 1);
  CHECK(back.approaches.at("east").group == "east_west");
  REQUIRE(back.lane_models.count("main") == 1);
  CHECK(back.lane_models.at("main").lane_count() == 2);
  CHECK(back.lane_models.at("main").travel == TravelDir::east);
  CHECK(back.sections.count("mid") == 1);
  CHECK(back.conflict_zones.at("box").size() == 4);
  CHECK(back.params.ttc_threshold_ms == 1500.0);
  CHECK(back.params.yolo_mode == YoloMode::paper_exact);
}

TEST_CASE("unknown keys are rejected with the key named")
{
  CHECK_THROWS_WITH_AS(
    scene_from_json_text(R"({"fsp": 30})"), doctest::Contains("fsp"), Error);
  CHECK_THROWS_WITH_AS(
    scene_from_json_text(R"({"params": {"ttc_treshold_ms": 1}})"),
    doctest::Contains("ttc_treshold_ms"), Error);
}

TEST_CASE("invalid values are config errors")
{
  CHECK_THROWS_AS(scene_from_json_text(R"({"fps": 0})"), Error);
  CHECK_THROWS_AS(scene_from_json_text(R"({"fps": -30})"), Error);
  CHECK_THROWS_AS(scene_from_json_text(R"({"image_w": 0})"), Error);
  CHECK_THROWS_AS(scene_from_json_text("not json"), Error);
}

TEST_CASE("scene_set parses dotted keys")
{
  SceneConfig scene;
  scene_set(scene, "fps", "25");
  CHECK(scene.fps == 25.0);
  scene_set(scene, "altitude_m", "240");
  CHECK(scene.altitude_m == 240.0);
  scene_set(scene, "camera.fov_diag_deg", "84");
  REQUIRE(scene.camera.has_value());
  CHECK(scene.camera->fov_diag_deg == 84.0);
  scene_set(scene, "corridor.axis", "ns");
  CHECK(scene.corridor.axis == Axis::ns);
  scene_set(scene, "params.ttc_threshold_ms", "2500");
  CHECK(scene.params.ttc_threshold_ms == 2500.0);
  scene_set(scene, "params.yolo_mode", "paper-exact");
  CHECK(scene.params.yolo_mode == YoloMode::paper_exact);
  CHECK_THROWS_WITH_AS(scene_set(scene, "no_such_key", "1"), doctest::Contains("no_such_key"), Error);
  CHECK_THROWS_AS(scene_set(scene, "fps", "fast"), Error);
}

TEST_CASE("travel direction helpers")
{
  CHECK(travel_dir_from_string("east") == TravelDir::east);
  CHECK(travel_dir_from_string("north") == TravelDir::north);
  CHECK_FALSE(travel_dir_from_string("up").has_value());
  CHECK(axis_of(TravelDir::east) == Axis::ew);
  CHECK(axis_of(TravelDir::west) == Axis::ew);
  CHECK(axis_of(TravelDir::north) == Axis::ns);
  CHECK(axis_of(TravelDir::south) == Axis::ns);
  CHECK(std::string(to_string(TravelDir::west)) == "west");
}

TEST_CASE("vehicle length and pce lookups")
{
  const AnalysisParams params;
  CHECK(params.vehicle_length_m(VehicleClass::car) == 4.5);
  CHECK(params.vehicle_length_m(VehicleClass::bus) == 11.0);
  CHECK(params.vehicle_length_m(VehicleClass::truck) == 8.0);
  CHECK(params.pce(VehicleClass::car) == 1.0);
  CHECK(params.pce(VehicleClass::bus) == 2.0);
  CHECK(params.pce(VehicleClass::truck) == 1.5);
  CHECK(params.class_index(VehicleClass::car) == 0);
  CHECK(params.class_index(VehicleClass::truck) == 2);
}
