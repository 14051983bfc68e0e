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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "nadir/error.hpp"
#include "nadir/ingest.hpp"

using namespace nadir;

namespace
{

// Table-style rows: frame 5, ids 103..110, with trailing speed and
// acceleration columns the parser must ignore.
const char * kTableCsv =
  "frame_num,id,name,xmin,ymin,xmax,ymax,speed,acceleration\n"
  "5,103,car,790,709,812,764,27,-0.08\n"
  "5,104,car,960,640,990,702,23,0.02\n"
  "5,105,car,540,340,565,400,25,0.00\n"
  "5,106,bus,1200,500,1260,620,18,0.05\n"
  "5,107,car,300,200,330,260,22,-0.01\n"
  "5,108,truck,800,100,850,200,20,0.03\n"
  "5,109,car,1500,800,1530,860,26,0.00\n"
  "5,110,car,60,900,90,960,24,0.01\n";

}  // namespace

TEST_CASE("parser reads the canonical table row")
{
  std::istringstream in(kTableCsv);
  const auto records = parse_tracking_csv(in, "table");
  REQUIRE(records.size() == 8);
  const DetectionRecord & r = records[0];
  CHECK(r.frame_num == 5);
  CHECK(r.id == 103);
  CHECK(r.cls == VehicleClass::car);
  CHECK(r.bbox.xmin == 790);
  CHECK(r.bbox.ymin == 709);
  CHECK(r.bbox.xmax == 812);
  CHECK(r.bbox.ymax == 764);
}

TEST_CASE("parser accepts any column order and ignores extras")
{
  std::istringstream in(
    "name,ymax,id,xmin,frame_num,ymin,xmax,notes\n"
    "bus,200,9,50,3,100,110,hello\n");
  const auto records = parse_tracking_csv(in, "shuffled");
  REQUIRE(records.size() == 1);
  CHECK(records[0].frame_num == 3);
  CHECK(records[0].id == 9);
  CHECK(records[0].cls == VehicleClass::bus);
  CHECK(records[0].bbox.ymax == 200);
}

TEST_CASE("header-only input parses to nothing")
{
  std::istringstream in("frame_num,id,name,xmin,ymin,xmax,ymax\n");
  CHECK(parse_tracking_csv(in, "empty").empty());
}

TEST_CASE("parse errors carry the line number")
{
  std::istringstream bad_class(
    "frame_num,id,name,xmin,ymin,xmax,ymax\n"
    "1,1,car,0,0,10,10\n"
    "2,1,bicycle,0,0,10,10\n");
  CHECK_THROWS_WITH_AS(
    parse_tracking_csv(bad_class, "bad"), doctest::Contains("line 3"), Error);

  std::istringstream missing_col("frame_num,id,name,xmin,ymin,xmax\n");
  CHECK_THROWS_WITH_AS(
    parse_tracking_csv(missing_col, "cols"), doctest::Contains("ymax"), Error);

  std::istringstream bad_number(
    "frame_num,id,name,xmin,ymin,xmax,ymax\n"
    "1,1,car,zero,0,10,10\n");
  CHECK_THROWS_AS(parse_tracking_csv(bad_number, "num"), Error);
}

TEST_CASE("emit then parse is the identity")
{
  std::istringstream in(kTableCsv);
  const auto records = parse_tracking_csv(in, "table");
  std::ostringstream out;
  emit_tracking_csv(out, records);
  std::istringstream back(out.str());
  const auto again = parse_tracking_csv(back, "roundtrip");
  REQUIRE(again.size() == records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    CHECK(again[i].frame_num == records[i].frame_num);
    CHECK(again[i].id == records[i].id);
    CHECK(again[i].cls == records[i].cls);
    CHECK(again[i].bbox.xmin == records[i].bbox.xmin);
    CHECK(again[i].bbox.ymax == records[i].bbox.ymax);
  }
}

namespace
{

DetectionRecord box_rec(long frame, long id, BBox box)
{
  DetectionRecord r;
  r.frame_num = frame;
  r.id = id;
  r.bbox = box;
  return r;
}

}  // namespace

TEST_CASE("qaqc drops out-of-frame and tiny boxes under the named rules")
{
  QaqcRules rules;
  std::vector<DetectionRecord> records{
    box_rec(1, 1, {100, 100, 130, 120}), box_rec(2, 1, {101, 100, 131, 120}),
    box_rec(1, 2, {1900, 100, 1930, 120}),  // past image_w
    box_rec(1, 3, {10, 10, 11, 11}),        // 1 px sides
  };
  const QaqcResult res = qaqc_filter(records, 1920, 1080, rules);
  CHECK(res.kept.size() == 2);
  CHECK(res.report.kept == 2);
  CHECK(res.report.dropped.at("out_of_frame") == 1);
  CHECK(res.report.dropped.at("too_small") == 1);
  CHECK(res.report.dropped_total() == 2);
}

TEST_CASE("qaqc drops short tracks after the box rules")
{
  QaqcRules rules;
  rules.min_track_len = 2;
  std::vector<DetectionRecord> records{
    box_rec(1, 1, {100, 100, 130, 120}),
    box_rec(2, 1, {101, 100, 131, 120}),
    box_rec(1, 2, {200, 200, 230, 220}),  // singleton track
  };
  const QaqcResult res = qaqc_filter(records, 1920, 1080, rules);
  CHECK(res.kept.size() == 2);
  CHECK(res.report.dropped.at("short_track") == 1);
}

TEST_CASE("table rows all pass the default rules when tracks are long enough")
{
  std::istringstream in(kTableCsv);
  auto records = parse_tracking_csv(in, "table");
  QaqcRules rules;
  rules.min_track_len = 1;  // single-frame fixture
  const QaqcResult res = qaqc_filter(records, 1920, 1080, rules);
  CHECK(res.report.kept == 8);
  CHECK(res.report.dropped_total() == 0);
}

TEST_CASE("qaqc is idempotent")
{
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> pos(-50.0, 1900.0);
  std::uniform_real_distribution<double> side(1.0, 500.0);
  std::vector<DetectionRecord> records;
  for (long i = 0; i < 500; ++i) {
    const double x = pos(rng);
    const double y = pos(rng);
    records.push_back(box_rec(i % 40, i % 25, {x, y, x + side(rng), y + side(rng)}));
  }
  QaqcRules rules;
  const QaqcResult once = qaqc_filter(records, 1920, 1080, rules);
  const QaqcResult twice = qaqc_filter(once.kept, 1920, 1080, rules);
  CHECK(twice.kept.size() == once.kept.size());
  CHECK(twice.report.dropped_total() == 0);
}

TEST_CASE("yolo conversion reproduces the worked examples")
{
  // Paper-exact mode on the reference box.
  const YoloBox paper = bbox_to_yolo({820, 148, 837, 197}, 1920, 1080, YoloMode::paper_exact);
  CHECK(paper.x_center == doctest::Approx(0.430990).epsilon(1e-6));
  CHECK(paper.y_center == doctest::Approx(0.158796).epsilon(1e-6));
  CHECK(paper.width == doctest::Approx(0.008854).epsilon(1e-6));
  CHECK(paper.height == doctest::Approx(0.045370).epsilon(1e-6));

  const YoloBox full_std = bbox_to_yolo({0, 0, 1920, 1080}, 1920, 1080, YoloMode::standard);
  CHECK(full_std.x_center == doctest::Approx(0.5));
  CHECK(full_std.y_center == doctest::Approx(0.5));
  CHECK(full_std.width == doctest::Approx(1.0));
  CHECK(full_std.height == doctest::Approx(1.0));

  // The one-pixel center bias of the reference converter.
  const YoloBox full_paper = bbox_to_yolo({0, 0, 1920, 1080}, 1920, 1080, YoloMode::paper_exact);
  CHECK(full_paper.x_center == doctest::Approx(959.0 / 1920.0));
  CHECK(full_paper.y_center == doctest::Approx(539.0 / 1080.0));
}

TEST_CASE("yolo conversion rejects degenerate boxes")
{
  CHECK_THROWS_AS(bbox_to_yolo({10, 10, 10, 20}, 1920, 1080, YoloMode::standard), Error);
  CHECK_THROWS_AS(
    yolo_to_bbox({0.5, 0.5, 0.0, 0.1}, 1920, 1080, YoloMode::standard), Error);
}

TEST_CASE("yolo round trip recovers the reference box within a pixel")
{
  for (const YoloMode mode : {YoloMode::standard, YoloMode::paper_exact}) {
    const BBox box{820, 148, 837, 197};
    const BBox back = yolo_to_bbox(bbox_to_yolo(box, 1920, 1080, mode), 1920, 1080, mode);
    CHECK(std::abs(back.xmin - box.xmin) <= 1.0);
    CHECK(std::abs(back.ymin - box.ymin) <= 1.0);
    CHECK(std::abs(back.xmax - box.xmax) <= 1.0);
    CHECK(std::abs(back.ymax - box.ymax) <= 1.0);
  }
  const BBox full = yolo_to_bbox({0.5, 0.5, 1.0, 1.0}, 1920, 1080, YoloMode::standard);
  CHECK(full.xmin == doctest::Approx(0.0));
  CHECK(full.ymax == doctest::Approx(1080.0));
}

TEST_CASE("label lines use fixed six-decimal fields")
{
  const YoloBox box = bbox_to_yolo({820, 148, 837, 197}, 1920, 1080, YoloMode::paper_exact);
  CHECK(yolo_label_line(0, box) == "0 0.430990 0.158796 0.008854 0.045370");
}

TEST_CASE("label export writes one zero-padded file per frame")
{
  const auto dir = std::filesystem::temp_directory_path() / "nadir_test_labels";
  std::filesystem::remove_all(dir);

  std::vector<DetectionRecord> records{
    box_rec(5, 103, {820, 148, 837, 197}),
    box_rec(5, 104, {100, 100, 130, 120}),
    box_rec(12, 103, {821, 149, 838, 198}),
  };
  SceneConfig scene;
  scene.params.yolo_mode = YoloMode::paper_exact;
  const long files = export_yolo_labels(records, scene, dir.string());
  CHECK(files == 2);

  std::ifstream frame5(dir / "000005.txt");
  REQUIRE(frame5.good());
  std::string line;
  std::getline(frame5, line);
  CHECK(line == "0 0.430990 0.158796 0.008854 0.045370");
  std::getline(frame5, line);
  CHECK(line.substr(0, 2) == "0 ");
  CHECK(std::filesystem::exists(dir / "000012.txt"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("random boxes round-trip within one pixel in both modes")
{
  std::mt19937 rng(2026);
  std::uniform_real_distribution<double> x(0.0, 1900.0);
  std::uniform_real_distribution<double> y(0.0, 1060.0);
  std::uniform_real_distribution<double> w(1.0, 400.0);
  for (int i = 0; i < 2000; ++i) {
    BBox box;
    box.xmin = x(rng);
    box.ymin = y(rng);
    box.xmax = std::min(1920.0, box.xmin + w(rng));
    box.ymax = std::min(1080.0, box.ymin + w(rng));
    if (!box.valid()) continue;
    for (const YoloMode mode : {YoloMode::standard, YoloMode::paper_exact}) {
      const BBox back = yolo_to_bbox(bbox_to_yolo(box, 1920, 1080, mode), 1920, 1080, mode);
      CHECK(std::abs(back.xmin - box.xmin) <= 1.0);
      CHECK(std::abs(back.ymin - box.ymin) <= 1.0);
      CHECK(std::abs(back.xmax - box.xmax) <= 1.0);
      CHECK(std::abs(back.ymax - box.ymax) <= 1.0);
    }
  }
}
