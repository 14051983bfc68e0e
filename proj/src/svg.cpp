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

#include "nadir/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "nadir/format.hpp"
#include "nadir/geometry.hpp"

namespace nadir
{

namespace
{

constexpr const char * kLevelColors[] = {
  "#2c7bb6", "#abd9e9", "#ffffbf", "#fdae61", "#d7191c"};

const char * level_color(int level)
{
  const int idx = std::clamp(level, 1, 5) - 1;
  return kLevelColors[idx];
}

std::string num(double v)
{
  return format_fixed(v, 2);
}

void open_svg(std::ostream & out, double width, double height)
{
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n";
  out << "<rect width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" fill=\"#ffffff\"/>\n";
}

/// Cycling trace palette, distinct from the severity colors.
const char * trace_color(size_t index)
{
  static constexpr const char * kColors[] = {
    "#1b6a9c", "#c44e52", "#55a868", "#8172b2", "#ccb974", "#64b5cd", "#937860", "#da8bc3"};
  return kColors[index % (sizeof(kColors) / sizeof(kColors[0]))];
}

struct Range
{
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v)
  {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool valid() const { return lo <= hi; }
  double span() const { return hi > lo ? hi - lo : 1.0; }
};

}  // namespace

void write_heatmap_svg(
  std::ostream & out, const std::vector<HeatmapCell> & cells, const SceneConfig & scene)
{
  const double cell_w = static_cast<double>(scene.image_w) / scene.params.heat_cols;
  const double cell_h = static_cast<double>(scene.image_h) / scene.params.heat_rows;
  open_svg(out, scene.image_w, scene.image_h);
  out << "<g stroke=\"#d0d0d0\" stroke-width=\"0.5\">\n";
  for (int c = 1; c < scene.params.heat_cols; ++c) {
    const double x = c * cell_w;
    out << "<line x1=\"" << num(x) << "\" y1=\"0\" x2=\"" << num(x) << "\" y2=\""
        << num(scene.image_h) << "\"/>\n";
  }
  for (int r = 1; r < scene.params.heat_rows; ++r) {
    const double y = r * cell_h;
    out << "<line x1=\"0\" y1=\"" << num(y) << "\" x2=\"" << num(scene.image_w)
        << "\" y2=\"" << num(y) << "\"/>\n";
  }
  out << "</g>\n";
  for (const HeatmapCell & cell : cells) {
    out << "<rect x=\"" << num(cell.col * cell_w) << "\" y=\"" << num(cell.row * cell_h)
        << "\" width=\"" << num(cell_w) << "\" height=\"" << num(cell_h) << "\" fill=\""
        << level_color(cell.level) << "\" fill-opacity=\"0.85\"><title>count=" << cell.count
        << " mean_ms=" << format_fixed(cell.mean_ms, 1) << " level=" << cell.level
        << "</title></rect>\n";
  }
  out << "</svg>\n";
}

void write_tsd_svg(std::ostream & out, const std::map<long, std::vector<TsdPoint>> & series)
{
  constexpr double kWidth = 960.0;
  constexpr double kHeight = 540.0;
  constexpr double kMargin = 40.0;

  Range time;
  Range dist;
  for (const auto & [id, points] : series) {
    (void)id;
    for (const TsdPoint & p : points) {
      time.include(p.time_s);
      dist.include(p.distance_m);
    }
  }
  open_svg(out, kWidth, kHeight);
  if (time.valid() && dist.valid()) {
    const double sx = (kWidth - 2.0 * kMargin) / time.span();
    const double sy = (kHeight - 2.0 * kMargin) / dist.span();
    out << "<rect x=\"" << num(kMargin) << "\" y=\"" << num(kMargin) << "\" width=\""
        << num(kWidth - 2.0 * kMargin) << "\" height=\"" << num(kHeight - 2.0 * kMargin)
        << "\" fill=\"none\" stroke=\"#404040\"/>\n";
    size_t index = 0;
    for (const auto & [id, points] : series) {
      if (points.empty()) continue;
      out << "<polyline fill=\"none\" stroke=\"" << trace_color(index++)
          << "\" stroke-width=\"1.2\" points=\"";
      for (const TsdPoint & p : points) {
        const double x = kMargin + (p.time_s - time.lo) * sx;
        const double y = kHeight - kMargin - (p.distance_m - dist.lo) * sy;
        out << num(x) << ',' << num(y) << ' ';
      }
      out << "\"><title>id=" << id << "</title></polyline>\n";
    }
  }
  out << "</svg>\n";
}

void write_lateral_svg(
  std::ostream & out, const std::map<long, std::vector<LateralSample>> & series,
  const LaneModel & model)
{
  constexpr double kWidth = 960.0;
  constexpr double kHeight = 540.0;
  constexpr double kMargin = 40.0;

  Range time;
  Range lateral;
  for (const auto & [id, samples] : series) {
    (void)id;
    for (const LateralSample & s : samples) {
      time.include(s.time_s);
      lateral.include(s.lateral_px);
    }
  }
  std::vector<double> boundary_means;
  for (const Polyline & boundary : model.boundaries) {
    if (boundary.empty()) continue;
    double sum = 0.0;
    for (const Vec2 & v : boundary) sum += lateral_of(v, model.axis);
    const double mean = sum / static_cast<double>(boundary.size());
    boundary_means.push_back(mean);
    lateral.include(mean);
  }

  open_svg(out, kWidth, kHeight);
  if (time.valid() && lateral.valid()) {
    const double sx = (kWidth - 2.0 * kMargin) / time.span();
    const double sy = (kHeight - 2.0 * kMargin) / lateral.span();
    for (double mean : boundary_means) {
      const double y = kMargin + (mean - lateral.lo) * sy;
      out << "<line x1=\"" << num(kMargin) << "\" y1=\"" << num(y) << "\" x2=\""
          << num(kWidth - kMargin) << "\" y2=\"" << num(y)
          << "\" stroke=\"#808080\" stroke-dasharray=\"6 4\"/>\n";
    }
    size_t index = 0;
    for (const auto & [id, samples] : series) {
      if (samples.empty()) continue;
      out << "<polyline fill=\"none\" stroke=\"" << trace_color(index++)
          << "\" stroke-width=\"1.2\" points=\"";
      for (const LateralSample & s : samples) {
        const double x = kMargin + (s.time_s - time.lo) * sx;
        const double y = kMargin + (s.lateral_px - lateral.lo) * sy;
        out << num(x) << ',' << num(y) << ' ';
      }
      out << "\"><title>id=" << id << "</title></polyline>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace nadir
