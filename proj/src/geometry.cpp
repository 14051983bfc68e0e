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

#include "nadir/geometry.hpp"

#include <algorithm>
#include <limits>

#include "nadir/error.hpp"

namespace nadir
{

double polyline_length(const Polyline & line)
{
  double total = 0.0;
  for (size_t i = 1; i < line.size(); ++i) {
    total += (line[i] - line[i - 1]).norm();
  }
  return total;
}

Vec2 point_at_arclength(const Polyline & line, double s)
{
  if (line.empty()) throw_invalid("point_at_arclength: empty polyline");
  if (s <= 0.0) return line.front();
  for (size_t i = 1; i < line.size(); ++i) {
    const double seg = (line[i] - line[i - 1]).norm();
    if (s <= seg && seg > 0.0) {
      return line[i - 1] + (line[i] - line[i - 1]) * (s / seg);
    }
    s -= seg;
  }
  return line.back();
}

Vec2 direction_at_arclength(const Polyline & line, double s)
{
  if (line.size() < 2) throw_invalid("direction_at_arclength: need at least two vertices");
  double remaining = std::max(s, 0.0);
  for (size_t i = 1; i < line.size(); ++i) {
    const Vec2 d = line[i] - line[i - 1];
    const double seg = d.norm();
    if ((remaining <= seg || i + 1 == line.size()) && seg > 0.0) {
      return d * (1.0 / seg);
    }
    remaining -= seg;
  }
  // Fully degenerate polyline (all vertices coincident).
  throw_invalid("direction_at_arclength: polyline has zero length");
}

double project_arclength(const Polyline & line, const Vec2 & p)
{
  if (line.empty()) throw_invalid("project_arclength: empty polyline");
  double best_dist2 = std::numeric_limits<double>::infinity();
  double best_s = 0.0;
  double base = 0.0;
  if (line.size() == 1) return 0.0;
  for (size_t i = 1; i < line.size(); ++i) {
    const Vec2 d = line[i] - line[i - 1];
    const double seg2 = dot(d, d);
    double t = 0.0;
    if (seg2 > 0.0) {
      t = std::clamp(dot(p - line[i - 1], d) / seg2, 0.0, 1.0);
    }
    const Vec2 q = line[i - 1] + d * t;
    const double dist2 = dot(p - q, p - q);
    if (dist2 < best_dist2) {
      best_dist2 = dist2;
      best_s = base + t * std::sqrt(seg2);
    }
    base += std::sqrt(seg2);
  }
  return best_s;
}

bool polygon_contains(const Polygon & poly, const Vec2 & p)
{
  if (poly.size() < 3) return false;
  bool inside = false;
  for (size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec2 & a = poly[i];
    const Vec2 & b = poly[j];
    const bool straddles = (a.y > p.y) != (b.y > p.y);
    if (straddles) {
      const double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

std::optional<double> segment_intersection_param(
  const Vec2 & a0, const Vec2 & a1, const Vec2 & b0, const Vec2 & b1)
{
  const Vec2 r = a1 - a0;
  const Vec2 s = b1 - b0;
  const double denom = cross(r, s);
  if (denom == 0.0) return std::nullopt;  // parallel or degenerate
  const Vec2 qp = b0 - a0;
  const double t = cross(qp, s) / denom;
  const double u = cross(qp, r) / denom;
  if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return t;
}

double lateral_at(const Polyline & boundary, Axis axis, double longitudinal)
{
  if (boundary.empty()) throw_invalid("lateral_at: empty boundary polyline");
  if (boundary.size() == 1) return lateral_of(boundary.front(), axis);

  std::vector<std::pair<double, double>> knots;
  knots.reserve(boundary.size());
  for (const Vec2 & v : boundary) {
    knots.emplace_back(longitudinal_of(v, axis), lateral_of(v, axis));
  }
  if (knots.front().first > knots.back().first) {
    std::reverse(knots.begin(), knots.end());
  }
  if (longitudinal <= knots.front().first) return knots.front().second;
  if (longitudinal >= knots.back().first) return knots.back().second;
  for (size_t i = 1; i < knots.size(); ++i) {
    if (longitudinal <= knots[i].first) {
      const double span = knots[i].first - knots[i - 1].first;
      if (span <= 0.0) return knots[i].second;
      const double t = (longitudinal - knots[i - 1].first) / span;
      return knots[i - 1].second + t * (knots[i].second - knots[i - 1].second);
    }
  }
  return knots.back().second;
}

double signed_angle_deg(const Vec2 & a, const Vec2 & b)
{
  const double angle = std::atan2(cross(a, b), dot(a, b));
  return rad_to_deg(angle);
}

}  // namespace nadir
