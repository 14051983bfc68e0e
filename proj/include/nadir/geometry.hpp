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

#ifndef NADIR__GEOMETRY_HPP_
#define NADIR__GEOMETRY_HPP_

#include <cmath>
#include <optional>
#include <vector>

namespace nadir
{

// All pixel-space geometry uses the image convention: x grows right,
// y grows DOWN, origin at the top-left corner of the frame.

struct Vec2
{
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2 & o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2 & o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
};

inline double dot(const Vec2 & a, const Vec2 & b) { return a.x * b.x + a.y * b.y; }

/// z component of the 3-D cross product. Positive means b lies clockwise
/// of a when viewed in image coordinates (y down).
inline double cross(const Vec2 & a, const Vec2 & b) { return a.x * b.y - a.y * b.x; }

using Polyline = std::vector<Vec2>;
using Polygon = std::vector<Vec2>;

struct Segment
{
  Vec2 a;
  Vec2 b;
};

/// Longitudinal axis of a corridor or lane model: ew means traffic runs
/// along image x and the lateral coordinate is y; ns is the transpose.
enum class Axis { ew, ns };

double polyline_length(const Polyline & line);

/// Point at arc length s from the first vertex, clamped to the ends.
Vec2 point_at_arclength(const Polyline & line, double s);

/// Unit tangent of the segment containing arc length s.
Vec2 direction_at_arclength(const Polyline & line, double s);

/// Arc length of the point on the polyline nearest to p.
double project_arclength(const Polyline & line, const Vec2 & p);

/// Even-odd containment test. Points exactly on an edge are not guaranteed
/// a stable answer; scene polygons should overshoot regions of interest.
bool polygon_contains(const Polygon & poly, const Vec2 & p);

/// Intersection parameter t in [0,1] along a0->a1, if the two closed
/// segments cross.
std::optional<double> segment_intersection_param(
  const Vec2 & a0, const Vec2 & a1, const Vec2 & b0, const Vec2 & b1);

/// Lateral coordinate of a boundary polyline at the given longitudinal
/// position. The polyline must be monotone along the axis; outside its
/// span the nearest end value is used.
double lateral_at(const Polyline & boundary, Axis axis, double longitudinal);

inline double longitudinal_of(const Vec2 & p, Axis axis) { return axis == Axis::ew ? p.x : p.y; }
inline double lateral_of(const Vec2 & p, Axis axis) { return axis == Axis::ew ? p.y : p.x; }

inline double deg_to_rad(double d) { return d * M_PI / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / M_PI; }

/// Signed angle from a to b in degrees, range (-180, 180]. The sign follows
/// the image convention (y down): positive is clockwise on screen.
double signed_angle_deg(const Vec2 & a, const Vec2 & b);

}  // namespace nadir

#endif  // NADIR__GEOMETRY_HPP_
