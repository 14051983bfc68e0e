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

#ifndef NADIR__GEOREF_HPP_
#define NADIR__GEOREF_HPP_

#include "nadir/geometry.hpp"

namespace nadir
{

/// Nadir-pointing camera described by its diagonal field of view.
struct CameraModel
{
  double fov_diag_deg = 84.0;
};

/// Ground rectangle imaged by a nadir camera at a given altitude, meters.
struct GroundFootprint
{
  double diagonal_m = 0.0;
  double length_m = 0.0;  // along image x
  double width_m = 0.0;   // along image y
};

/// diagonal = 2 * altitude * tan(fov/2); the sides split the diagonal in
/// the image aspect ratio, so length^2 + width^2 == diagonal^2.
GroundFootprint ground_footprint(
  const CameraModel & camera, int image_w, int image_h, double altitude_m);

/// Calibrated linear scale: meters per pixel measured at a reference
/// altitude. Scale at other altitudes is proportional to altitude.
struct ScaleModel
{
  double meters_per_px_ref = 0.08364;
  double reference_altitude_m = 120.0;
};

double meters_per_pixel(const ScaleModel & scale, double altitude_m);
double meters_per_pixel(
  const CameraModel & camera, int image_w, int image_h, double altitude_m);

/// Altitude range the calibration is trusted over. Outside it callers
/// should surface a warning; values are still computed.
bool altitude_in_envelope(double altitude_m);

/// Pixel position to ground meters (origin at the image top-left corner,
/// same axes as the image).
inline Vec2 image_to_ground(const Vec2 & px, double meters_per_px)
{
  return {px.x * meters_per_px, px.y * meters_per_px};
}

}  // namespace nadir

#endif  // NADIR__GEOREF_HPP_
