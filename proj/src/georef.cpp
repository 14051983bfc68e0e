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

#include "nadir/georef.hpp"

#include <cmath>

#include "nadir/error.hpp"

namespace nadir
{

namespace
{
constexpr double kEnvelopeMinM = 120.0;
constexpr double kEnvelopeMaxM = 350.0;
}  // namespace

GroundFootprint ground_footprint(
  const CameraModel & camera, int image_w, int image_h, double altitude_m)
{
  if (image_w <= 0 || image_h <= 0) throw_invalid("ground_footprint: image size must be positive");
  if (!(altitude_m > 0.0)) throw_invalid("ground_footprint: altitude must be positive");
  if (!(camera.fov_diag_deg > 0.0 && camera.fov_diag_deg < 180.0)) {
    throw_invalid("ground_footprint: diagonal fov must be in (0, 180) degrees");
  }
  GroundFootprint fp;
  fp.diagonal_m = 2.0 * altitude_m * std::tan(deg_to_rad(camera.fov_diag_deg) / 2.0);
  const double px_diag = std::hypot(static_cast<double>(image_w), static_cast<double>(image_h));
  fp.length_m = fp.diagonal_m * static_cast<double>(image_w) / px_diag;
  fp.width_m = fp.diagonal_m * static_cast<double>(image_h) / px_diag;
  return fp;
}

double meters_per_pixel(const ScaleModel & scale, double altitude_m)
{
  if (!(altitude_m > 0.0)) throw_invalid("meters_per_pixel: altitude must be positive");
  if (!(scale.meters_per_px_ref > 0.0) || !(scale.reference_altitude_m > 0.0)) {
    throw_invalid("meters_per_pixel: scale calibration must be positive");
  }
  return scale.meters_per_px_ref * (altitude_m / scale.reference_altitude_m);
}

double meters_per_pixel(
  const CameraModel & camera, int image_w, int image_h, double altitude_m)
{
  const GroundFootprint fp = ground_footprint(camera, image_w, image_h, altitude_m);
  return fp.length_m / static_cast<double>(image_w);
}

bool altitude_in_envelope(double altitude_m)
{
  return altitude_m >= kEnvelopeMinM && altitude_m <= kEnvelopeMaxM;
}

}  // namespace nadir
