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

#ifndef NADIR__STABILIZE_HPP_
#define NADIR__STABILIZE_HPP_

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "nadir/core.hpp"
#include "nadir/scene.hpp"

namespace nadir
{

/// One camera jump at the boundary after `frame`: every box from the next
/// frame on is displaced by (dx, dy). Signs follow the displacement of the
/// boxes (new position minus old), so the correction subtracts them.
struct DeflectionStep
{
  long frame = 0;
  double dx = 0.0;
  double dy = 0.0;
};

/// A deflection event: one or more consecutive displaced frame boundaries.
/// dx/dy accumulate the steps; frame_start/frame_end are the left frames
/// of the first and last merged boundary.
struct DeflectionEvent
{
  long frame_start = 0;
  long frame_end = 0;
  double dx = 0.0;
  double dy = 0.0;
  std::optional<double> rotation_deg;  // diagnostic only, not corrected
  int n_matched = 0;                   // matched ids at the first boundary
  std::vector<DeflectionStep> steps;
};

struct StabilizeParams
{
  double trigger_px = 1.0;   // per-id movement that counts as displaced
  double outlier_px = 40.0;  // per-id offsets at or above this are ignored
  int min_matched = 3;       // ids required on both sides of a boundary
  double dissent_frac = 0.1;  // ids allowed to disagree with the jump

  static StabilizeParams from_params(const AnalysisParams & p);
};

/// Scan frame boundaries for whole-scene jumps. A boundary is a candidate
/// when all but the dissent fraction of matched ids move more than
/// trigger_px in both axes; candidates are split from organic motion by a
/// two-cluster separation of the per-boundary mean offset magnitudes, and
/// consecutive displaced boundaries merge into one event. Boundaries with
/// fewer than min_matched ids are skipped (collected in skipped_frames
/// when given).
std::vector<DeflectionEvent> detect_deflections(
  const std::vector<Trajectory> & trajectories, const StabilizeParams & params,
  std::vector<long> * skipped_frames = nullptr);

/// Subtract the accumulated offsets from every point after each step.
/// Corrected boxes that leave the image are flagged, never dropped.
std::vector<Trajectory> apply_correction(
  const std::vector<Trajectory> & trajectories, const std::vector<DeflectionEvent> & events,
  int image_w, int image_h);

/// Least-squares rigid rotation angle (degrees, y-down image convention)
/// explaining before -> after point matches. Empty for fewer than three
/// matches or when the source points all coincide.
std::optional<double> estimate_rotation(const std::vector<std::pair<Vec2, Vec2>> & matches);

/// Columns: frame_start,frame_end,dx,dy,rotation_deg,n_matched. The
/// rotation field is empty when unavailable.
void emit_deflection_csv(std::ostream & out, const std::vector<DeflectionEvent> & events);

}  // namespace nadir

#endif  // NADIR__STABILIZE_HPP_
