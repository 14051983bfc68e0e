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

#ifndef NADIR__SVG_HPP_
#define NADIR__SVG_HPP_

#include <map>
#include <ostream>
#include <vector>

#include "nadir/core.hpp"
#include "nadir/maneuvers.hpp"
#include "nadir/safety.hpp"
#include "nadir/scene.hpp"

namespace nadir
{

/// Conflict heatmap over the image plane, one filled rectangle per occupied
/// cell, colored by severity level.
void write_heatmap_svg(
  std::ostream & out, const std::vector<HeatmapCell> & cells, const SceneConfig & scene);

/// Time-space diagram: one polyline per vehicle, time rightward, distance
/// along the corridor upward.
void write_tsd_svg(std::ostream & out, const std::map<long, std::vector<TsdPoint>> & series);

/// Lateral-offset traces against lane boundaries for one lane model; lane
/// boundaries are drawn as horizontal rules at their mean lateral value.
void write_lateral_svg(
  std::ostream & out, const std::map<long, std::vector<LateralSample>> & series,
  const LaneModel & model);

}  // namespace nadir

#endif  // NADIR__SVG_HPP_
