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

#ifndef NADIR__METRICS_HPP_
#define NADIR__METRICS_HPP_

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "nadir/core.hpp"
#include "nadir/kinematics.hpp"
#include "nadir/maneuvers.hpp"
#include "nadir/scene.hpp"

namespace nadir
{

struct ClassCounts
{
  long car = 0;
  long bus = 0;
  long truck = 0;

  long total() const { return car + bus + truck; }
  double pcu(const AnalysisParams & params) const;
  void add(VehicleClass cls);
};

/// One fixed time bin of arrivals, [t_begin, t_end).
struct VolumeBin
{
  double t_begin_s = 0.0;
  double t_end_s = 0.0;
  ClassCounts counts;
  double pcu = 0.0;
};

/// Arrival counts over fixed bins covering [t0, t1). The last bin may be
/// shorter; arrivals outside the window are dropped.
std::vector<VolumeBin> bin_volumes(
  const std::vector<std::pair<double, VehicleClass>> & arrivals, double bin_s, double t0_s,
  double t1_s, const AnalysisParams & params);

/// Peak hour factor over exactly four quarter-hour volumes: hourly total
/// over four times the busiest quarter.
double peak_hour_factor(const std::vector<double> & quarter_volumes);

/// Peak period factor, the same ratio generalized to any number of bins.
double peak_period_factor(const std::vector<double> & bin_volumes);

/// Time mean and space mean speed of one speed sample. The harmonic mean
/// drops zero entries (stopped vehicles would collapse it) and reports how
/// many were dropped.
struct MeanSpeeds
{
  double tms_kmh = 0.0;
  double sms_kmh = 0.0;
  long n = 0;
  long zero_excluded = 0;
};

MeanSpeeds mean_speeds(const std::vector<double> & speeds_kmh);

/// Stream density from hourly flow and space mean speed.
double traffic_density(double volume_per_h, double sms_kmh);

/// Level of service letter for a density against ascending upper bounds;
/// densities beyond the last bound map to F.
char level_of_service(double density, const std::vector<double> & bounds);

/// Throughput capacity estimated from the busiest observed bin scaled to an
/// hourly rate.
double capacity_from_bins(const std::vector<double> & bin_pcu, double bin_s);

/// Fill unobserved bins of a partially observed count series: interior gaps
/// are linearly interpolated between the nearest observed bins, leading and
/// trailing gaps repeat the nearest observed value.
std::vector<double> expand_counts(
  const std::vector<double> & bins, const std::vector<bool> & observed);

struct SpeedValidationRow
{
  long id = 0;
  double v_video_kmh = 0.0;
  double v_trajectory_kmh = 0.0;
  double abs_pct_err = 0.0;
};

struct SpeedValidation
{
  std::vector<SpeedValidationRow> rows;
  long excluded_zero = 0;
  double mape = 0.0;
  double rmse = 0.0;
};

/// Error statistics of trajectory speeds against reference speeds, as
/// (id, reference, trajectory) triples. Rows with a zero reference speed
/// cannot contribute a percentage error and are excluded but counted.
SpeedValidation validate_speeds(const std::vector<std::tuple<long, double, double>> & pairs);

void emit_validation_csv(std::ostream & out, const SpeedValidation & validation);

/// Volume, peaking, capacity, speed, and level-of-service figures for one
/// direction group of approaches.
struct GroupMetrics
{
  std::string group;
  std::vector<VolumeBin> bins;
  ClassCounts totals;
  double total_pcu = 0.0;
  double volume_pcu_h = 0.0;
  std::optional<double> phf;
  double ppf = 0.0;
  double capacity_pcu_h = 0.0;
  std::optional<double> tms_kmh;
  std::optional<double> sms_kmh;
  long zero_speed_excluded = 0;
  std::optional<double> density_pcu_km;
  char los = '-';
};

struct IntersectionReport
{
  double t0_s = 0.0;
  double t1_s = 0.0;
  ClassCounts totals;
  TurningCountTable turns;
  std::vector<GroupMetrics> groups;
};

/// Assembles the full intersection report: turning movements feed per-group
/// arrival bins; spot speeds at the configured section give the time mean;
/// corridor transits give the space mean, density, and level of service.
IntersectionReport build_intersection_report(
  const std::vector<Trajectory> & trajectories,
  const std::map<long, std::vector<KinematicSample>> & kinematics, const SceneConfig & scene);

std::string report_to_json(const IntersectionReport & report, const SceneConfig & scene);

}  // namespace nadir

#endif  // NADIR__METRICS_HPP_
