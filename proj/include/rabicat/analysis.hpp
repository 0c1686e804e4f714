// Copyright 2026 The rabicat Authors
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

#pragma once

#include "rabicat/effective_model.hpp"
#include "rabicat/evolution.hpp"
#include "rabicat/observables.hpp"
#include "rabicat/rabi_model.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rabicat {

// ---------------------------------------------------------------------------
// Trajectories

/// How a single parameter point is simulated.
struct RunSpec {
  /// Fock truncation; n_max <= 0 means ceil(levels_per_R * R).
  FockConfig fock{0, 1e-8};
  double levels_per_R = 4.0;
  PropagatorPlan plan;
  LindbladOptions lindblad;
  /// Record the left-well weight every `left_weight_stride` samples
  /// (0 disables). Each evaluation costs O(n_max^2).
  int left_weight_stride = 1;
  /// Force the master-equation path even when gamma = 0.
  bool force_lindblad = false;

  FockConfig resolve_fock(double R) const;
};

/// Observable histories of one run. All series except `left_weight`
/// share the plan's time grid.
struct Trajectory {
  ModelParams params;
  FockConfig fock;
  PropagatorMethod method = PropagatorMethod::Automatic;
  bool dissipative = false;
  TimeSeries avg_x{"avg_x", {}, {}};
  TimeSeries avg_p{"avg_p", {}, {}};
  TimeSeries sigma_x{"sigma_x", {}, {}};
  TimeSeries sigma_y{"sigma_y", {}, {}};
  TimeSeries sigma_z{"sigma_z", {}, {}};
  TimeSeries parity{"parity", {}, {}};
  TimeSeries overlap{"overlap", {}, {}};
  TimeSeries purity{"purity", {}, {}};
  TimeSeries left_weight{"left_weight", {}, {}};
  double max_tail_weight = 0.0;
};

/// Runs |down>|0> under the model; takes the master-equation path when
/// gamma > 0 (or spec.force_lindblad).
Trajectory run_trajectory(const ModelParams& params, const RunSpec& spec);

/// Snapshot states of a unitary run at the requested times (each rounded to
/// the sampling grid). Times must lie within [0, t_max].
std::vector<std::pair<double, JointState>> unitary_snapshots(const ModelParams& params,
                                                             const RunSpec& spec,
                                                             const std::vector<double>& times);

// ---------------------------------------------------------------------------
// Collapse detection

enum class ExitChannel { Left, Right, None };
std::string to_string(ExitChannel c);

struct CollapseOptions {
  /// Departure: first time the survival overlap falls below this.
  double departure_threshold = 0.5;
  /// The packet counts as separated from the origin once the overlap is
  /// below this; the merge is searched for afterwards.
  double separation_threshold = 0.05;
  /// A recurrence lobe ends when the overlap falls below this fraction of
  /// its running maximum.
  double lobe_drop = 0.5;
  /// Half-width margin around 1/2 for the left-well weight.
  double exit_margin = 0.05;
};

struct CollapseReport {
  bool found = false;      ///< merge located
  double t_departure = 0.0;
  double t_merge = 0.0;
  double merge_overlap = 0.0;
  /// Time and signed value of the largest |<x>| in (t_merge, 2 t_merge].
  double t_min = 0.0;
  double depth = 0.0;
  /// Steepest d<x>/dt between t_merge and t_min, in the direction of the
  /// excursion (most negative for a left exit).
  double extreme_slope = 0.0;
  double t_extreme_slope = 0.0;
  double left_weight = 0.5;
  ExitChannel exit_channel = ExitChannel::None;
  /// max |<x>| before t_merge.
  double pre_merge_excursion = 0.0;
};

/// `xs` and `overlap` share a time grid; `p_left` may be sampled more
/// coarsely and is interpolated at t_min.
CollapseReport detect_collapse(const TimeSeries& xs, const TimeSeries& overlap,
                               const TimeSeries& p_left, const CollapseOptions& options = {});
CollapseReport detect_collapse(const Trajectory& traj, const CollapseOptions& options = {});

// ---------------------------------------------------------------------------
// Time rescaling

/// First local minimum whose value is at most `fraction` times the
/// global minimum of the series. Returns the sample index.
std::optional<std::size_t> first_deep_minimum(const TimeSeries& xs, double fraction = 0.5);

struct RescaleResult {
  double s = 1.0;
  double t_min_ref = 0.0;
  double t_min = 0.0;
  /// xs(s t') sampled on the reference grid t'.
  TimeSeries rescaled;
};

/// s = t_min(xs) / t_min(xs_ref). Throws std::runtime_error when either
/// series has no deep minimum.
RescaleResult rescale_time(const TimeSeries& xs_ref, const TimeSeries& xs);

// ---------------------------------------------------------------------------
// Sweeps

struct SweepPoint {
  double value = 0.0;
  bool ok = false;
  std::string error;
  CollapseReport report;
  std::vector<double> avg_x;
};

struct SweepResult {
  std::string parameter;
  std::vector<double> times;
  std::vector<SweepPoint> points;  ///< sorted by value
};

std::vector<double> log_spaced(double lo, double hi, int count);

/// Independent runs over mu; `jobs` worker threads (<= 0: OpenMP default).
/// Failed points are recorded with ok = false.
SweepResult sweep_mu(const ModelParams& base, const std::vector<double>& mu_grid,
                     const RunSpec& spec, int jobs = 0,
                     const CollapseOptions& options = {});
/// Same over gamma; gamma > 0 points use the master equation.
SweepResult sweep_gamma(const ModelParams& base, const std::vector<double>& gamma_grid,
                        const RunSpec& spec, int jobs = 0,
                        const CollapseOptions& options = {});

// ---------------------------------------------------------------------------
// Scaling with system size

struct LinearFit {
  double a = 0.0;  ///< slope with respect to log10 R
  double b = 0.0;
  std::vector<double> residuals;
};

/// Ordinary least squares of slope against log10 R. Needs at least three
/// points with distinct R; throws std::invalid_argument otherwise.
LinearFit fit_slope_vs_logR(const std::vector<std::pair<double, double>>& points);

struct ScalingPoint {
  double R = 0.0;
  double mu = 0.0;
  int n_max = 0;
  PropagatorMethod method = PropagatorMethod::Automatic;
  double t_min = 0.0;
  double s = 1.0;
  double slope = 0.0;           ///< extreme d<x>/dt in natural time
  double slope_rescaled = 0.0;  ///< s * slope, the d<x>/dt' value
  double s_predicted = 1.0;     ///< from the scaling law with measured tau
  TimeSeries avg_x;
};

struct ScalingStudy {
  double R_ref = 0.0;
  ScalingLaw law;  ///< |Lambda| analytic, tau measured at R_ref
  double v0 = 0.0;
  std::vector<ScalingPoint> points;  ///< in input order; first is the reference
};

/// Runs the size series with mu = mu_times_R / R at every size. The first
/// entry of `sizes` is the reference.
ScalingStudy run_scaling(const ModelParams& base, const std::vector<double>& sizes,
                         double mu_times_R, const RunSpec& spec, int jobs = 1);

}  // namespace rabicat
