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


#include "rabicat/analysis.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rabicat {

FockConfig RunSpec::resolve_fock(double R) const {
  if (fock.n_max > 0) return fock;
  if (!(levels_per_R > 0.0)) throw std::invalid_argument("levels_per_R must be > 0");
  return FockConfig{static_cast<int>(std::ceil(levels_per_R * R)), fock.tail_tol};
}

// ---------------------------------------------------------------------------
// Trajectories

namespace {

void push(TimeSeries& s, double t, double v) {
  s.times.push_back(t);
  s.values.push_back(v);
}

bool record_left(const RunSpec& spec, int index, int last) {
  if (spec.left_weight_stride <= 0) return false;
  return index % spec.left_weight_stride == 0 || index == last;
}

}  // namespace

Trajectory run_trajectory(const ModelParams& params, const RunSpec& spec) {
  params.validate();
  spec.plan.validate();
  Trajectory tr;
  tr.params = params;
  tr.fock = spec.resolve_fock(params.R);
  tr.fock.validate();
  tr.dissipative = params.gamma > 0.0 || spec.force_lindblad;

  const SparseOperator h = build_hamiltonian(params, tr.fock);
  const JointState psi0 = initial_state(tr.fock);
  const int last = spec.plan.sample_count() - 1;

  if (!tr.dissipative) {
    tr.method = resolve_method(spec.plan, tr.fock.joint_dimension());
    PropagatorPlan plan = spec.plan;
    plan.method = tr.method;
    evolve_unitary(h, psi0, plan, [&](int index, double t, const JointState& psi) {
      const QubitObservables q = qubit_observables(psi);
      push(tr.avg_x, t, avg_x(psi, params));
      push(tr.avg_p, t, avg_p(psi, params));
      push(tr.sigma_x, t, q.sigma_x);
      push(tr.sigma_y, t, q.sigma_y);
      push(tr.sigma_z, t, q.sigma_z);
      push(tr.parity, t, q.parity);
      push(tr.overlap, t, survival_overlap(psi, psi0));
      // Pure joint state: both reduced states share their spectrum.
      const Eigen::Matrix2cd rq = reduce_qubit(psi);
      push(tr.purity, t, rq.squaredNorm());
      if (record_left(spec, index, last)) push(tr.left_weight, t, left_well_weight(psi));
      tr.max_tail_weight = std::max(tr.max_tail_weight, psi.tail_weight());
    });
    return tr;
  }

  tr.method = PropagatorMethod::Automatic;
  const SparseOperator b = build_ladder_ops(tr.fock).annihilation;
  evolve_lindblad(
      h, b, JointDensityMatrix::pure(psi0), params, spec.plan,
      [&](int index, double t, const JointDensityMatrix& rho) {
        const OscillatorDensityMatrix osc = reduce_oscillator(rho);
        const QubitObservables q = qubit_observables(rho);
        push(tr.avg_x, t, avg_x(osc, params));
        push(tr.avg_p, t, avg_p(osc, params));
        push(tr.sigma_x, t, q.sigma_x);
        push(tr.sigma_y, t, q.sigma_y);
        push(tr.sigma_z, t, q.sigma_z);
        push(tr.parity, t, q.parity);
        push(tr.overlap, t, survival_overlap(rho, psi0));
        push(tr.purity, t, osc.purity());
        if (record_left(spec, index, last)) push(tr.left_weight, t, left_well_weight(osc));
        tr.max_tail_weight = std::max(tr.max_tail_weight, rho.tail_weight());
      },
      spec.lindblad);
  return tr;
}

std::vector<std::pair<double, JointState>> unitary_snapshots(const ModelParams& params,
                                                             const RunSpec& spec,
                                                             const std::vector<double>& times) {
  params.validate();
  if (times.empty()) return {};
  PropagatorPlan plan = spec.plan;
  plan.validate();
  std::vector<int> wanted;
  for (double t : times) {
    if (!(t >= 0.0) || t > plan.t_max + 1e-9) throw std::invalid_argument("snapshot time outside [0, t_max]");
    wanted.push_back(static_cast<int>(std::lround(t / plan.dt)));
  }
  const int last = *std::max_element(wanted.begin(), wanted.end());
  plan.t_max = std::max(plan.dt, last * plan.dt);

  const FockConfig fock = spec.resolve_fock(params.R);
  const SparseOperator h = build_hamiltonian(params, fock);
  const JointState psi0 = initial_state(fock);
  plan.method = resolve_method(plan, fock.joint_dimension());

  std::vector<std::optional<JointState>> found(wanted.size());
  evolve_unitary(h, psi0, plan, [&](int index, double, const JointState& psi) {
    for (std::size_t k = 0; k < wanted.size(); ++k)
      if (wanted[k] == index) found[k] = psi;
  });
  std::vector<std::pair<double, JointState>> out;
  for (std::size_t k = 0; k < wanted.size(); ++k) {
    if (!found[k]) throw std::runtime_error("snapshot time was not sampled");
    out.emplace_back(plan.time_at(wanted[k]), *found[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Collapse detection

std::string to_string(ExitChannel c) {
  switch (c) {
    case ExitChannel::Left:
      return "left";
    case ExitChannel::Right:
      return "right";
    case ExitChannel::None:
      return "none";
  }
  return "none";
}

CollapseReport detect_collapse(const TimeSeries& xs, const TimeSeries& overlap, const TimeSeries& p_left,
                               const CollapseOptions& options) {
  xs.validate();
  overlap.validate();
  if (xs.size() != overlap.size()) throw std::invalid_argument("xs and overlap must share a time grid");
  CollapseReport r;
  const std::size_t n = xs.size();
  const auto& t = xs.times;
  const auto& ov = overlap.values;

  std::size_t dep = 0;
  while (dep < n && !(ov[dep] < options.departure_threshold)) ++dep;
  if (dep == n) return r;
  r.t_departure = t[dep];

  std::size_t sep = dep;
  while (sep < n && !(ov[sep] < options.separation_threshold)) ++sep;
  if (sep == n) return r;

  // First recurrence lobe rising clearly above the separation level.
  std::size_t peak = sep;
  double running = ov[sep];
  bool closed = false;
  for (std::size_t i = sep; i < n; ++i) {
    if (ov[i] > running) {
      running = ov[i];
      peak = i;
    }
    if (running > 2.0 * options.separation_threshold && ov[i] < options.lobe_drop * running) {
      closed = true;
      break;
    }
  }
  if (!closed && !(running > 2.0 * options.separation_threshold)) return r;
  r.found = true;
  r.t_merge = t[peak];
  r.merge_overlap = ov[peak];

  for (std::size_t i = 0; i < peak; ++i) r.pre_merge_excursion = std::max(r.pre_merge_excursion, std::abs(xs.values[i]));

  // Largest excursion of <x> in (t_merge, 2 t_merge].
  std::size_t best = peak;
  double best_abs = -1.0;
  for (std::size_t i = peak + 1; i < n && t[i] <= 2.0 * r.t_merge + 1e-12; ++i) {
    if (std::abs(xs.values[i]) > best_abs) {
      best_abs = std::abs(xs.values[i]);
      best = i;
    }
  }
  r.t_min = t[best];
  r.depth = xs.values[best];

  const TimeSeries d = xs.derivative();
  const double dir = r.depth < 0.0 ? 1.0 : -1.0;  // minimise dir * slope
  double steepest = std::numeric_limits<double>::infinity();
  for (std::size_t i = peak; i <= best; ++i) {
    if (dir * d.values[i] < steepest) {
      steepest = dir * d.values[i];
      r.extreme_slope = d.values[i];
      r.t_extreme_slope = t[i];
    }
  }

  if (!p_left.times.empty()) {
    r.left_weight = p_left.at(r.t_min);
    if (r.left_weight > 0.5 + options.exit_margin)
      r.exit_channel = ExitChannel::Left;
    else if (r.left_weight < 0.5 - options.exit_margin)
      r.exit_channel = ExitChannel::Right;
  }
  return r;
}

CollapseReport detect_collapse(const Trajectory& traj, const CollapseOptions& options) {
  return detect_collapse(traj.avg_x, traj.overlap, traj.left_weight, options);
}

// ---------------------------------------------------------------------------
// Time rescaling

std::optional<std::size_t> first_deep_minimum(const TimeSeries& xs, double fraction) {
  const auto& v = xs.values;
  if (v.size() < 3) return std::nullopt;
  const double lowest = *std::min_element(v.begin(), v.end());
  if (!(lowest < 0.0)) return std::nullopt;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] <= v[i - 1] && v[i] <= v[i + 1] && v[i] <= fraction * lowest) return i;
  if (v.back() <= fraction * lowest) return v.size() - 1;
  return std::nullopt;
}

RescaleResult rescale_time(const TimeSeries& xs_ref, const TimeSeries& xs) {
  const auto i_ref = first_deep_minimum(xs_ref);
  const auto i = first_deep_minimum(xs);
  if (!i_ref || !i) throw std::runtime_error("rescale_time: series without a deep minimum");
  RescaleResult r;
  r.t_min_ref = xs_ref.times[*i_ref];
  r.t_min = xs.times[*i];
  if (!(r.t_min_ref > 0.0)) throw std::runtime_error("rescale_time: reference minimum at t = 0");
  r.s = r.t_min / r.t_min_ref;
  r.rescaled = TimeSeries{xs.label, xs_ref.times, std::vector<double>(xs_ref.times.size())};
  for (std::size_t k = 0; k < xs_ref.times.size(); ++k) r.rescaled.values[k] = xs.at(r.s * xs_ref.times[k]);
  return r;
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw std::invalid_argument("log_spaced needs 0 < lo < hi and count >= 2");
  std::vector<double> out(static_cast<std::size_t>(count));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int k = 0; k < count; ++k) out[k] = std::exp(a + (b - a) * k / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

namespace {

void require_monotone(const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("sweep grid must be strictly increasing");
}

template <typename Setter>
SweepResult run_sweep(const std::string& name, const ModelParams& base, const std::vector<double>& grid,
                      const RunSpec& spec, int jobs, const CollapseOptions& options, Setter set) {
  require_monotone(grid);
  SweepResult result;
  result.parameter = name;
  result.points.resize(grid.size());
  const int count = static_cast<int>(grid.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int k = 0; k < count; ++k) {
    SweepPoint& pt = result.points[k];
    pt.value = grid[k];
    try {
      ModelParams p = base;
      set(p, grid[k]);
      const Trajectory tr = run_trajectory(p, spec);
      pt.report = detect_collapse(tr, options);
      pt.avg_x = tr.avg_x.values;
      pt.ok = true;
    } catch (const std::exception& e) {
      pt.ok = false;
      pt.error = e.what();
    }
  }
  const int samples = spec.plan.sample_count();
  result.times.resize(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) result.times[i] = spec.plan.time_at(i);
  return result;
}

}  // namespace

SweepResult sweep_mu(const ModelParams& base, const std::vector<double>& mu_grid, const RunSpec& spec, int jobs,
                     const CollapseOptions& options) {
  return run_sweep("mu", base, mu_grid, spec, jobs, options, [](ModelParams& p, double v) { p.mu = v; });
}

SweepResult sweep_gamma(const ModelParams& base, const std::vector<double>& gamma_grid, const RunSpec& spec,
                        int jobs, const CollapseOptions& options) {
  return run_sweep("gamma", base, gamma_grid, spec, jobs, options, [](ModelParams& p, double v) { p.gamma = v; });
}

// ---------------------------------------------------------------------------
// Scaling with system size

LinearFit fit_slope_vs_logR(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("slope fit needs at least three points");
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& [R, slope] : points) {
    if (!(R > 0.0)) throw std::invalid_argument("system sizes must be > 0");
    sx += std::log10(R);
    sy += slope;
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [R, slope] : points) {
    const double dx = std::log10(R) - mx;
    sxx += dx * dx;
    sxy += dx * (slope - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("slope fit needs distinct system sizes");
  LinearFit fit;
  fit.a = sxy / sxx;
  fit.b = my - fit.a * mx;
  for (const auto& [R, slope] : points) fit.residuals.push_back(slope - (fit.a * std::log10(R) + fit.b));
  return fit;
}

namespace {

/// Most negative d<x>/dt on the descent that ends at sample `end`.
double descent_slope(const TimeSeries& xs, std::size_t end) {
  const TimeSeries d = xs.derivative();
  std::size_t start = end;
  while (start > 0 && d.values[start - 1] < 0.0) --start;
  double lowest = 0.0;
  for (std::size_t i = start; i <= end; ++i) lowest = std::min(lowest, d.values[i]);
  return lowest;
}

}  // namespace

ScalingStudy run_scaling(const ModelParams& base, const std::vector<double>& sizes, double mu_times_R,
                         const RunSpec& spec, int jobs) {
  if (sizes.empty()) throw std::invalid_argument("scaling study needs at least one size");
  ScalingStudy study;
  study.R_ref = sizes.front();
  study.points.resize(sizes.size());
  const int count = static_cast<int>(sizes.size());
  std::vector<std::string> errors(sizes.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, jobs))
  for (int k = 0; k < count; ++k) {
    try {
      ModelParams p = base;
      p.R = sizes[k];
      p.mu = mu_times_R / sizes[k];
      const Trajectory tr = run_trajectory(p, spec);
      ScalingPoint& pt = study.points[k];
      pt.R = p.R;
      pt.mu = p.mu;
      pt.n_max = tr.fock.n_max;
      pt.method = tr.method;
      pt.avg_x = tr.avg_x;
      const auto i = first_deep_minimum(tr.avg_x);
      if (!i) throw std::runtime_error("no deep minimum of <x> at R = " + std::to_string(p.R));
      pt.t_min = tr.avg_x.times[*i];
      pt.slope = descent_slope(tr.avg_x, *i);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error("scaling study failed: " + e);

  const ScalingPoint& ref = study.points.front();
  study.law = ScalingLaw{lambda_abs(base), ref.t_min};
  study.v0 = -ref.slope;
  for (auto& pt : study.points) {
    pt.s = pt.t_min / ref.t_min;
    pt.slope_rescaled = pt.s * pt.slope;
    pt.s_predicted = scaling_constant(study.law, study.R_ref, pt.R);
  }
  return study;
}

}  // namespace rabicat
