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

// Oscillator and qubit diagnostics. Phase-space quantities use the scaled
// coordinates x = X / sqrt(R), p = P / sqrt(R), where X and P are the
// standard quadratures with vacuum variance 1/2 (b = (X + iP)/sqrt(2)).

#pragma once

#include "rabicat/evolution.hpp"
#include "rabicat/fock_space.hpp"
#include "rabicat/rabi_model.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace rabicat {

/// Reduced oscillator state over Fock levels 0..n_max.
class OscillatorDensityMatrix {
 public:
  OscillatorDensityMatrix() = default;
  explicit OscillatorDensityMatrix(CMatrix rho);

  const CMatrix& matrix() const noexcept { return rho_; }
  int levels() const noexcept { return static_cast<int>(rho_.rows()); }

  double trace() const { return rho_.trace().real(); }
  double purity() const;
  /// Number of leading levels that carry all but `tail` of the diagonal
  /// weight; higher levels can be dropped from phase-space sums.
  int effective_levels(double tail = 1e-18) const;

 private:
  CMatrix rho_;
};

/// Partial trace over the qubit.
OscillatorDensityMatrix reduce_oscillator(const JointState& psi);
OscillatorDensityMatrix reduce_oscillator(const JointDensityMatrix& rho);

/// 2x2 reduced qubit matrix in the (down, up) basis.
Eigen::Matrix2cd reduce_qubit(const JointState& psi);

/// <x> = Tr[(b^dag + b) rho_osc] / sqrt(2R),  <p> = i Tr[(b^dag - b) rho_osc] / sqrt(2R).
double avg_x(const JointState& psi, const ModelParams& params);
double avg_x(const OscillatorDensityMatrix& rho, const ModelParams& params);
double avg_p(const JointState& psi, const ModelParams& params);
double avg_p(const OscillatorDensityMatrix& rho, const ModelParams& params);

struct PhaseSpaceGridSpec {
  double x_min = -2.0;
  double x_max = 2.0;
  int nx = 256;
  double p_min = -2.0;
  double p_max = 2.0;
  int np = 256;
  /// Reject results whose Riemann sum deviates from 1 by more than this;
  /// non-positive disables the check.
  double normalization_tol = 1e-3;

  void validate() const;
  std::vector<double> x_axis() const;
  std::vector<double> p_axis() const;
};

/// Sampled W(x, p); w(i, j) belongs to (x_axis[i], p_axis[j]).
struct PhaseSpaceGrid {
  std::vector<double> x_axis;
  std::vector<double> p_axis;
  Eigen::MatrixXd w;

  double dx() const;
  double dp() const;
  /// Riemann sum of W dx dp.
  double normalization() const;
  /// Riemann sums of x W and p W.
  double first_moment_x() const;
  double first_moment_p() const;
  double min_value() const { return w.minCoeff(); }
  double max_value() const { return w.maxCoeff(); }
  /// Integral over p, one value per x_axis entry.
  std::vector<double> p_marginal() const;
};

/// Grid too small to hold the state (normalization check failed).
class GridCoverageError : public std::runtime_error {
 public:
  GridCoverageError(double normalization, double tol);
  double normalization() const noexcept { return normalization_; }

 private:
  double normalization_;
};

/// Wigner distribution in scaled coordinates, R * W_std(sqrt(R) x, sqrt(R) p).
/// Grid points are evaluated in parallel; each diagonal of rho is summed
/// with a stable normalized Laguerre recurrence in log-scaled form.
/// Throws GridCoverageError if the normalization check fails.
PhaseSpaceGrid wigner(const OscillatorDensityMatrix& rho, const PhaseSpaceGridSpec& spec,
                      const ModelParams& params);

/// Closed-form Laguerre evaluation of every Fock-pair kernel, serial.
/// Numerically limited to modest level counts (about 150); exists for
/// tests and the benchmark.
PhaseSpaceGrid wigner_reference(const OscillatorDensityMatrix& rho,
                                const PhaseSpaceGridSpec& spec, const ModelParams& params);

/// Harmonic-oscillator eigenfunctions psi_0..psi_{n_max} at X (standard
/// quadrature), by upward recurrence with running rescaling so that no
/// intermediate value overflows.
std::vector<double> hermite_functions(double X, int n_max);

struct CoordinateCurve {
  std::vector<double> x;
  std::vector<double> density;

  /// Trapezoidal integral of the density.
  double integral() const;
};

/// P(x) = <x|rho_osc|x> in scaled coordinates.
CoordinateCurve coordinate_distribution(const OscillatorDensityMatrix& rho,
                                        const std::vector<double>& x_grid,
                                        const ModelParams& params);
CoordinateCurve coordinate_distribution(const JointState& psi, const std::vector<double>& x_grid,
                                        const ModelParams& params);

/// Probability of x < 0, from the exact half-line overlaps of Hermite
/// functions (no quadrature).
double left_well_weight(const OscillatorDensityMatrix& rho);
double left_well_weight(const JointState& psi);

struct QubitObservables {
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  double sigma_z = 0.0;
  double parity = 0.0;
};

QubitObservables qubit_observables(const JointState& psi);
QubitObservables qubit_observables(const JointDensityMatrix& rho);

/// |<psi0|psi_t>|^2.
double survival_overlap(const JointState& psi_t, const JointState& psi0);
/// <psi0|rho|psi0>.
double survival_overlap(const JointDensityMatrix& rho, const JointState& psi0);

/// Uniformly sampled scalar trajectory.
struct TimeSeries {
  std::string label;
  std::vector<double> times;
  std::vector<double> values;

  std::size_t size() const noexcept { return times.size(); }
  /// Throws std::invalid_argument on unequal lengths or non-increasing times.
  void validate() const;
  /// Linear interpolation; clamps outside the sampled range.
  double at(double t) const;
  /// Central differences in the interior, one-sided at the ends.
  TimeSeries derivative() const;
};

}  // namespace rabicat
