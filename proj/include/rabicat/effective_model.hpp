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

// Classical large-R picture: the oscillator moves on the energy surface
// obtained with the qubit adiabatically following the field B(x, p).

#pragma once

#include "rabicat/rabi_model.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <string>

namespace rabicat {

/// Qubit aligned (Up) or anti-aligned (Down) with B.
enum class Branch { Up, Down };

/// h_eff(x,p) = (x^2+p^2)/2 + sqrt(2) mu x -+ sqrt(1/4 + 2(lambda^2+mu^2)x^2
///              + 2(lambda delta)^2 p^2 + sqrt(2) mu x).
/// Throws std::domain_error when the radicand is negative.
double h_eff(double x, double p, const ModelParams& params, Branch branch = Branch::Up);

/// The radicand |B|^2 under the square root of h_eff.
double field_radicand(double x, double p, const ModelParams& params);

struct Hessian2 {
  double xx = 0.0;
  double xp = 0.0;
  double pp = 0.0;
};

/// Analytic second derivatives of h_eff at (x, p).
Hessian2 h_eff_hessian(double x, double p, const ModelParams& params, Branch branch = Branch::Up);
/// Analytic gradient (d/dx, d/dp) of h_eff.
std::array<double, 2> h_eff_gradient(double x, double p, const ModelParams& params,
                                     Branch branch = Branch::Up);

/// Matrix of the linearized Hamilton equations at the origin:
///   [  h_px   h_pp ]
///   [ -h_xx  -h_xp ]
Eigen::Matrix2d linearized_matrix(const ModelParams& params);

/// Lambda_+- = +-sqrt((4 lambda^2 - 1)(1 - 4 lambda^2 delta^2)), complex when
/// the origin is stable.
std::array<std::complex<double>, 2> stability_eigenvalues(const ModelParams& params);

enum class StationaryKind { GlobalMinimum, Saddle, LocalMaximum };
std::string to_string(StationaryKind k);

struct StationaryPointReport {
  StationaryKind kind = StationaryKind::GlobalMinimum;
  /// Thresholds used: minimum for lambda <= lower, saddle up to upper.
  double lambda_lower = 0.5;
  double lambda_upper = 0.0;  ///< 1 / (2|delta|), +inf for delta = 0
  std::array<std::complex<double>, 2> eigenvalues{};
  bool stable = true;
  /// |grad h_eff| at the origin. The mu terms cancel at first order, so
  /// the origin stays stationary for the up branch.
  double origin_gradient = 0.0;
};

/// Classification thresholds follow the mu = 0 analysis; eigenvalues come
/// from the linearized matrix at the origin for any mu.
StationaryPointReport classify_origin(const ModelParams& params);

/// |Lambda| = sqrt(|h_xp^2 - h_xx h_pp|) from the linearized matrix.
double lambda_abs(const ModelParams& params);

/// Time for a packet of initial width ~ 1/sqrt(R') to widen to ~ 1/sqrt(R):
/// ln(R'/R) / (2 |Lambda|). Requires R' >= R > 0 and |Lambda| > 0.
double expansion_delay(double R, double R_prime, double lambda_abs);

struct ScalingLaw {
  double lambda_abs = 0.0;
  double tau = 0.0;  ///< first-minimum time at the reference size

  void validate() const;
  /// A = 3 / (2 |Lambda| tau).
  double coefficient() const;
};

/// s = 1 + A ln(R'/R).
double scaling_constant(const ScalingLaw& law, double R, double R_prime);

/// tau that makes scaling_constant return `s` for the pair (R, R_prime).
double tau_from_scaling(double s, double R, double R_prime, double lambda_abs);

/// Extreme rescaled-time slope at size R from v0 measured at R_ref:
/// -v0 - v0 A ln(R / R_ref).
double slope_prediction(const ScalingLaw& law, double v0, double R, double R_ref);

}  // namespace rabicat
