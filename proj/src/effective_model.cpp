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


#include "rabicat/effective_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rabicat {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

double root_sign(Branch branch) { return branch == Branch::Up ? -1.0 : 1.0; }

double checked_root(double q) {
  if (q < 0.0) throw std::domain_error("effective Hamiltonian radicand is negative");
  return std::sqrt(q);
}

}  // namespace

double field_radicand(double x, double p, const ModelParams& params) {
  const double l2 = params.lambda * params.lambda;
  const double m2 = params.mu * params.mu;
  const double ld = params.lambda * params.delta;
  return 0.25 + 2.0 * (l2 + m2) * x * x + 2.0 * ld * ld * p * p + kSqrt2 * params.mu * x;
}

double h_eff(double x, double p, const ModelParams& params, Branch branch) {
  const double root = checked_root(field_radicand(x, p, params));
  return 0.5 * (x * x + p * p) + kSqrt2 * params.mu * x + root_sign(branch) * root;
}

std::array<double, 2> h_eff_gradient(double x, double p, const ModelParams& params, Branch branch) {
  const double root = checked_root(field_radicand(x, p, params));
  const double ld = params.lambda * params.delta;
  const double qx = 4.0 * (params.lambda * params.lambda + params.mu * params.mu) * x + kSqrt2 * params.mu;
  const double qp = 4.0 * ld * ld * p;
  const double sgn = root_sign(branch);
  return {x + kSqrt2 * params.mu + sgn * qx / (2.0 * root), p + sgn * qp / (2.0 * root)};
}

Hessian2 h_eff_hessian(double x, double p, const ModelParams& params, Branch branch) {
  const double q = field_radicand(x, p, params);
  const double root = checked_root(q);
  if (root == 0.0) throw std::domain_error("effective Hamiltonian is not differentiable where the radicand vanishes");
  const double ld = params.lambda * params.delta;
  const double qxx = 4.0 * (params.lambda * params.lambda + params.mu * params.mu);
  const double qpp = 4.0 * ld * ld;
  const double qx = qxx * x + kSqrt2 * params.mu;
  const double qp = qpp * p;
  const double sgn = root_sign(branch);
  const double q32 = 4.0 * q * root;
  Hessian2 h;
  h.xx = 1.0 + sgn * (qxx / (2.0 * root) - qx * qx / q32);
  h.pp = 1.0 + sgn * (qpp / (2.0 * root) - qp * qp / q32);
  h.xp = sgn * (-qx * qp / q32);
  return h;
}

Eigen::Matrix2d linearized_matrix(const ModelParams& params) {
  const Hessian2 h = h_eff_hessian(0.0, 0.0, params, Branch::Up);
  Eigen::Matrix2d m;
  m << h.xp, h.pp, -h.xx, -h.xp;
  return m;
}

std::array<std::complex<double>, 2> stability_eigenvalues(const ModelParams& params) {
  const Eigen::Matrix2d m = linearized_matrix(params);
  const double half_trace = 0.5 * m.trace();
  const std::complex<double> disc = std::sqrt(std::complex<double>(half_trace * half_trace - m.determinant()));
  return {half_trace + disc, half_trace - disc};
}

std::string to_string(StationaryKind k) {
  switch (k) {
    case StationaryKind::GlobalMinimum:
      return "global_minimum";
    case StationaryKind::Saddle:
      return "saddle";
    case StationaryKind::LocalMaximum:
      return "local_maximum";
  }
  return "unknown";
}

StationaryPointReport classify_origin(const ModelParams& params) {
  params.validate();
  StationaryPointReport r;
  const double ad = std::abs(params.delta);
  r.lambda_lower = 0.5;
  r.lambda_upper = ad == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / (2.0 * ad);
  if (params.lambda <= r.lambda_lower)
    r.kind = StationaryKind::GlobalMinimum;
  else if (params.lambda <= r.lambda_upper)
    r.kind = StationaryKind::Saddle;
  else
    r.kind = StationaryKind::LocalMaximum;
  r.eigenvalues = stability_eigenvalues(params);
  const double scale = std::max({1.0, std::abs(r.eigenvalues[0]), std::abs(r.eigenvalues[1])});
  r.stable = std::abs(r.eigenvalues[0].real()) <= 1e-12 * scale && std::abs(r.eigenvalues[1].real()) <= 1e-12 * scale;
  const auto g = h_eff_gradient(0.0, 0.0, params, Branch::Up);
  r.origin_gradient = std::hypot(g[0], g[1]);
  return r;
}

double lambda_abs(const ModelParams& params) {
  const double l2 = params.lambda * params.lambda;
  return std::sqrt(std::abs((4.0 * l2 - 1.0) * (1.0 - 4.0 * l2 * params.delta * params.delta)));
}

double expansion_delay(double R, double R_prime, double lambda_abs) {
  if (!(R > 0.0) || !(R_prime > 0.0) || !(lambda_abs > 0.0))
    throw std::invalid_argument("expansion_delay needs positive R, R' and |Lambda|");
  if (R_prime < R) throw std::invalid_argument("expansion_delay needs R' >= R");
  return std::log(R_prime / R) / (2.0 * lambda_abs);
}

void ScalingLaw::validate() const {
  if (!(lambda_abs > 0.0) || !std::isfinite(lambda_abs)) throw std::invalid_argument("|Lambda| must be > 0");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be > 0");
}

double ScalingLaw::coefficient() const {
  validate();
  return 3.0 / (2.0 * lambda_abs * tau);
}

double scaling_constant(const ScalingLaw& law, double R, double R_prime) {
  if (!(R > 0.0) || !(R_prime > 0.0)) throw std::invalid_argument("system sizes must be > 0");
  return 1.0 + law.coefficient() * std::log(R_prime / R);
}

double tau_from_scaling(double s, double R, double R_prime, double lambda_abs) {
  if (!(R > 0.0) || !(R_prime > R) || !(lambda_abs > 0.0) || !(s > 1.0))
    throw std::invalid_argument("tau_from_scaling needs R' > R > 0, |Lambda| > 0 and s > 1");
  return 3.0 * std::log(R_prime / R) / (2.0 * lambda_abs * (s - 1.0));
}

double slope_prediction(const ScalingLaw& law, double v0, double R, double R_ref) {
  if (!(v0 > 0.0)) throw std::invalid_argument("v0 must be > 0");
  if (!(R > 0.0) || !(R_ref > 0.0)) throw std::invalid_argument("system sizes must be > 0");
  return -v0 - v0 * law.coefficient() * std::log(R / R_ref);
}

}  // namespace rabicat
