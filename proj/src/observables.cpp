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

#include "rabicat/observables.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace rabicat {

// ---------------------------------------------------------------------------
// Reduced states

OscillatorDensityMatrix::OscillatorDensityMatrix(CMatrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0)
    throw std::invalid_argument("oscillator density matrix must be square and non-empty");
}

double OscillatorDensityMatrix::purity() const {
  // Tr rho^2 = sum |rho_ij|^2 for hermitian rho.
  return rho_.squaredNorm();
}

int OscillatorDensityMatrix::effective_levels(double tail) const {
  double acc = 0.0;
  for (int n = levels() - 1; n > 0; --n) {
    acc += std::max(0.0, rho_(n, n).real());
    if (acc > tail) return n + 1;
  }
  return 1;
}

OscillatorDensityMatrix reduce_oscillator(const JointState& psi) {
  const auto down = psi.block(Spin::Down);
  const auto up = psi.block(Spin::Up);
  return OscillatorDensityMatrix(down * down.adjoint() + up * up.adjoint());
}

OscillatorDensityMatrix reduce_oscillator(const JointDensityMatrix& rho) {
  const int levels = rho.config().levels();
  const CMatrix& m = rho.matrix();
  return OscillatorDensityMatrix(m.topLeftCorner(levels, levels) + m.bottomRightCorner(levels, levels));
}

Eigen::Matrix2cd reduce_qubit(const JointState& psi) {
  Eigen::Matrix2cd q;
  const auto down = psi.block(Spin::Down);
  const auto up = psi.block(Spin::Up);
  q(0, 0) = down.squaredNorm();
  q(1, 1) = up.squaredNorm();
  q(0, 1) = up.dot(down);  // sum_n a_down,n conj(a_up,n)
  q(1, 0) = std::conj(q(0, 1));
  return q;
}

namespace {

/// <b> from amplitudes.
cplx lowering_expectation(const JointState& psi) {
  cplx beta(0.0);
  for (int s = 0; s < 2; ++s) {
    const auto a = psi.block(static_cast<Spin>(s));
    for (Eigen::Index n = 0; n + 1 < a.size(); ++n) beta += std::conj(a[n]) * std::sqrt(double(n + 1)) * a[n + 1];
  }
  return beta;
}

cplx lowering_expectation(const OscillatorDensityMatrix& rho) {
  cplx beta(0.0);
  const CMatrix& m = rho.matrix();
  for (int n = 0; n + 1 < rho.levels(); ++n) beta += std::sqrt(double(n + 1)) * m(n + 1, n);
  return beta;
}

}  // namespace

double avg_x(const JointState& psi, const ModelParams& params) {
  return 2.0 * lowering_expectation(psi).real() / std::sqrt(2.0 * params.R);
}
double avg_x(const OscillatorDensityMatrix& rho, const ModelParams& params) {
  return 2.0 * lowering_expectation(rho).real() / std::sqrt(2.0 * params.R);
}
double avg_p(const JointState& psi, const ModelParams& params) {
  return 2.0 * lowering_expectation(psi).imag() / std::sqrt(2.0 * params.R);
}
double avg_p(const OscillatorDensityMatrix& rho, const ModelParams& params) {
  return 2.0 * lowering_expectation(rho).imag() / std::sqrt(2.0 * params.R);
}

// ---------------------------------------------------------------------------
// Phase-space grid

namespace {

std::vector<double> uniform_axis(double lo, double hi, int n) {
  std::vector<double> axis(static_cast<std::size_t>(n));
  if (n == 1) {
    axis[0] = 0.5 * (lo + hi);
    return axis;
  }
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) axis[i] = lo + step * i;
  return axis;
}

double axis_step(const std::vector<double>& axis) {
  return axis.size() > 1 ? axis[1] - axis[0] : 1.0;
}

}  // namespace

void PhaseSpaceGridSpec::validate() const {
  if (nx < 2 || np < 2) throw std::invalid_argument("phase-space grid needs at least 2 points per axis");
  if (!(x_max > x_min) || !(p_max > p_min)) throw std::invalid_argument("phase-space grid bounds are empty");
}

std::vector<double> PhaseSpaceGridSpec::x_axis() const { return uniform_axis(x_min, x_max, nx); }
std::vector<double> PhaseSpaceGridSpec::p_axis() const { return uniform_axis(p_min, p_max, np); }

double PhaseSpaceGrid::dx() const { return axis_step(x_axis); }
double PhaseSpaceGrid::dp() const { return axis_step(p_axis); }

double PhaseSpaceGrid::normalization() const { return w.sum() * dx() * dp(); }

double PhaseSpaceGrid::first_moment_x() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < x_axis.size(); ++i) acc += x_axis[i] * w.row(i).sum();
  return acc * dx() * dp();
}

double PhaseSpaceGrid::first_moment_p() const {
  double acc = 0.0;
  for (std::size_t j = 0; j < p_axis.size(); ++j) acc += p_axis[j] * w.col(j).sum();
  return acc * dx() * dp();
}

std::vector<double> PhaseSpaceGrid::p_marginal() const {
  std::vector<double> out(x_axis.size());
  for (std::size_t i = 0; i < x_axis.size(); ++i) out[i] = w.row(i).sum() * dp();
  return out;
}

GridCoverageError::GridCoverageError(double normalization, double tol)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "Wigner grid does not cover the state: integral " << normalization
           << " differs from 1 by more than " << tol << " (grid too small)";
        return os.str();
      }()),
      normalization_(normalization) {}

namespace {

// Values above this trigger a common rescaling of the Laguerre recurrence.
constexpr double kRescaleAbove = 1e150;
constexpr double kRescaleFactor = 1e-150;
const double kLogRescale = -std::log(kRescaleFactor);

/// Diagonals rho(m, m + k) of the leading `levels` block, stored contiguously.
std::vector<std::vector<cplx>> upper_diagonals(const CMatrix& rho, int levels) {
  std::vector<std::vector<cplx>> d(static_cast<std::size_t>(levels));
  for (int k = 0; k < levels; ++k) {
    auto& row = d[static_cast<std::size_t>(k)];
    row.resize(static_cast<std::size_t>(levels - k));
    for (int m = 0; m + k < levels; ++m) row[static_cast<std::size_t>(m)] = rho(m, m + k);
  }
  return d;
}

/// W_std at one phase-space point (standard quadratures). Each diagonal k is
/// summed with the normalized Laguerre recurrence
/// g_m = (-1)^m sqrt(m! k!/(m+k)!) L_m^(k)(2 r^2), which is forward stable
/// inside and outside the classical region; magnitudes are carried in logs.
double wigner_point(const std::vector<std::vector<cplx>>& diag, const std::vector<double>& log_fact,
                    double X, double P) {
  const int levels = static_cast<int>(diag.size());
  const double r2 = X * X + P * P;
  const double y = 2.0 * r2;
  const double abs2a = std::sqrt(2.0 * r2);
  const double log2a = abs2a > 0.0 ? std::log(abs2a) : 0.0;
  const double theta = std::atan2(P, X);
  double total = 0.0;
  for (int k = 0; k < levels; ++k) {
    if (k > 0 && abs2a == 0.0) break;
    const auto& c = diag[static_cast<std::size_t>(k)];
    const int len = static_cast<int>(c.size());
    cplx sum = c[0];
    double log_scale = 0.0;
    double prev = 0.0;
    double cur = 1.0;
    for (int m = 0; m + 1 < len; ++m) {
      const double next = -((2.0 * m + 1.0 + k - y) * cur + std::sqrt(double(m) * (m + k)) * prev) /
                          std::sqrt((m + 1.0) * (m + 1.0 + k));
      prev = cur;
      cur = next;
      if (std::abs(cur) > kRescaleAbove) {
        prev *= kRescaleFactor;
        cur *= kRescaleFactor;
        sum *= kRescaleFactor;
        log_scale += kLogRescale;
      }
      sum += c[static_cast<std::size_t>(m + 1)] * cur;
    }
    if (sum == cplx(0.0)) continue;
    const double log_pref = log_scale - r2 + k * log2a - 0.5 * log_fact[static_cast<std::size_t>(k)];
    const double re = (sum * std::polar(1.0, k * theta)).real();
    const double weight = k == 0 ? 1.0 : 2.0;
    total += weight * re * std::exp(log_pref);
  }
  return total * std::numbers::inv_pi;
}

void check_coverage(const PhaseSpaceGrid& grid, const PhaseSpaceGridSpec& spec) {
  if (spec.normalization_tol <= 0.0) return;
  const double norm = grid.normalization();
  if (!(std::abs(norm - 1.0) <= spec.normalization_tol)) throw GridCoverageError(norm, spec.normalization_tol);
}

}  // namespace

PhaseSpaceGrid wigner(const OscillatorDensityMatrix& rho, const PhaseSpaceGridSpec& spec,
                      const ModelParams& params) {
  spec.validate();
  PhaseSpaceGrid grid{spec.x_axis(), spec.p_axis(), Eigen::MatrixXd(spec.nx, spec.np)};
  const int m_levels = rho.effective_levels();
  const double sqrt_r = std::sqrt(params.R);
  const auto diag = upper_diagonals(rho.matrix(), m_levels);
  std::vector<double> log_fact(static_cast<std::size_t>(m_levels));
  for (int k = 0; k < m_levels; ++k) log_fact[static_cast<std::size_t>(k)] = std::lgamma(k + 1.0);
  const int total = spec.nx * spec.np;
#pragma omp parallel for schedule(dynamic, 64)
  for (int k = 0; k < total; ++k) {
    const int i = k / spec.np;
    const int j = k % spec.np;
    grid.w(i, j) = params.R * wigner_point(diag, log_fact, sqrt_r * grid.x_axis[i], sqrt_r * grid.p_axis[j]);
  }
  check_coverage(grid, spec);
  return grid;
}

namespace {

/// Associated Laguerre L_n^{(k)}(y) by the standard three-term recurrence.
double laguerre(int n, int k, double y) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + k - y;
  for (int j = 1; j < n; ++j) {
    const double next = ((2.0 * j + 1.0 + k - y) * cur - (j + k) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Kernel of |m><n| for n >= m:
/// (-1)^m / pi sqrt(m!/n!) (2a)^(n-m) e^{-2|a|^2} L_m^(n-m)(4|a|^2), a = (X+iP)/sqrt 2.
cplx wigner_kernel_closed_form(int m, int n, double X, double P) {
  const cplx a(X / std::numbers::sqrt2, P / std::numbers::sqrt2);
  const double r2 = X * X + P * P;
  const int k = n - m;
  const double lag = laguerre(m, k, 2.0 * r2);
  if (lag == 0.0) return 0.0;
  const double abs2a = std::abs(2.0 * a);
  double log_mag = 0.5 * (std::lgamma(m + 1.0) - std::lgamma(n + 1.0)) - r2 + std::log(std::abs(lag));
  if (k > 0) {
    if (abs2a == 0.0) return 0.0;
    log_mag += k * std::log(abs2a);
  }
  const double sign = ((m % 2 == 0) ? 1.0 : -1.0) * (lag < 0.0 ? -1.0 : 1.0);
  const double phase = k > 0 ? k * std::arg(a) : 0.0;
  return sign * std::numbers::inv_pi * std::polar(std::exp(log_mag), phase);
}

}  // namespace

PhaseSpaceGrid wigner_reference(const OscillatorDensityMatrix& rho, const PhaseSpaceGridSpec& spec,
                                const ModelParams& params) {
  spec.validate();
  PhaseSpaceGrid grid{spec.x_axis(), spec.p_axis(), Eigen::MatrixXd(spec.nx, spec.np)};
  const int levels = rho.levels();
  const double sqrt_r = std::sqrt(params.R);
  const CMatrix& m = rho.matrix();
  for (int i = 0; i < spec.nx; ++i)
    for (int j = 0; j < spec.np; ++j) {
      const double X = sqrt_r * grid.x_axis[i];
      const double P = sqrt_r * grid.p_axis[j];
      double acc = 0.0;
      for (int a = 0; a < levels; ++a) {
        acc += (m(a, a) * wigner_kernel_closed_form(a, a, X, P)).real();
        for (int b = a + 1; b < levels; ++b) acc += 2.0 * (m(a, b) * wigner_kernel_closed_form(a, b, X, P)).real();
      }
      grid.w(i, j) = params.R * acc;
    }
  check_coverage(grid, spec);
  return grid;
}

// ---------------------------------------------------------------------------
// Coordinate distribution

std::vector<double> hermite_functions(double X, int n_max) {
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  const std::size_t count = static_cast<std::size_t>(n_max) + 1;
  // value_n * exp(log_n) = psi_n(X); values are kept O(1).
  std::vector<double> value(count);
  std::vector<double> log_factor(count);
  const double base = -0.5 * X * X - 0.25 * std::log(std::numbers::pi);
  double log_cur = base;
  double prev = 0.0;
  double cur = 1.0;
  value[0] = cur;
  log_factor[0] = log_cur;
  for (int n = 0; n < n_max; ++n) {
    double next = std::sqrt(2.0 / (n + 1.0)) * X * cur - std::sqrt(n / (n + 1.0)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e150) {
      cur *= 1e-150;
      prev *= 1e-150;
      log_cur += 150.0 * std::numbers::ln10;
    }
    value[n + 1] = cur;
    log_factor[n + 1] = log_cur;
  }
  std::vector<double> out(count);
  for (std::size_t n = 0; n < count; ++n) {
    if (value[n] == 0.0) {
      out[n] = 0.0;
      continue;
    }
    const double lg = std::log(std::abs(value[n])) + log_factor[n];
    out[n] = lg < -745.0 ? 0.0 : std::copysign(std::exp(lg), value[n]);
  }
  return out;
}

double CoordinateCurve::integral() const {
  double acc = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) acc += 0.5 * (density[i] + density[i - 1]) * (x[i] - x[i - 1]);
  return acc;
}

CoordinateCurve coordinate_distribution(const OscillatorDensityMatrix& rho,
                                        const std::vector<double>& x_grid, const ModelParams& params) {
  CoordinateCurve curve{x_grid, std::vector<double>(x_grid.size())};
  const int levels = rho.effective_levels();
  const double sqrt_r = std::sqrt(params.R);
  const CMatrix block = rho.matrix().topLeftCorner(levels, levels);
  const int count = static_cast<int>(x_grid.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < count; ++i) {
    const std::vector<double> h = hermite_functions(sqrt_r * x_grid[i], levels - 1);
    const Eigen::Map<const Eigen::VectorXd> v(h.data(), levels);
    curve.density[i] = sqrt_r * (v.cast<cplx>().transpose() * block * v.cast<cplx>()).value().real();
  }
  return curve;
}

CoordinateCurve coordinate_distribution(const JointState& psi, const std::vector<double>& x_grid,
                                        const ModelParams& params) {
  CoordinateCurve curve{x_grid, std::vector<double>(x_grid.size())};
  const int n_max = psi.config().n_max;
  const double sqrt_r = std::sqrt(params.R);
  const auto down = psi.block(Spin::Down);
  const auto up = psi.block(Spin::Up);
  const int count = static_cast<int>(x_grid.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < count; ++i) {
    const std::vector<double> h = hermite_functions(sqrt_r * x_grid[i], n_max);
    const Eigen::Map<const Eigen::VectorXd> v(h.data(), n_max + 1);
    const cplx fd = (down.transpose() * v.cast<cplx>()).value();
    const cplx fu = (up.transpose() * v.cast<cplx>()).value();
    curve.density[i] = sqrt_r * (std::norm(fd) + std::norm(fu));
  }
  return curve;
}

namespace {

/// psi_n(0) and psi_n'(0) for n = 0..n_max.
struct OriginValues {
  std::vector<double> value;
  std::vector<double> slope;
};

OriginValues origin_values(int n_max) {
  OriginValues o{std::vector<double>(n_max + 2, 0.0), std::vector<double>(n_max + 1, 0.0)};
  o.value[0] = std::pow(std::numbers::pi, -0.25);
  for (int n = 1; n + 1 <= n_max + 1; n += 2) {
    if (n + 1 <= n_max + 1) o.value[n + 1] = -std::sqrt(double(n) / (n + 1.0)) * o.value[n - 1];
  }
  for (int n = 0; n <= n_max; ++n) {
    const double lower = n > 0 ? std::sqrt(n / 2.0) * o.value[n - 1] : 0.0;
    o.slope[n] = lower - std::sqrt((n + 1) / 2.0) * o.value[n + 1];
  }
  o.value.resize(n_max + 1);
  return o;
}

/// Integral of psi_m psi_n over X < 0.
inline double half_line_overlap(const OriginValues& o, int m, int n) {
  if (m == n) return 0.5;
  if ((m + n) % 2 == 0) return 0.0;
  return (o.value[m] * o.slope[n] - o.value[n] * o.slope[m]) / (2.0 * (m - n));
}

}  // namespace

double left_well_weight(const OscillatorDensityMatrix& rho) {
  const int levels = rho.effective_levels();
  const OriginValues o = origin_values(levels - 1);
  const CMatrix& m = rho.matrix();
  double acc = 0.0;
  for (int a = 0; a < levels; ++a) {
    acc += 0.5 * m(a, a).real();
    for (int b = a + 1; b < levels; b += 2) acc += 2.0 * m(a, b).real() * half_line_overlap(o, a, b);
  }
  return acc;
}

double left_well_weight(const JointState& psi) {
  const int levels = psi.config().levels();
  const OriginValues o = origin_values(levels - 1);
  double acc = 0.0;
  for (int s = 0; s < 2; ++s) {
    const auto v = psi.block(static_cast<Spin>(s));
    for (int a = 0; a < levels; ++a) {
      acc += 0.5 * std::norm(v[a]);
      for (int b = a + 1; b < levels; b += 2)
        acc += 2.0 * (v[a] * std::conj(v[b])).real() * half_line_overlap(o, a, b);
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Qubit observables and overlaps

QubitObservables qubit_observables(const JointState& psi) {
  const auto down = psi.block(Spin::Down);
  const auto up = psi.block(Spin::Up);
  const cplx cross = down.dot(up);  // sum conj(a_down) a_up
  QubitObservables q;
  q.sigma_x = 2.0 * cross.real();
  q.sigma_y = -2.0 * cross.imag();
  q.sigma_z = up.squaredNorm() - down.squaredNorm();
  double parity = 0.0;
  for (int s = 0; s < 2; ++s) {
    const auto v = psi.block(static_cast<Spin>(s));
    for (Eigen::Index n = 0; n < v.size(); ++n) parity += ((n + s) % 2 == 0 ? 1.0 : -1.0) * std::norm(v[n]);
  }
  q.parity = parity;
  return q;
}

QubitObservables qubit_observables(const JointDensityMatrix& rho) {
  const int levels = rho.config().levels();
  const CMatrix& m = rho.matrix();
  cplx cross(0.0);  // sum_n rho(up n, down n)
  double sz = 0.0;
  double parity = 0.0;
  for (int n = 0; n < levels; ++n) {
    cross += m(levels + n, n);
    const double pd = m(n, n).real();
    const double pu = m(levels + n, levels + n).real();
    sz += pu - pd;
    parity += (n % 2 == 0 ? 1.0 : -1.0) * (pd - pu);
  }
  return {2.0 * cross.real(), -2.0 * cross.imag(), sz, parity};
}

double survival_overlap(const JointState& psi_t, const JointState& psi0) {
  return std::norm(psi0.amplitudes().dot(psi_t.amplitudes()));
}

double survival_overlap(const JointDensityMatrix& rho, const JointState& psi0) {
  const CVector& a = psi0.amplitudes();
  return a.dot(rho.matrix() * a).real();
}

// ---------------------------------------------------------------------------
// TimeSeries

void TimeSeries::validate() const {
  if (times.size() != values.size()) throw std::invalid_argument("time series '" + label + "' has unequal lengths");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("time series '" + label + "' is not increasing");
}

double TimeSeries::at(double t) const {
  if (times.empty()) throw std::out_of_range("empty time series");
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  const std::size_t lo = hi - 1;
  const double f = (t - times[lo]) / (times[hi] - times[lo]);
  return values[lo] + f * (values[hi] - values[lo]);
}

TimeSeries TimeSeries::derivative() const {
  TimeSeries d{"d_" + label, times, std::vector<double>(values.size(), 0.0)};
  const std::size_t n = values.size();
  if (n < 2) return d;
  d.values[0] = (values[1] - values[0]) / (times[1] - times[0]);
  d.values[n - 1] = (values[n - 1] - values[n - 2]) / (times[n - 1] - times[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) d.values[i] = (values[i + 1] - values[i - 1]) / (times[i + 1] - times[i - 1]);
  return d;
}

}  // namespace rabicat
