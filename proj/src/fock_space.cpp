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

#include "rabicat/fock_space.hpp"

#include "rabicat/kernels.hpp"

#include <cmath>
#include <sstream>

namespace rabicat {

namespace {

std::string describe_tail(double time, double weight, double tol) {
  std::ostringstream os;
  os << "Fock truncation inadequate at t = " << time << ": tail weight " << weight
     << " exceeds tail_tol " << tol << " (increase n_max)";
  return os.str();
}

}  // namespace

TruncationError::TruncationError(double time, double tail_weight, double tail_tol)
    : std::runtime_error(describe_tail(time, tail_weight, tail_tol)),
      time_(time),
      tail_weight_(tail_weight) {}

// ---------------------------------------------------------------------------
// FockConfig

FockConfig FockConfig::for_size(double R, double tail_tol) {
  if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("R must be positive and finite");
  return FockConfig{static_cast<int>(std::ceil(4.0 * R)), tail_tol};
}

int FockConfig::tail_begin() const noexcept {
  // n > 0.95 n_max
  return static_cast<int>(std::floor(0.95 * n_max)) + 1;
}

void FockConfig::validate() const {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw std::invalid_argument("tail_tol must lie in (0, 1)");
}

// ---------------------------------------------------------------------------
// SparseOperator

SparseOperator::SparseOperator(int dimension, std::span<const Entry> entries, bool hermitian)
    : m_(dimension, dimension), hermitian_(hermitian) {
  if (dimension < 0) throw std::invalid_argument("negative operator dimension");
  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.row < 0 || e.col < 0 || e.row >= dimension || e.col >= dimension)
      throw std::out_of_range("sparse entry index outside the operator dimension");
    triplets.emplace_back(e.row, e.col, e.value);
  }
  m_.setFromTriplets(triplets.begin(), triplets.end());
  m_.prune(cplx(0.0));
  m_.makeCompressed();
  if (hermitian_) check_hermitian();
}

SparseOperator::SparseOperator(Storage storage, bool hermitian)
    : m_(std::move(storage)), hermitian_(hermitian) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("operator must be square");
  m_.prune(cplx(0.0));
  m_.makeCompressed();
  if (hermitian_) check_hermitian();
}

SparseOperator SparseOperator::identity(int dimension) {
  Storage m(dimension, dimension);
  m.setIdentity();
  return SparseOperator(std::move(m), true);
}

SparseOperator SparseOperator::zero(int dimension) {
  return SparseOperator(Storage(dimension, dimension), true);
}

std::vector<SparseOperator::Entry> SparseOperator::entries() const {
  std::vector<Entry> out;
  out.reserve(static_cast<std::size_t>(m_.nonZeros()));
  for (int r = 0; r < m_.outerSize(); ++r)
    for (Storage::InnerIterator it(m_, r); it; ++it)
      out.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()), it.value()});
  return out;
}

SparseOperator SparseOperator::adjoint() const {
  return SparseOperator(Storage(m_.adjoint()), hermitian_);
}

SparseOperator SparseOperator::as_hermitian() const { return SparseOperator(m_, true); }

double SparseOperator::hermiticity_defect() const {
  const Storage diff = m_ - Storage(m_.adjoint());
  double worst = 0.0;
  for (int r = 0; r < diff.outerSize(); ++r)
    for (Storage::InnerIterator it(diff, r); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

void SparseOperator::check_hermitian() const {
  const double defect = hermiticity_defect();
  if (defect != 0.0) {
    std::ostringstream os;
    os << "operator flagged hermitian has max |M - M^dagger| = " << defect;
    throw std::invalid_argument(os.str());
  }
}

bool SparseOperator::is_real() const {
  const cplx* v = m_.valuePtr();
  for (Eigen::Index k = 0; k < m_.nonZeros(); ++k)
    if (v[k].imag() != 0.0) return false;
  return true;
}

double SparseOperator::row_sum_norm() const {
  double worst = 0.0;
  for (int r = 0; r < m_.outerSize(); ++r) {
    double sum = 0.0;
    for (Storage::InnerIterator it(m_, r); it; ++it) sum += std::abs(it.value());
    worst = std::max(worst, sum);
  }
  return worst;
}

CVector SparseOperator::apply(const CVector& v) const {
  if (v.size() != m_.cols()) throw std::invalid_argument("vector length does not match operator");
  CVector out(m_.rows());
  kernels::csr_matvec(m_, v, out);
  return out;
}

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("dimension mismatch in sum");
  return SparseOperator(SparseOperator::Storage(a.m_ + b.m_), a.hermitian_ && b.hermitian_);
}

SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("dimension mismatch in difference");
  return SparseOperator(SparseOperator::Storage(a.m_ - b.m_), a.hermitian_ && b.hermitian_);
}

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("dimension mismatch in product");
  return SparseOperator(SparseOperator::Storage(a.m_ * b.m_), false);
}

SparseOperator operator*(double s, const SparseOperator& a) {
  return SparseOperator(SparseOperator::Storage(cplx(s) * a.m_), a.hermitian_);
}

SparseOperator operator*(cplx s, const SparseOperator& a) {
  return SparseOperator(SparseOperator::Storage(s * a.m_), a.hermitian_ && s.imag() == 0.0);
}

// ---------------------------------------------------------------------------
// Elementary operators

LadderOps build_ladder_ops(const FockConfig& cfg) {
  cfg.validate();
  const int levels = cfg.levels();
  std::vector<SparseOperator::Entry> lower;
  lower.reserve(static_cast<std::size_t>(cfg.n_max));
  for (int n = 1; n < levels; ++n) lower.push_back({n - 1, n, cplx(std::sqrt(double(n)))});
  SparseOperator b(levels, lower, false);
  return {b, b.adjoint()};
}

PauliOps pauli_ops() {
  // Basis order (down, up): index 0 = |down>, 1 = |up>.
  constexpr int kDown = 0;
  constexpr int kUp = 1;
  const cplx i(0.0, 1.0);
  const std::vector<SparseOperator::Entry> sx = {{kDown, kUp, 1.0}, {kUp, kDown, 1.0}};
  const std::vector<SparseOperator::Entry> sy = {{kUp, kDown, -i}, {kDown, kUp, i}};
  const std::vector<SparseOperator::Entry> sz = {{kUp, kUp, 1.0}, {kDown, kDown, -1.0}};
  SparseOperator x(2, sx, true);
  SparseOperator y(2, sy, true);
  SparseOperator plus = x + i * y;
  SparseOperator minus = x - i * y;
  return {x, y, SparseOperator(2, sz, true), plus, minus};
}

SparseOperator tensor(const SparseOperator& a, const SparseOperator& b) {
  const int da = a.dimension();
  const int db = b.dimension();
  std::vector<SparseOperator::Entry> out;
  out.reserve(static_cast<std::size_t>(a.nonzeros() * b.nonzeros()));
  for (const auto& ea : a.entries())
    for (const auto& eb : b.entries())
      out.push_back({ea.row * db + eb.row, ea.col * db + eb.col, ea.value * eb.value});
  return SparseOperator(da * db, out, a.hermitian() && b.hermitian());
}

// ---------------------------------------------------------------------------
// JointState

JointState::JointState(FockConfig cfg, CVector amps) : cfg_(cfg), amps_(std::move(amps)) {
  cfg_.validate();
  if (amps_.size() != cfg_.joint_dimension())
    throw std::invalid_argument("amplitude vector length must be 2 (n_max + 1)");
  const double n = amps_.norm();
  if (!(std::abs(n - 1.0) <= kNormTolerance)) {
    std::ostringstream os;
    os << "joint state is not normalized (norm = " << n << ")";
    throw std::invalid_argument(os.str());
  }
}

JointState JointState::normalized(FockConfig cfg, CVector amps) {
  const double n = amps.norm();
  if (!(n > 0.0)) throw std::invalid_argument("cannot normalize a zero vector");
  amps /= n;
  return JointState(cfg, std::move(amps));
}

double JointState::tail_weight() const {
  const int levels = cfg_.levels();
  const int first = cfg_.tail_begin();
  double w = 0.0;
  for (int s = 0; s < 2; ++s)
    for (int n = first; n < levels; ++n) w += std::norm(amps_[s * levels + n]);
  return w;
}

void JointState::check_tail(double time) const {
  const double w = tail_weight();
  if (!(w < cfg_.tail_tol)) throw TruncationError(time, w, cfg_.tail_tol);
}

JointState initial_state(const FockConfig& cfg) {
  cfg.validate();
  CVector amps = CVector::Zero(cfg.joint_dimension());
  amps[JointState::index(Spin::Down, 0, cfg.n_max)] = 1.0;
  return JointState(cfg, std::move(amps));
}

cplx expectation(const SparseOperator& op, const JointState& psi) {
  return psi.amplitudes().dot(op.apply(psi.amplitudes()));
}

}  // namespace rabicat
