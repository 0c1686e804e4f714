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

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <array>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rabicat {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Qubit basis label. The numeric value is the block index in the
/// spin-major joint ordering: all Fock levels of |down> come first.
enum class Spin : int { Down = 0, Up = 1 };

/// Raised when an evolved state puts too much weight on the highest
/// retained Fock levels.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(double time, double tail_weight, double tail_tol);
  double time() const noexcept { return time_; }
  double tail_weight() const noexcept { return tail_weight_; }

 private:
  double time_;
  double tail_weight_;
};

struct FockConfig {
  int n_max = 0;
  double tail_tol = 1e-8;

  /// Truncation sized for the excursion of a cat at system size R:
  /// n_max = ceil(4 R).
  static FockConfig for_size(double R, double tail_tol = 1e-8);

  int levels() const noexcept { return n_max + 1; }
  int joint_dimension() const noexcept { return 2 * (n_max + 1); }
  /// Lowest occupation number counted in the truncation tail
  /// (n > 0.95 n_max).
  int tail_begin() const noexcept;

  void validate() const;
};

/// A sparse complex matrix in row-major CSR storage. A `hermitian`
/// operator is verified entrywise at construction: every stored (i, j, v)
/// has an exact (j, i, conj(v)) partner.
class SparseOperator {
 public:
  using Storage = Eigen::SparseMatrix<cplx, Eigen::RowMajor, int>;

  struct Entry {
    int row;
    int col;
    cplx value;
  };

  SparseOperator() = default;
  /// Duplicate (row, col) entries are summed; exact zeros are dropped.
  SparseOperator(int dimension, std::span<const Entry> entries, bool hermitian);
  SparseOperator(Storage storage, bool hermitian);

  static SparseOperator identity(int dimension);
  static SparseOperator zero(int dimension);

  int dimension() const noexcept { return static_cast<int>(m_.rows()); }
  Eigen::Index nonzeros() const noexcept { return m_.nonZeros(); }
  bool hermitian() const noexcept { return hermitian_; }
  const Storage& storage() const noexcept { return m_; }

  cplx coeff(int row, int col) const { return m_.coeff(row, col); }
  std::vector<Entry> entries() const;

  SparseOperator adjoint() const;
  /// Re-flags the operator as hermitian after an exact check.
  SparseOperator as_hermitian() const;
  /// max |M_ij - conj(M_ji)| over all entries.
  double hermiticity_defect() const;
  /// True when every stored value has zero imaginary part.
  bool is_real() const;
  /// Largest absolute row sum; an upper bound on the spectral radius.
  double row_sum_norm() const;

  CMatrix to_dense() const { return CMatrix(m_); }
  CVector apply(const CVector& v) const;

  friend SparseOperator operator+(const SparseOperator& a, const SparseOperator& b);
  friend SparseOperator operator-(const SparseOperator& a, const SparseOperator& b);
  friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);
  friend SparseOperator operator*(double s, const SparseOperator& a);
  friend SparseOperator operator*(cplx s, const SparseOperator& a);

 private:
  void check_hermitian() const;

  Storage m_;
  bool hermitian_ = false;
};

/// Annihilation b and creation b^dagger on the truncated Fock space.
struct LadderOps {
  SparseOperator annihilation;
  SparseOperator creation;
};

LadderOps build_ladder_ops(const FockConfig& cfg);

/// Pauli matrices in the (down, up) basis. The ladder pair uses the
/// unnormalized convention sigma_pm = sigma_x +- i sigma_y, so that
/// sigma_plus |down> = 2 |up>.
struct PauliOps {
  SparseOperator x;
  SparseOperator y;
  SparseOperator z;
  SparseOperator plus;
  SparseOperator minus;
};

PauliOps pauli_ops();

/// Kronecker product a (x) b. With a acting on the qubit and b on the
/// oscillator this yields the spin-major joint ordering.
SparseOperator tensor(const SparseOperator& a, const SparseOperator& b);

/// Amplitudes over the joint qubit (x) Fock basis, spin-major.
class JointState {
 public:
  static constexpr double kNormTolerance = 1e-10;

  JointState() = default;
  /// Throws std::invalid_argument on a length mismatch or when the norm
  /// differs from 1 by more than kNormTolerance.
  JointState(FockConfig cfg, CVector amps);
  /// Rescales `amps` to unit norm first.
  static JointState normalized(FockConfig cfg, CVector amps);

  static int index(Spin s, int n, int n_max) noexcept {
    return static_cast<int>(s) * (n_max + 1) + n;
  }

  const FockConfig& config() const noexcept { return cfg_; }
  const CVector& amplitudes() const noexcept { return amps_; }
  int dimension() const noexcept { return static_cast<int>(amps_.size()); }

  cplx amp(Spin s, int n) const { return amps_[index(s, n, cfg_.n_max)]; }
  /// The Fock-level amplitudes of one spin block.
  Eigen::VectorBlock<const CVector> block(Spin s) const {
    return amps_.segment(static_cast<int>(s) * cfg_.levels(), cfg_.levels());
  }

  double norm() const { return amps_.norm(); }
  /// Probability on Fock levels n > 0.95 n_max, summed over both spins.
  double tail_weight() const;
  /// Throws TruncationError if tail_weight() exceeds the configured bound.
  void check_tail(double time) const;

 private:
  FockConfig cfg_;
  CVector amps_;
};

/// |down>|0>, the ground state of the free Hamiltonian.
JointState initial_state(const FockConfig& cfg);

/// Expectation value <psi|O|psi>.
cplx expectation(const SparseOperator& op, const JointState& psi);

}  // namespace rabicat
