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

// Hot loops shared by the propagators. Every parallel kernel has a serial
// counterpart with the same contract; the serial versions are the
// reference the tests and the benchmark compare against.

#pragma once

#include "rabicat/fock_space.hpp"

namespace rabicat::kernels {

/// y = A x for CSR storage, rows distributed over OpenMP threads.
void csr_matvec(const SparseOperator::Storage& a, const CVector& x, CVector& y);
void csr_matvec_serial(const SparseOperator::Storage& a, const CVector& x, CVector& y);

/// Y = A X for CSR A and dense column-major X, columns distributed over
/// threads.
void csr_matmat(const SparseOperator::Storage& a, const CMatrix& x, CMatrix& y);
void csr_matmat_serial(const SparseOperator::Storage& a, const CMatrix& x, CMatrix& y);

/// y = V c where V is a dense real matrix (eigenvectors of a real
/// symmetric Hamiltonian) and c a complex coefficient vector.
void dense_real_matvec(const Eigen::MatrixXd& v, const CVector& c, CVector& y);
void dense_real_matvec_serial(const Eigen::MatrixXd& v, const CVector& c, CVector& y);

/// Generator of the master equation with a single oscillator damping
/// channel L = sqrt(rate) (I_qubit (x) b):
///
///   out = -i [H, rho] + L rho L^dagger - 1/2 {L^dagger L, rho}
///
/// `levels` is the number of Fock levels per spin block; `rho` must be
/// hermitian (the kernel uses rho H = (H rho)^dagger).
void lindblad_rhs(const SparseOperator::Storage& h, double rate, int levels,
                  const CMatrix& rho, CMatrix& out);

/// Same generator evaluated with dense matrix products, no structural
/// shortcuts. Slow; for tests and benchmarks.
void lindblad_rhs_reference(const CMatrix& h, const CMatrix& jump, const CMatrix& rho,
                            CMatrix& out);

}  // namespace rabicat::kernels
