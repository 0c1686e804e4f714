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

#include "rabicat/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rabicat::kernels {

namespace {

// Below this many rows the OpenMP fork costs more than it saves.
constexpr int kParallelRows = 2048;

void require_square(const SparseOperator::Storage& a, Eigen::Index n) {
  if (a.rows() != a.cols() || a.cols() != n) throw std::invalid_argument("kernel dimension mismatch");
}

inline cplx csr_row_dot(const int* outer, const int* inner, const cplx* val, int r, const cplx* x) {
  cplx sum(0.0);
  for (int k = outer[r]; k < outer[r + 1]; ++k) sum += val[k] * x[inner[k]];
  return sum;
}

}  // namespace

void csr_matvec(const SparseOperator::Storage& a, const CVector& x, CVector& y) {
  require_square(a, x.size());
  const int rows = static_cast<int>(a.rows());
  y.resize(rows);
  const int* outer = a.outerIndexPtr();
  const int* inner = a.innerIndexPtr();
  const cplx* val = a.valuePtr();
  const cplx* xp = x.data();
  cplx* yp = y.data();
#pragma omp parallel for schedule(static) if (rows >= kParallelRows)
  for (int r = 0; r < rows; ++r) yp[r] = csr_row_dot(outer, inner, val, r, xp);
}

void csr_matvec_serial(const SparseOperator::Storage& a, const CVector& x, CVector& y) {
  require_square(a, x.size());
  const int rows = static_cast<int>(a.rows());
  y.resize(rows);
  for (int r = 0; r < rows; ++r)
    y[r] = csr_row_dot(a.outerIndexPtr(), a.innerIndexPtr(), a.valuePtr(), r, x.data());
}

void csr_matmat(const SparseOperator::Storage& a, const CMatrix& x, CMatrix& y) {
  require_square(a, x.rows());
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(x.cols());
  y.resize(rows, cols);
  const int* outer = a.outerIndexPtr();
  const int* inner = a.innerIndexPtr();
  const cplx* val = a.valuePtr();
#pragma omp parallel for schedule(static) if (static_cast<long>(rows) * cols >= 65536)
  for (int c = 0; c < cols; ++c) {
    const cplx* xc = x.data() + static_cast<std::ptrdiff_t>(c) * rows;
    cplx* yc = y.data() + static_cast<std::ptrdiff_t>(c) * rows;
    for (int r = 0; r < rows; ++r) yc[r] = csr_row_dot(outer, inner, val, r, xc);
  }
}

void csr_matmat_serial(const SparseOperator::Storage& a, const CMatrix& x, CMatrix& y) {
  require_square(a, x.rows());
  y.resize(a.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c)
    for (int r = 0; r < a.rows(); ++r)
      y(r, c) = csr_row_dot(a.outerIndexPtr(), a.innerIndexPtr(), a.valuePtr(), r, x.col(c).data());
}

void dense_real_matvec(const Eigen::MatrixXd& v, const CVector& c, CVector& y) {
  if (v.cols() != c.size()) throw std::invalid_argument("kernel dimension mismatch");
  const Eigen::Index rows = v.rows();
  y.resize(rows);
  const Eigen::VectorXd cr = c.real();
  const Eigen::VectorXd ci = c.imag();
  const int threads = rows >= kParallelRows ? omp_get_max_threads() : 1;
  const Eigen::Index chunk = (rows + threads - 1) / threads;
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int t = 0; t < threads; ++t) {
    const Eigen::Index r0 = t * chunk;
    const Eigen::Index len = std::min(chunk, rows - r0);
    if (len <= 0) continue;
    const auto block = v.middleRows(r0, len);
    const Eigen::VectorXd re = block * cr;
    const Eigen::VectorXd im = block * ci;
    for (Eigen::Index k = 0; k < len; ++k) y[r0 + k] = cplx(re[k], im[k]);
  }
}

void dense_real_matvec_serial(const Eigen::MatrixXd& v, const CVector& c, CVector& y) {
  if (v.cols() != c.size()) throw std::invalid_argument("kernel dimension mismatch");
  y = CVector::Zero(v.rows());
  for (Eigen::Index j = 0; j < v.cols(); ++j)
    for (Eigen::Index r = 0; r < v.rows(); ++r) y[r] += v(r, j) * c[j];
}

void lindblad_rhs(const SparseOperator::Storage& h, double rate, int levels, const CMatrix& rho,
                  CMatrix& out) {
  require_square(h, rho.rows());
  const int dim = static_cast<int>(rho.rows());
  if (levels <= 0 || dim % levels != 0) throw std::invalid_argument("levels must divide the dimension");

  thread_local CMatrix hrho;
  csr_matmat(h, rho, hrho);

  thread_local std::vector<double> occupation;
  thread_local std::vector<double> lift;
  occupation.resize(static_cast<std::size_t>(dim));
  lift.resize(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    const int n = i % levels;
    occupation[i] = n;
    lift[i] = n + 1 < levels ? std::sqrt(double(n + 1)) : 0.0;
  }

  out.resize(dim, dim);
  const cplx minus_i(0.0, -1.0);
  const double* occ = occupation.data();
  const double* up = lift.data();
  // rho H = (H rho)^dagger for hermitian H and rho.
#pragma omp parallel for schedule(static) if (dim >= 256)
  for (int j = 0; j < dim; ++j) {
    const bool j_lifts = up[j] != 0.0;
    for (int i = 0; i < dim; ++i) {
      cplx v = minus_i * (hrho(i, j) - std::conj(hrho(j, i)));
      if (rate != 0.0) {
        cplx d = -0.5 * (occ[i] + occ[j]) * rho(i, j);
        if (j_lifts && up[i] != 0.0) d += up[i] * up[j] * rho(i + 1, j + 1);
        v += rate * d;
      }
      out(i, j) = v;
    }
  }
}

void lindblad_rhs_reference(const CMatrix& h, const CMatrix& jump, const CMatrix& rho, CMatrix& out) {
  const CMatrix jdj = jump.adjoint() * jump;
  const cplx i(0.0, 1.0);
  out = -i * (h * rho - rho * h) + jump * rho * jump.adjoint() - 0.5 * (jdj * rho + rho * jdj);
}

}  // namespace rabicat::kernels
