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

// Parallel kernels against their serial references.

#include "rabicat/kernels.hpp"
#include "rabicat/observables.hpp"
#include "rabicat/rabi_model.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace rabicat;

namespace {

const ModelParams kParams{100, 0.75, 0.5, 1.3e-3, 0};

SparseOperator hamiltonian(int n_max) { return build_hamiltonian(kParams, FockConfig{n_max}); }

CVector test_vector(Eigen::Index n) {
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(std::sin(0.1 * i), std::cos(0.3 * i));
  return v / v.norm();
}

void BM_CsrMatvec(benchmark::State& state) {
  const SparseOperator h = hamiltonian(static_cast<int>(state.range(0)));
  const CVector x = test_vector(h.dimension());
  CVector y;
  for (auto _ : state) {
    kernels::csr_matvec(h.storage(), x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

void BM_CsrMatvecSerial(benchmark::State& state) {
  const SparseOperator h = hamiltonian(static_cast<int>(state.range(0)));
  const CVector x = test_vector(h.dimension());
  CVector y;
  for (auto _ : state) {
    kernels::csr_matvec_serial(h.storage(), x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

CMatrix test_density(Eigen::Index n) {
  const CVector v = test_vector(n);
  CMatrix rho = 0.7 * v * v.adjoint();
  rho.diagonal().array() += cplx(0.3 / double(n));
  return rho;
}

void BM_CsrMatmat(benchmark::State& state) {
  const SparseOperator h = hamiltonian(static_cast<int>(state.range(0)));
  const CMatrix x = test_density(h.dimension());
  CMatrix y;
  for (auto _ : state) {
    kernels::csr_matmat(h.storage(), x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

void BM_CsrMatmatSerial(benchmark::State& state) {
  const SparseOperator h = hamiltonian(static_cast<int>(state.range(0)));
  const CMatrix x = test_density(h.dimension());
  CMatrix y;
  for (auto _ : state) {
    kernels::csr_matmat_serial(h.storage(), x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

void BM_LindbladRhs(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  const SparseOperator h = hamiltonian(n_max);
  const CMatrix rho = test_density(h.dimension());
  CMatrix out;
  for (auto _ : state) {
    kernels::lindblad_rhs(h.storage(), 0.05, n_max + 1, rho, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_LindbladRhsReference(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  const FockConfig cfg{n_max};
  const CMatrix h = hamiltonian(n_max).to_dense();
  const CMatrix jump =
      std::sqrt(0.05) * tensor(SparseOperator::identity(2), build_ladder_ops(cfg).annihilation).to_dense();
  const CMatrix rho = test_density(h.rows());
  CMatrix out;
  for (auto _ : state) {
    kernels::lindblad_rhs_reference(h, jump, rho, out);
    benchmark::DoNotOptimize(out.data());
  }
}

OscillatorDensityMatrix test_oscillator(int n_max) {
  const FockConfig cfg{n_max};
  CVector amps = CVector::Zero(cfg.joint_dimension());
  for (int n = 0; n <= n_max; ++n) amps[n] = cplx(std::exp(-0.05 * n), 0.01 * n);
  return reduce_oscillator(JointState::normalized(cfg, amps));
}

PhaseSpaceGridSpec bench_grid() {
  PhaseSpaceGridSpec spec;
  spec.nx = 48;
  spec.np = 48;
  spec.normalization_tol = 0.0;
  return spec;
}

void BM_Wigner(benchmark::State& state) {
  const auto rho = test_oscillator(static_cast<int>(state.range(0)));
  const ModelParams p{10, 0.75, 0.5, 0, 0};
  for (auto _ : state) benchmark::DoNotOptimize(wigner(rho, bench_grid(), p).w.data());
}

void BM_WignerReference(benchmark::State& state) {
  const auto rho = test_oscillator(static_cast<int>(state.range(0)));
  const ModelParams p{10, 0.75, 0.5, 0, 0};
  for (auto _ : state) benchmark::DoNotOptimize(wigner_reference(rho, bench_grid(), p).w.data());
}

}  // namespace

BENCHMARK(BM_CsrMatvec)->Arg(400)->Arg(4000)->Arg(40000);
BENCHMARK(BM_CsrMatvecSerial)->Arg(400)->Arg(4000)->Arg(40000);
BENCHMARK(BM_CsrMatmat)->Arg(60)->Arg(200);
BENCHMARK(BM_CsrMatmatSerial)->Arg(60)->Arg(200);
BENCHMARK(BM_LindbladRhs)->Arg(60)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LindbladRhsReference)->Arg(60)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Wigner)->Arg(40)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WignerReference)->Arg(40)->Arg(120)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
