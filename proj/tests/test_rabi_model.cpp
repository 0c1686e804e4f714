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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rabicat/rabi_model.hpp"

#include <random>

using namespace rabicat;

namespace {

// Element-wise construction in the (spin, n) basis, Down = 0.
Eigen::MatrixXd dense_oracle(const ModelParams& p, int n_max) {
  const int L = n_max + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * L, 2 * L);
  const double g = p.lambda * std::sqrt(p.R);
  const double rot = g * (1.0 + p.delta);    // sigma_pm carry a factor 2
  const double cnt = g * (1.0 - p.delta);
  const double m = p.mu * std::sqrt(p.R);
  auto dn = [&](int n) { return n; };
  auto up = [&](int n) { return L + n; };
  for (int n = 0; n < L; ++n) {
    h(dn(n), dn(n)) = n - p.R / 2.0;
    h(up(n), up(n)) = n + p.R / 2.0;
    if (n + 1 < L) {
      const double s = std::sqrt(n + 1.0);
      // b^dag sigma_-: |up,n> -> |down,n+1>
      h(dn(n + 1), up(n)) += rot * s;
      h(up(n), dn(n + 1)) += rot * s;
      // b^dag sigma_+: |down,n> -> |up,n+1>
      h(up(n + 1), dn(n)) += cnt * s;
      h(dn(n), up(n + 1)) += cnt * s;
      // mu (sigma_z + 1) = 2 mu on the up block
      h(up(n + 1), up(n)) += 2.0 * m * s;
      h(up(n), up(n + 1)) += 2.0 * m * s;
    }
  }
  return h;
}

}  // namespace

TEST_CASE("hamiltonian matches an element-wise oracle") {
  for (const ModelParams& p : {ModelParams{100, 0.75, 0.5, 1.3e-3, 0}, ModelParams{7, 0.3, -0.8, 0.2, 0},
                               ModelParams{2, 1.1, 1.0, 0.0, 0}}) {
    const FockConfig cfg{30};
    const SparseOperator h = build_hamiltonian(p, cfg);
    const Eigen::MatrixXd ref = dense_oracle(p, 30);
    CHECK((h.to_dense().real() - ref).norm() <= 1e-12 * ref.norm());
    CHECK(h.to_dense().imag().norm() == 0.0);
    CHECK(h.hermitian());
    CHECK(h.is_real());
  }
}

TEST_CASE("hamiltonian structure for the reference parameters") {
  const ModelParams p{100, 0.75, 0.5, 1.3e-3, 0};
  const FockConfig cfg = FockConfig::for_size(p.R);
  const SparseOperator h = build_hamiltonian(p, cfg);
  CHECK(h.dimension() == 802);
  const auto& s = h.storage();
  for (int r = 0; r < s.outerSize(); ++r) CHECK(s.outerIndexPtr()[r + 1] - s.outerIndexPtr()[r] <= 5);
  const int up0 = JointState::index(Spin::Up, 0, cfg.n_max);
  const int down1 = JointState::index(Spin::Down, 1, cfg.n_max);
  CHECK(h.coeff(up0, down1).real() == doctest::Approx(11.25).epsilon(1e-14));
}

TEST_CASE("initial energy is -R/2") {
  for (double R : {1.0, 10.0, 100.0}) {
    const ModelParams p{R, 0.75, 0.5, 1.3e-3, 0};
    const FockConfig cfg = FockConfig::for_size(R);
    const cplx e = expectation(build_hamiltonian(p, cfg), initial_state(cfg));
    CHECK(e.real() == doctest::Approx(-R / 2).epsilon(1e-12));
    CHECK(e.imag() == 0.0);
  }
}

TEST_CASE("parity commutes with H only without the mu term") {
  const FockConfig cfg{40};
  const SparseOperator pi = build_parity(cfg);
  const SparseOperator h0 = build_hamiltonian({10, 0.75, 0.5, 0.0, 0}, cfg);
  const SparseOperator h1 = build_hamiltonian({10, 0.75, 0.5, 0.01, 0}, cfg);
  CHECK((h0 * pi - pi * h0).row_sum_norm() == 0.0);
  CHECK((h1 * pi - pi * h1).row_sum_norm() > 1e-3);
  CHECK(expectation(pi, initial_state(cfg)).real() == 1.0);
}

TEST_CASE("field vector norm equals the effective radicand") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 1000; ++k) {
    const ModelParams p{50, std::abs(u(rng)), 0.5 * u(rng), 0.05 * u(rng), 0};
    const double x = u(rng);
    const double q = u(rng);
    const FieldVector b = field_vector(x, q, p);
    const double l2 = p.lambda * p.lambda;
    const double expected = 0.25 + 2 * (l2 + p.mu * p.mu) * x * x +
                            2 * (p.lambda * p.delta) * (p.lambda * p.delta) * q * q + std::sqrt(2.0) * p.mu * x;
    CHECK(b.norm_squared() == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((ModelParams{0, 0.75, 0.5, 0, 0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ModelParams{1, -0.1, 0.5, 0, 0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ModelParams{1, 0.1, 1.5, 0, 0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ModelParams{1, 0.1, 0.5, 0, -1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ModelParams{1, 0.1, 0.5, std::nan(""), 0}.validate()), std::invalid_argument);
  CHECK_NOTHROW((ModelParams{}.validate()));
}
