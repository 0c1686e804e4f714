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

#include "rabicat/fock_space.hpp"
#include "rabicat/kernels.hpp"

#include <random>

using namespace rabicat;

namespace {

CMatrix random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

SparseOperator random_sparse_hermitian(int n, int per_row, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> col(0, n - 1);
  std::vector<SparseOperator::Entry> e;
  for (int r = 0; r < n; ++r) {
    e.push_back({r, r, cplx(g(rng))});
    for (int k = 0; k < per_row; ++k) {
      const int c = col(rng);
      if (c == r) continue;
      const cplx v(g(rng), g(rng));
      e.push_back({r, c, v});
      e.push_back({c, r, std::conj(v)});
    }
  }
  return SparseOperator(n, e, true);
}

}  // namespace

TEST_CASE("ladder operators obey the truncated commutator") {
  const FockConfig cfg{5};
  const auto [b, bd] = build_ladder_ops(cfg);
  const CMatrix comm = (b * bd - bd * b).to_dense();
  for (int n = 0; n < 5; ++n) CHECK(comm(n, n).real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(comm(5, 5).real() == doctest::Approx(-5.0).epsilon(1e-14));
  CHECK((comm - CMatrix(comm.diagonal().asDiagonal())).norm() == doctest::Approx(0.0));
  CHECK(b.coeff(2, 3) == cplx(std::sqrt(3.0)));
  CHECK(bd.coeff(3, 2) == cplx(std::sqrt(3.0)));
}

TEST_CASE("pauli operators use the sigma_x +- i sigma_y ladder convention") {
  const PauliOps s = pauli_ops();
  const cplx i(0.0, 1.0);
  CHECK(s.plus.coeff(1, 0) == cplx(2.0));
  CHECK(s.plus.coeff(0, 1) == cplx(0.0));
  CHECK(s.minus.coeff(0, 1) == cplx(2.0));
  CHECK(s.z.coeff(0, 0) == cplx(-1.0));
  CHECK(s.z.coeff(1, 1) == cplx(1.0));
  const CMatrix xy = (s.x * s.y).to_dense();
  CHECK((xy - i * s.z.to_dense()).norm() < 1e-15);
  CHECK(s.x.hermitian());
  CHECK(!s.plus.hermitian());
}

TEST_CASE("fock configuration") {
  CHECK(FockConfig::for_size(100).n_max == 400);
  CHECK(FockConfig::for_size(100.2).n_max == 401);
  const FockConfig cfg{400};
  CHECK(cfg.joint_dimension() == 802);
  CHECK(cfg.tail_begin() == 381);
  CHECK_THROWS_AS(FockConfig{0}.validate(), std::invalid_argument);
  CHECK_THROWS_AS((FockConfig{5, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS(FockConfig::for_size(-1.0));
}

TEST_CASE("sparse operator construction and algebra") {
  const std::vector<SparseOperator::Entry> bad = {{0, 1, cplx(1.0)}};
  CHECK_THROWS_AS(SparseOperator(2, bad, true), std::invalid_argument);
  const std::vector<SparseOperator::Entry> outside = {{0, 3, cplx(1.0)}};
  CHECK_THROWS_AS(SparseOperator(2, outside, false), std::out_of_range);

  const SparseOperator id = SparseOperator::identity(3);
  const SparseOperator z = SparseOperator::zero(3);
  CHECK(id.nonzeros() == 3);
  CHECK(z.nonzeros() == 0);
  CHECK((id - id).nonzeros() == 0);
  CHECK_THROWS((id + SparseOperator::identity(4)));

  const PauliOps s = pauli_ops();
  const SparseOperator t = tensor(s.x, SparseOperator::identity(3));
  CHECK(t.dimension() == 6);
  CHECK(t.coeff(0, 3) == cplx(1.0));
  CHECK(t.coeff(5, 2) == cplx(1.0));
}

TEST_CASE("joint state indexing, normalisation and tail") {
  const FockConfig cfg{20, 1e-6};
  CHECK(JointState::index(Spin::Down, 3, 20) == 3);
  CHECK(JointState::index(Spin::Up, 3, 20) == 24);
  const JointState psi0 = initial_state(cfg);
  CHECK(psi0.amp(Spin::Down, 0) == cplx(1.0));
  CHECK(psi0.norm() == doctest::Approx(1.0));
  CHECK(psi0.tail_weight() == 0.0);

  CVector v = CVector::Zero(cfg.joint_dimension());
  v[0] = 2.0;
  CHECK_THROWS_AS(JointState(cfg, v), std::invalid_argument);
  CHECK_THROWS_AS(JointState(cfg, CVector::Ones(3)), std::invalid_argument);

  v[JointState::index(Spin::Up, 20, 20)] = 1e-2;
  const JointState tailed = JointState::normalized(cfg, v);
  CHECK(tailed.tail_weight() > 1e-6);
  CHECK_THROWS_AS(tailed.check_tail(1.5), TruncationError);
  try {
    tailed.check_tail(1.5);
  } catch (const TruncationError& e) {
    CHECK(e.time() == 1.5);
    CHECK(e.tail_weight() == doctest::Approx(tailed.tail_weight()));
  }
}

TEST_CASE("expectation of hermitian operators is real") {
  std::mt19937_64 rng(7);
  const FockConfig cfg{10};
  std::normal_distribution<double> g;
  CVector v(cfg.joint_dimension());
  for (auto& c : v) c = cplx(g(rng), g(rng));
  const JointState psi = JointState::normalized(cfg, v);
  const SparseOperator h = random_sparse_hermitian(cfg.joint_dimension(), 3, rng);
  const cplx e = expectation(h, psi);
  CHECK(std::abs(e.imag()) < 1e-12);
  CHECK(e.real() == doctest::Approx(psi.amplitudes().dot(h.to_dense() * psi.amplitudes()).real()));
}

TEST_CASE("parallel kernels agree with the serial reference") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int n : {17, 300, 5000}) {
    const SparseOperator h = random_sparse_hermitian(n, 4, rng);
    CVector x(n);
    for (auto& c : x) c = cplx(g(rng), g(rng));
    CVector y1, y2;
    kernels::csr_matvec(h.storage(), x, y1);
    kernels::csr_matvec_serial(h.storage(), x, y2);
    CHECK((y1 - y2).norm() == 0.0);

    CMatrix xm(n, 7);
    for (Eigen::Index k = 0; k < xm.size(); ++k) xm.data()[k] = cplx(g(rng), g(rng));
    CMatrix m1, m2;
    kernels::csr_matmat(h.storage(), xm, m1);
    kernels::csr_matmat_serial(h.storage(), xm, m2);
    CHECK((m1 - m2).norm() == 0.0);

    Eigen::MatrixXd v = Eigen::MatrixXd::Random(n, 9);
    CVector c(9);
    for (auto& z : c) z = cplx(g(rng), g(rng));
    CVector d1, d2;
    kernels::dense_real_matvec(v, c, d1);
    kernels::dense_real_matvec_serial(v, c, d2);
    CHECK((d1 - d2).norm() <= 1e-12 * d2.norm());
  }
}

TEST_CASE("lindblad right-hand side matches the dense formula") {
  std::mt19937_64 rng(3);
  for (int levels : {4, 9, 150}) {
    const int dim = 2 * levels;
    const SparseOperator h = random_sparse_hermitian(dim, 3, rng);
    const CMatrix rho = random_hermitian(dim, rng);
    const double rate = 0.37;
    const auto [b, bd] = build_ladder_ops(FockConfig{levels - 1});
    const CMatrix jump = std::sqrt(rate) * tensor(SparseOperator::identity(2), b).to_dense();
    CMatrix fast, ref;
    kernels::lindblad_rhs(h.storage(), rate, levels, rho, fast);
    kernels::lindblad_rhs_reference(h.to_dense(), jump, rho, ref);
    CHECK((fast - ref).norm() <= 1e-12 * ref.norm());
  }
}
