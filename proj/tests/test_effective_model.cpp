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

#include "rabicat/effective_model.hpp"

#include <Eigen/Eigenvalues>

#include <random>

using namespace rabicat;

namespace {

// Independent extended-precision evaluation: |B|^2 written as a sum of squares.
long double h_eff_oracle(long double x, long double p, const ModelParams& m, Branch b) {
  const long double r2 = std::sqrt(2.0L);
  const long double bz = 0.5L + r2 * m.mu * x;
  const long double bx = r2 * m.lambda * x;
  const long double by = r2 * m.lambda * m.delta * p;
  const long double sgn = b == Branch::Up ? -1.0L : 1.0L;
  return 0.5L * (x * x + p * p) + r2 * m.mu * x + sgn * std::sqrt(bz * bz + bx * bx + by * by);
}

Hessian2 finite_difference_hessian(double x, double p, const ModelParams& m, Branch b) {
  const long double h = 1e-5L;
  auto f = [&](long double dx, long double dp) { return h_eff_oracle(x + dx, p + dp, m, b); };
  Hessian2 out;
  out.xx = double((f(h, 0) - 2 * f(0, 0) + f(-h, 0)) / (h * h));
  out.pp = double((f(0, h) - 2 * f(0, 0) + f(0, -h)) / (h * h));
  out.xp = double((f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h));
  return out;
}

bool close_rel(double a, double b, double rel, double floor_abs) {
  return std::abs(a - b) <= rel * std::max(std::abs(b), floor_abs);
}

}  // namespace

TEST_CASE("effective energy examples") {
  const ModelParams p{100, 0.75, 0.5, 0.0, 0};
  CHECK(h_eff(0, 0, p) == doctest::Approx(-0.5));
  CHECK(h_eff(0, 0, ModelParams{10, 0.2, -0.3, 0.01, 0}) == doctest::Approx(-0.5));
  CHECK(h_eff(1, 0, p) == doctest::Approx(0.5 - std::sqrt(1.375)).epsilon(1e-12));
  CHECK(h_eff(1, 0, p, Branch::Down) == doctest::Approx(0.5 + std::sqrt(1.375)).epsilon(1e-12));
  const ModelParams tilted{1, 0.0, 0.0, 5.0, 0};
  CHECK(h_eff(-0.05, 0, tilted) == doctest::Approx(double(h_eff_oracle(-0.05L, 0, tilted, Branch::Up))));
}

TEST_CASE("effective energy symmetries") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 500; ++k) {
    const double x = u(rng);
    const double q = u(rng);
    const ModelParams sym{100, std::abs(u(rng)), u(rng) / 1.5, 0.0, 0};
    CHECK(h_eff(x, q, sym) == doctest::Approx(h_eff(-x, -q, sym)).epsilon(1e-14));
    const ModelParams asym{100, sym.lambda, sym.delta, 0.01, 0};
    const double sum = h_eff(x, q, asym, Branch::Up) + h_eff(x, q, asym, Branch::Down);
    CHECK(sum == doctest::Approx(x * x + q * q + 2 * std::sqrt(2.0) * asym.mu * x).epsilon(1e-12));
  }
  const ModelParams asym{100, 0.75, 0.5, 0.01, 0};
  CHECK(std::abs(h_eff(0.7, 0.1, asym) - h_eff(-0.7, -0.1, asym)) > 1e-4);
}

TEST_CASE("analytic hessian matches finite differences") {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const ModelParams m{100, 0.2 + std::abs(u(rng)), u(rng), 0.02 * u(rng), 0};
    const double x = u(rng);
    const double q = u(rng);
    for (Branch b : {Branch::Up, Branch::Down}) {
      const Hessian2 a = h_eff_hessian(x, q, m, b);
      const Hessian2 f = finite_difference_hessian(x, q, m, b);
      CHECK(close_rel(a.xx, f.xx, 1e-5, 1.0));
      CHECK(close_rel(a.pp, f.pp, 1e-5, 1.0));
      CHECK(close_rel(a.xp, f.xp, 1e-5, 1.0));
    }
  }
  const ModelParams ref{100, 0.75, 0.5, 1.3e-3, 0};
  const Hessian2 a = h_eff_hessian(0, 0, ref);
  const Hessian2 f = finite_difference_hessian(0, 0, ref, Branch::Up);
  CHECK(close_rel(a.xx, f.xx, 1e-6, 1e-3));
  CHECK(close_rel(a.pp, f.pp, 1e-6, 1e-3));
  CHECK(a.xx == doctest::Approx(1 - 4 * 0.5625).epsilon(1e-12));
  CHECK(a.pp == doctest::Approx(1 - 4 * 0.5625 * 0.25).epsilon(1e-12));
}

TEST_CASE("gradient matches finite differences and vanishes at the origin") {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const ModelParams m{100, std::abs(u(rng)), u(rng), 0.05 * u(rng), 0};
    const double x = u(rng), q = u(rng), h = 1e-6;
    const auto g = h_eff_gradient(x, q, m);
    CHECK(g[0] == doctest::Approx((h_eff(x + h, q, m) - h_eff(x - h, q, m)) / (2 * h)).epsilon(1e-6));
    CHECK(g[1] == doctest::Approx((h_eff(x, q + h, m) - h_eff(x, q - h, m)) / (2 * h)).epsilon(1e-6));
    const auto g0 = h_eff_gradient(0, 0, m);
    CHECK(std::abs(g0[0]) < 1e-15);
    CHECK(std::abs(g0[1]) < 1e-15);
  }
}

TEST_CASE("stability eigenvalues at the reference point") {
  const ModelParams p{100, 0.75, 0.5, 0.0, 0};
  const double expected = std::sqrt(35.0) / 8.0;
  CHECK(lambda_abs(p) == doctest::Approx(expected).epsilon(1e-14));
  const auto ev = stability_eigenvalues(p);
  CHECK(std::abs(ev[0].imag()) < 1e-14);
  CHECK(std::abs(std::abs(ev[0].real()) - expected) < 1e-12);
  CHECK(ev[0].real() == doctest::Approx(-ev[1].real()));
  Eigen::EigenSolver<Eigen::Matrix2d> es(linearized_matrix(p));
  CHECK(std::abs(std::abs(es.eigenvalues()[0].real()) - expected) < 1e-10);
  CHECK(linearized_matrix(p).trace() == 0.0);
}

TEST_CASE("linearised matrix eigenvalues equal the closed form") {
  std::mt19937_64 rng(109);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    const ModelParams p{100, 1.5 * u(rng), 2 * u(rng) - 1, 0.0, 0};
    const double l2 = p.lambda * p.lambda;
    const cplx closed = std::sqrt(cplx((4 * l2 - 1) * (1 - 4 * l2 * p.delta * p.delta)));
    Eigen::EigenSolver<Eigen::Matrix2d> es(linearized_matrix(p));
    const cplx e0 = es.eigenvalues()[0];
    const cplx e1 = es.eigenvalues()[1];
    const double d = std::min(std::abs(e0 - closed), std::abs(e0 + closed));
    CHECK(d < 1e-10);
    CHECK(std::abs(e0 + e1) < 1e-10);
  }
}

TEST_CASE("free oscillator limit is a rotation") {
  const ModelParams p{1, 0.0, 0.3, 0.0, 0};
  const Eigen::Matrix2d m = linearized_matrix(p);
  CHECK(m(0, 0) == 0.0);
  CHECK(m(0, 1) == doctest::Approx(1.0));
  CHECK(m(1, 0) == doctest::Approx(-1.0));
  const auto ev = stability_eigenvalues(p);
  CHECK(std::abs(ev[0].real()) < 1e-15);
  CHECK(std::abs(std::abs(ev[0].imag()) - 1.0) < 1e-15);
}

TEST_CASE("origin classification") {
  auto kind = [](double lambda, double delta) { return classify_origin({100, lambda, delta, 0, 0}); };
  const auto saddle = kind(0.75, 0.5);
  CHECK(saddle.kind == StationaryKind::Saddle);
  CHECK(!saddle.stable);
  CHECK(std::abs(saddle.eigenvalues[0].imag()) < 1e-14);
  CHECK(saddle.lambda_upper == doctest::Approx(1.0));
  const auto minimum = kind(0.4, 0.5);
  CHECK(minimum.kind == StationaryKind::GlobalMinimum);
  CHECK(minimum.stable);
  const auto maximum = kind(1.2, 0.5);
  CHECK(maximum.kind == StationaryKind::LocalMaximum);
  CHECK(maximum.stable);
  CHECK(kind(0.5, 0.5).kind == StationaryKind::GlobalMinimum);
  CHECK(kind(0.5 + 1e-9, 0.5).kind == StationaryKind::Saddle);
  CHECK(kind(1.0, 0.5).kind == StationaryKind::Saddle);
  CHECK(kind(1.0 + 1e-9, 0.5).kind == StationaryKind::LocalMaximum);
  CHECK(std::isinf(kind(3.0, 0.0).lambda_upper));
  CHECK(kind(3.0, 0.0).kind == StationaryKind::Saddle);
  CHECK(to_string(StationaryKind::Saddle) == "saddle");
  for (double l : {0.1, 0.3, 0.6, 0.9, 1.1, 1.7}) {
    const auto r = kind(l, 0.5);
    const bool real_nonzero = std::abs(r.eigenvalues[0].imag()) < 1e-12 && std::abs(r.eigenvalues[0].real()) > 1e-12;
    CHECK((r.kind == StationaryKind::Saddle) == real_nonzero);
  }
  CHECK(classify_origin({100, 0.75, 0.5, 1.3e-3, 0}).origin_gradient < 1e-15);
}

TEST_CASE("expansion delay and scaling constant") {
  const double L = std::sqrt(35.0) / 8.0;
  CHECK(expansion_delay(100, 100, L) == 0.0);
  CHECK(expansion_delay(100, 1000, L) == doctest::Approx(std::log(10.0) / (2 * L)).epsilon(1e-14));
  CHECK(expansion_delay(100, 1000, L) == doctest::Approx(1.5568).epsilon(1e-4));
  CHECK(expansion_delay(100, 1e4, L) ==
        doctest::Approx(expansion_delay(100, 1000, L) + expansion_delay(1000, 1e4, L)).epsilon(1e-14));
  CHECK_THROWS_AS(expansion_delay(0, 10, L), std::invalid_argument);
  CHECK_THROWS_AS(expansion_delay(100, 10, L), std::invalid_argument);

  const ScalingLaw law{L, 20.0};
  CHECK(law.coefficient() == doctest::Approx(3.0 / (2 * L * 20.0)));
  CHECK(scaling_constant(law, 100, 100) == 1.0);
  CHECK(scaling_constant(law, 100, 1000) > 1.0);
  const double tau = tau_from_scaling(1.23, 100, 1000, L);
  CHECK(scaling_constant(ScalingLaw{L, tau}, 100, 1000) == doctest::Approx(1.23).epsilon(1e-14));
  CHECK_THROWS_AS((ScalingLaw{0.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ScalingLaw{1.0, -1.0}.validate()), std::invalid_argument);
}

TEST_CASE("slope prediction") {
  const ScalingLaw law{std::sqrt(35.0) / 8.0, 20.3};
  CHECK(slope_prediction(law, 0.22, 100, 100) == doctest::Approx(-0.22));
  double prev = 0.0;
  for (double R : {100.0, 300.0, 1000.0, 1e4}) {
    const double s = slope_prediction(law, 0.22, R, 100);
    CHECK(s < prev);
    prev = s;
  }
  CHECK_THROWS_AS(slope_prediction(law, -1.0, 100, 100), std::invalid_argument);
}
