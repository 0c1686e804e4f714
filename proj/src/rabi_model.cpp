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

#include "rabicat/rabi_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rabicat {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be finite");
}

SparseOperator number_operator(const FockConfig& cfg) {
  std::vector<SparseOperator::Entry> diag;
  for (int n = 1; n <= cfg.n_max; ++n) diag.push_back({n, n, cplx(double(n))});
  return SparseOperator(cfg.levels(), diag, true);
}

}  // namespace

void ModelParams::validate() const {
  require_finite(R, "R");
  require_finite(lambda, "lambda");
  require_finite(delta, "delta");
  require_finite(mu, "mu");
  require_finite(gamma, "gamma");
  if (!(R > 0.0)) throw std::invalid_argument("R must be > 0");
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  if (std::abs(delta) > 1.0) throw std::invalid_argument("delta must lie in [-1, 1]");
  if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
}

SparseOperator build_hamiltonian(const ModelParams& p, const FockConfig& cfg) {
  p.validate();
  cfg.validate();
  const auto [b, bd] = build_ladder_ops(cfg);
  const PauliOps s = pauli_ops();
  const SparseOperator id_osc = SparseOperator::identity(cfg.levels());
  const SparseOperator id_qubit = SparseOperator::identity(2);

  const double sqrt_r = std::sqrt(p.R);
  const double rotating = p.lambda * sqrt_r * (1.0 + p.delta) / 2.0;
  const double counter = p.lambda * sqrt_r * (1.0 - p.delta) / 2.0;

  SparseOperator h = tensor(id_qubit, number_operator(cfg)) + (p.R / 2.0) * tensor(s.z, id_osc);
  if (rotating != 0.0)
    h = h + rotating * (tensor(s.minus, bd) + tensor(s.plus, b));
  if (counter != 0.0)
    h = h + counter * (tensor(s.plus, bd) + tensor(s.minus, b));
  if (p.mu != 0.0)
    h = h + (p.mu * sqrt_r) * tensor(s.z + id_qubit, bd + b);
  return h.as_hermitian();
}

SparseOperator build_parity(const FockConfig& cfg) {
  cfg.validate();
  std::vector<SparseOperator::Entry> diag;
  diag.reserve(static_cast<std::size_t>(cfg.joint_dimension()));
  for (int s = 0; s < 2; ++s)
    for (int n = 0; n <= cfg.n_max; ++n) {
      const int i = JointState::index(static_cast<Spin>(s), n, cfg.n_max);
      diag.push_back({i, i, cplx((n + s) % 2 == 0 ? 1.0 : -1.0)});
    }
  return SparseOperator(cfg.joint_dimension(), diag, true);
}

FieldVector field_vector(double x, double p, const ModelParams& params) {
  const double root2 = std::sqrt(2.0);
  return {-root2 * params.lambda * x, root2 * params.lambda * params.delta * p,
          -(0.5 + root2 * params.mu * x)};
}

}  // namespace rabicat
