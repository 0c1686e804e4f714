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


#include "rabicat/interferometer.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rabicat {

void InterferometerSpec::validate() const {
  if (n_cycles < 0) throw std::invalid_argument("n_cycles must be >= 0");
  if (!std::isfinite(dphi)) throw std::invalid_argument("dphi must be finite");
}

ExitAmplitudes exit_amplitudes(const InterferometerSpec& spec) {
  spec.validate();
  const double alpha = 0.5 * (spec.n_cycles * spec.dphi + 0.5 * std::numbers::pi);
  return {std::cos(alpha), std::sin(alpha)};
}

ExitAmplitudesComplex exit_amplitudes_oracle(const InterferometerSpec& spec) {
  spec.validate();
  using M2 = Eigen::Matrix2cd;
  const std::complex<double> i(0.0, 1.0);
  // Mode order (left arm, right arm). 50/50 splitter, i on reflection.
  M2 splitter;
  splitter << 1.0, i, i, 1.0;
  splitter /= std::numbers::sqrt2;
  M2 cycle = M2::Identity();
  cycle(0, 0) = std::exp(i * spec.dphi);
  // Quarter-wave bias of the left arm: the loop is balanced at n = 0.
  M2 bias = M2::Identity();
  bias(0, 0) = i;

  Eigen::Vector2cd state(1.0, 0.0);
  state = splitter * state;
  state = bias * state;
  for (int k = 0; k < spec.n_cycles; ++k) state = cycle * state;
  state = splitter * state;
  // Port 1 of the recombiner is the left exit.
  return {state[1], state[0]};
}

}  // namespace rabicat
