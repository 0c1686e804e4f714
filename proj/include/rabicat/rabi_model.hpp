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

#include "rabicat/fock_space.hpp"

namespace rabicat {

/// Physical parameters of the extended Rabi model, energies in units of
/// the oscillator quantum.
struct ModelParams {
  double R = 100.0;       ///< size parameter omega_0 / omega
  double lambda = 0.75;   ///< strength of the rotating / counter-rotating coupling
  double delta = 0.5;     ///< mixing: +1 Jaynes-Cummings, 0 Dicke, -1 anti-JC
  double mu = 0.0;        ///< parity-breaking strength
  double gamma = 0.0;     ///< oscillator damping constant; 0 means unitary

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Field vector of the semiclassical qubit Hamiltonian
/// H(x,p)/R = (x^2+p^2)/2 + sqrt(2) mu x - B . sigma.
struct FieldVector {
  double bx = 0.0;
  double by = 0.0;
  double bz = 0.0;

  double norm_squared() const noexcept { return bx * bx + by * by + bz * bz; }
};

/// H/omega = b^dagger b + (R/2) sigma_z
///         + lambda sqrt(R) [ (1+delta)/2 (b^dagger sigma_- + b sigma_+)
///                          + (1-delta)/2 (b^dagger sigma_+ + b sigma_-) ]
///         + mu sqrt(R) (b^dagger + b)(sigma_z + 1)
///
/// The result is flagged hermitian (checked exactly) and real.
SparseOperator build_hamiltonian(const ModelParams& p, const FockConfig& cfg);

/// Pi = (-1)^(b^dagger b + (sigma_z + 1)/2), diagonal with entries +-1.
SparseOperator build_parity(const FockConfig& cfg);

/// Components bx = -sqrt(2) lambda x, by = sqrt(2) lambda delta p,
/// bz = -(1/2 + sqrt(2) mu x). Only |B| enters any downstream result.
FieldVector field_vector(double x, double p, const ModelParams& params);

}  // namespace rabicat
