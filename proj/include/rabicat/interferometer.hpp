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

// Optical analog: a photon split by beam splitter A, cycled n times
// through loops where each left-arm pass adds a phase dphi, recombined on
// the half-reflecting mirror B.

#pragma once

#include <complex>
#include <utility>

namespace rabicat {

struct InterferometerSpec {
  int n_cycles = 0;
  double dphi = 0.0;  ///< per-cycle phase in the left arm, radians

  void validate() const;
};

struct ExitAmplitudes {
  double left = 0.0;
  double right = 0.0;
};

/// (cos a, sin a) with a = (n dphi + pi/2) / 2.
ExitAmplitudes exit_amplitudes(const InterferometerSpec& spec);

struct ExitAmplitudesComplex {
  std::complex<double> left;
  std::complex<double> right;
};

/// Explicit 2x2 transfer-matrix product: symmetric 50/50 splitter (i on
/// reflection), n left-arm phase steps, symmetric 50/50 recombiner.
/// Phases are convention dependent; only the moduli are comparable with
/// exit_amplitudes.
ExitAmplitudesComplex exit_amplitudes_oracle(const InterferometerSpec& spec);

}  // namespace rabicat
