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
#include "rabicat/rabi_model.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rabicat {

class LindbladIntegrator;

enum class PropagatorMethod { Automatic, Eigendecomposition, Krylov };

std::string to_string(PropagatorMethod m);
PropagatorMethod parse_method(const std::string& name);

/// Largest joint dimension for which Automatic picks a full
/// eigendecomposition.
inline constexpr int kEigendecompositionLimit = 4096;

struct PropagatorPlan {
  PropagatorMethod method = PropagatorMethod::Automatic;
  double dt = 0.01;      ///< output sampling step, units of 1/omega
  double t_max = 40.0;   ///< final time
  int krylov_dim = 30;
  /// Krylov a-posteriori error bound per internal step.
  double step_tol = 1e-12;

  void validate() const;
  /// Samples at t = 0, dt, ..., including t_max (rounded to the grid).
  int sample_count() const;
  double time_at(int i) const { return i * dt; }
};

PropagatorMethod resolve_method(const PropagatorPlan& plan, int dimension);

/// Raised when an integrator cannot meet its error target.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full density matrix over the joint space.
class JointDensityMatrix {
 public:
  JointDensityMatrix() = default;
  JointDensityMatrix(FockConfig cfg, CMatrix rho);
  static JointDensityMatrix pure(const JointState& psi);

  const FockConfig& config() const noexcept { return cfg_; }
  const CMatrix& matrix() const noexcept { return rho_; }
  int dimension() const noexcept { return static_cast<int>(rho_.rows()); }

  cplx trace() const { return rho_.trace(); }
  /// max |rho - rho^dagger|.
  double hermiticity_defect() const;
  double min_eigenvalue() const;
  /// Weight on Fock levels n > 0.95 n_max.
  double tail_weight() const;

 private:
  friend class LindbladIntegrator;
  FockConfig cfg_;
  CMatrix rho_;
};

/// Called once per output sample, in strictly increasing time order.
using StateObserver = std::function<void(int index, double t, const JointState&)>;
using DensityObserver = std::function<void(int index, double t, const JointDensityMatrix&)>;

/// |psi(t)> = exp(-i H t)|psi0> at t = 0, dt, ..., t_max. Throws
/// TruncationError when a sample's tail weight exceeds cfg.tail_tol and
/// ConvergenceError when a Krylov step cannot reach step_tol.
void evolve_unitary(const SparseOperator& h, const JointState& psi0, const PropagatorPlan& plan,
                    const StateObserver& observer);
std::vector<JointState> evolve_unitary(const SparseOperator& h, const JointState& psi0,
                                       const PropagatorPlan& plan);

enum class LindbladMethod { Chebyshev, Krylov, RungeKutta4 };

std::string to_string(LindbladMethod m);

/// Tuning of the master-equation stepper beyond the plan.
struct LindbladOptions {
  /// Chebyshev: Bessel-weighted Chebyshev expansion of exp(dt L) over each
  /// output interval, scaled by the spectral width of the commutator.
  /// Krylov: Arnoldi exponential of the Liouvillian on the vectorized
  /// density matrix. RungeKutta4: classic RK4 with step doubling, kept as
  /// the reference integrator.
  LindbladMethod method = LindbladMethod::Chebyshev;
  /// Arnoldi subspace size for the Krylov method.
  int krylov_dim = 30;
  /// Local error per unit time allowed for an accepted step. Chebyshev
  /// truncates the series where the Bessel weights fall below it, Krylov
  /// uses the a-posteriori Arnoldi residual estimate (Frobenius norm), RK4
  /// the max norm of the step-doubling difference.
  double local_tol = 1e-9;
  /// Output samples between positivity (eigenvalue) checks; 0 checks the
  /// first and last sample only.
  int positivity_stride = 500;
  double positivity_floor = -1e-6;
  /// Smallest accepted internal step relative to the output step.
  double min_step_fraction = 1e-6;
};

/// Master equation d rho/dt = -i[H, rho] + L rho L^dag - 1/2{L^dag L, rho}
/// with L = sqrt(gamma/R) (I_qubit (x) b), stepped as selected in
/// `options`. `b` is the oscillator annihilation operator.
void evolve_lindblad(const SparseOperator& h, const SparseOperator& b,
                     const JointDensityMatrix& rho0, const ModelParams& params,
                     const PropagatorPlan& plan, const DensityObserver& observer,
                     const LindbladOptions& options = {});
std::vector<JointDensityMatrix> evolve_lindblad(const SparseOperator& h, const SparseOperator& b,
                                                const JointDensityMatrix& rho0,
                                                const ModelParams& params,
                                                const PropagatorPlan& plan,
                                                const LindbladOptions& options = {});

/// Extremal eigenvalue estimates of a hermitian operator from a short
/// Lanczos run, widened by a safety margin. Used to bound explicit steps.
std::pair<double, double> spectral_bounds(const SparseOperator& h, int iterations = 60);

}  // namespace rabicat
