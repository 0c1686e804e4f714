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

#include "rabicat/evolution.hpp"

#include "rabicat/kernels.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rabicat {

std::string to_string(PropagatorMethod m) {
  switch (m) {
    case PropagatorMethod::Automatic: return "auto";
    case PropagatorMethod::Eigendecomposition: return "eigen";
    case PropagatorMethod::Krylov: return "krylov";
  }
  return "unknown";
}

std::string to_string(LindbladMethod m) {
  switch (m) {
    case LindbladMethod::Chebyshev: return "lindblad-chebyshev";
    case LindbladMethod::Krylov: return "lindblad-krylov";
    case LindbladMethod::RungeKutta4: return "lindblad-rk4";
  }
  return "unknown";
}

PropagatorMethod parse_method(const std::string& name) {
  if (name == "auto") return PropagatorMethod::Automatic;
  if (name == "eigen" || name == "eigendecomposition") return PropagatorMethod::Eigendecomposition;
  if (name == "krylov") return PropagatorMethod::Krylov;
  throw std::invalid_argument("unknown propagator method '" + name + "'");
}

void PropagatorPlan::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be > 0");
  if (!(t_max >= dt) || !std::isfinite(t_max)) throw std::invalid_argument("t_max must be >= dt");
  if (krylov_dim < 4) throw std::invalid_argument("krylov_dim must be >= 4");
  if (!(step_tol > 0.0)) throw std::invalid_argument("step_tol must be > 0");
}

int PropagatorPlan::sample_count() const {
  return static_cast<int>(std::floor(t_max / dt + 1e-9)) + 1;
}

PropagatorMethod resolve_method(const PropagatorPlan& plan, int dimension) {
  if (plan.method != PropagatorMethod::Automatic) return plan.method;
  return dimension <= kEigendecompositionLimit ? PropagatorMethod::Eigendecomposition
                                               : PropagatorMethod::Krylov;
}

// ---------------------------------------------------------------------------
// JointDensityMatrix

JointDensityMatrix::JointDensityMatrix(FockConfig cfg, CMatrix rho) : cfg_(cfg), rho_(std::move(rho)) {
  cfg_.validate();
  if (rho_.rows() != cfg_.joint_dimension() || rho_.cols() != cfg_.joint_dimension())
    throw std::invalid_argument("density matrix must be 2 (n_max + 1) square");
  if (hermiticity_defect() > 1e-12) throw std::invalid_argument("density matrix is not hermitian");
  if (std::abs(trace() - 1.0) > 1e-8) throw std::invalid_argument("density matrix trace differs from 1");
}

JointDensityMatrix JointDensityMatrix::pure(const JointState& psi) {
  const CVector& a = psi.amplitudes();
  return JointDensityMatrix(psi.config(), a * a.adjoint());
}

double JointDensityMatrix::hermiticity_defect() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double JointDensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

double JointDensityMatrix::tail_weight() const {
  const int levels = cfg_.levels();
  double w = 0.0;
  for (int s = 0; s < 2; ++s)
    for (int n = cfg_.tail_begin(); n < levels; ++n) w += rho_(s * levels + n, s * levels + n).real();
  return w;
}

// ---------------------------------------------------------------------------
// Spectral bounds

namespace {

/// Lanczos with full reorthogonalization. Returns the basis (columns) and
/// the tridiagonal coefficients; stops early on breakdown.
struct LanczosBasis {
  CMatrix v;
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;  ///< beta[j] couples basis vectors j and j+1
  int size = 0;
  double residual = 0.0;  ///< norm of the next (unused) vector
};

LanczosBasis lanczos(const SparseOperator& h, const CVector& start, int m) {
  const int dim = h.dimension();
  m = std::min(m, dim);
  LanczosBasis out;
  out.v.resize(dim, m);
  out.alpha.resize(m);
  out.beta.resize(m);
  CVector w(dim);
  out.v.col(0) = start / start.norm();
  const double scale = std::max(1.0, h.row_sum_norm());
  for (int j = 0; j < m; ++j) {
    kernels::csr_matvec(h.storage(), out.v.col(j), w);
    out.alpha[j] = out.v.col(j).dot(w).real();
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass) {
      const CVector coef = out.v.leftCols(j + 1).adjoint() * w;
      w.noalias() -= out.v.leftCols(j + 1) * coef;
    }
    const double b = w.norm();
    out.size = j + 1;
    out.residual = b;
    if (j + 1 == m) break;
    if (b <= 1e-13 * scale) {  // invariant subspace reached
      out.residual = 0.0;
      break;
    }
    out.beta[j] = b;
    out.v.col(j + 1) = w / b;
  }
  return out;
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tridiagonal_eigen(const LanczosBasis& basis) {
  const int k = basis.size;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  Eigen::VectorXd diag = basis.alpha.head(k);
  Eigen::VectorXd sub = k > 1 ? Eigen::VectorXd(basis.beta.head(k - 1)) : Eigen::VectorXd();
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  return es;
}

}  // namespace

std::pair<double, double> spectral_bounds(const SparseOperator& h, int iterations) {
  const int dim = h.dimension();
  CVector start(dim);
  for (int i = 0; i < dim; ++i) start[i] = cplx(1.0 + 0.5 * std::sin(1.7 * i), 0.3 * std::cos(0.9 * i));
  const LanczosBasis basis = lanczos(h, start, iterations);
  const auto es = tridiagonal_eigen(basis);
  const int k = basis.size;
  const Eigen::VectorXd& theta = es.eigenvalues();
  // Residual of a Ritz pair: |beta_k * last component of its eigenvector|.
  const double res_lo = basis.residual * std::abs(es.eigenvectors()(k - 1, 0));
  const double res_hi = basis.residual * std::abs(es.eigenvectors()(k - 1, k - 1));
  double lo = theta[0] - res_lo;
  double hi = theta[k - 1] + res_hi;
  const double margin = 0.02 * (hi - lo) + 1e-12;
  return {lo - margin, hi + margin};
}

// ---------------------------------------------------------------------------
// Unitary propagation

namespace {

void emit(int index, double t, const FockConfig& cfg, const CVector& amps, const StateObserver& observer) {
  JointState psi(cfg, amps);
  psi.check_tail(t);
  observer(index, t, psi);
}

void evolve_eigen(const SparseOperator& h, const JointState& psi0, const PropagatorPlan& plan,
                  const StateObserver& observer) {
  const FockConfig& cfg = psi0.config();
  const int samples = plan.sample_count();
  // Eigencomponents below this modulus are dropped: their contribution is
  // beneath the accuracy of the eigenvectors themselves.
  constexpr double kDrop = 1e-16;

  if (h.is_real()) {
    const Eigen::MatrixXd dense = h.to_dense().real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    if (es.info() != Eigen::Success) throw ConvergenceError("eigendecomposition failed");
    const Eigen::MatrixXd& vecs = es.eigenvectors();
    const CVector full = vecs.transpose() * psi0.amplitudes();
    std::vector<int> keep;
    for (int k = 0; k < full.size(); ++k)
      if (std::abs(full[k]) > kDrop) keep.push_back(k);
    Eigen::MatrixXd v(vecs.rows(), static_cast<Eigen::Index>(keep.size()));
    CVector c(static_cast<Eigen::Index>(keep.size()));
    Eigen::VectorXd e(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
      v.col(j) = vecs.col(keep[j]);
      c[j] = full[keep[j]];
      e[j] = es.eigenvalues()[keep[j]];
    }
    CVector coeff(c.size());
    CVector amps;
    for (int i = 0; i < samples; ++i) {
      const double t = plan.time_at(i);
      for (Eigen::Index j = 0; j < c.size(); ++j) coeff[j] = c[j] * std::polar(1.0, -e[j] * t);
      kernels::dense_real_matvec(v, coeff, amps);
      emit(i, t, cfg, amps, observer);
    }
    return;
  }

  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.to_dense());
  if (es.info() != Eigen::Success) throw ConvergenceError("eigendecomposition failed");
  const CVector c = es.eigenvectors().adjoint() * psi0.amplitudes();
  CVector coeff(c.size());
  for (int i = 0; i < samples; ++i) {
    const double t = plan.time_at(i);
    for (Eigen::Index j = 0; j < c.size(); ++j) coeff[j] = c[j] * std::polar(1.0, -es.eigenvalues()[j] * t);
    const CVector amps = es.eigenvectors() * coeff;
    emit(i, t, cfg, amps, observer);
  }
}

/// exp(-i H tau) v with Lanczos; tau is subdivided until the a-posteriori
/// error estimate of each piece is below tol.
class KrylovPropagator {
 public:
  KrylovPropagator(const SparseOperator& h, int m, double tol, double dt)
      : h_(h), m_(m), tol_(tol), step_(dt), min_step_(dt * 1e-8) {}

  void advance(CVector& v, double tau, double t_now) {
    double remaining = tau;
    while (remaining > 0.0) {
      const LanczosBasis basis = lanczos(h_, v, m_);
      const auto es = tridiagonal_eigen(basis);
      const int k = basis.size;
      const Eigen::MatrixXd& q = es.eigenvectors();
      const Eigen::VectorXd& theta = es.eigenvalues();
      const double vnorm = v.norm();
      double h = std::min(step_, remaining);
      CVector y(k);
      for (;;) {
        // y = exp(-i T h) e_1 = Q exp(-i Theta h) Q^T e_1
        CVector z(k);
        for (int j = 0; j < k; ++j) z[j] = q(0, j) * std::polar(1.0, -theta[j] * h);
        y = q * z;
        const double err = basis.residual * std::abs(y[k - 1]) * vnorm;
        if (err <= tol_) break;
        h *= 0.5;
        if (h < min_step_) {
          std::ostringstream os;
          os << "Krylov step did not converge near t = " << t_now << " (error " << err << ")";
          throw ConvergenceError(os.str());
        }
      }
      v = vnorm * (basis.v.leftCols(k) * y);
      remaining -= h;
      if (remaining < 1e-14 * tau) remaining = 0.0;
      // Grow again after a successful reduced step.
      step_ = std::min(2.0 * h, tau);
      t_now += h;
    }
  }

 private:
  const SparseOperator& h_;
  int m_;
  double tol_;
  double step_;
  double min_step_;
};

void evolve_krylov(const SparseOperator& h, const JointState& psi0, const PropagatorPlan& plan,
                   const StateObserver& observer) {
  const FockConfig& cfg = psi0.config();
  const int samples = plan.sample_count();
  KrylovPropagator prop(h, plan.krylov_dim, plan.step_tol, plan.dt);
  CVector v = psi0.amplitudes();
  emit(0, 0.0, cfg, v, observer);
  for (int i = 1; i < samples; ++i) {
    const double t0 = plan.time_at(i - 1);
    prop.advance(v, plan.time_at(i) - t0, t0);
    emit(i, plan.time_at(i), cfg, v, observer);
  }
}

}  // namespace

void evolve_unitary(const SparseOperator& h, const JointState& psi0, const PropagatorPlan& plan,
                    const StateObserver& observer) {
  plan.validate();
  if (!h.hermitian()) throw std::invalid_argument("evolve_unitary requires a hermitian operator");
  if (h.dimension() != psi0.dimension()) throw std::invalid_argument("state and operator dimensions differ");
  switch (resolve_method(plan, h.dimension())) {
    case PropagatorMethod::Eigendecomposition: evolve_eigen(h, psi0, plan, observer); break;
    default: evolve_krylov(h, psi0, plan, observer); break;
  }
}

std::vector<JointState> evolve_unitary(const SparseOperator& h, const JointState& psi0,
                                       const PropagatorPlan& plan) {
  std::vector<JointState> out;
  out.reserve(static_cast<std::size_t>(plan.sample_count()));
  evolve_unitary(h, psi0, plan, [&](int, double, const JointState& psi) { out.push_back(psi); });
  return out;
}

// ---------------------------------------------------------------------------
// Master equation

class LindbladIntegrator {
 public:
  LindbladIntegrator(const SparseOperator& h, double rate, const JointDensityMatrix& rho0,
                     const PropagatorPlan& plan, const LindbladOptions& options)
      : h_(h), rate_(rate), levels_(rho0.config().levels()), plan_(plan), options_(options),
        state_(rho0) {
    const auto [lo, hi] = spectral_bounds(h);
    // RK4 is stable on the imaginary axis to |z| = 2 sqrt 2 and on the
    // negative real axis to about 2.78; keep clear of both.
    const double extent = (hi - lo) + rate_ * 2.0 * (levels_ - 1);
    width_ = 1.02 * extent + 1e-12;
    max_step_ = extent > 0.0 ? 2.5 / extent : plan.dt;
    step_ = options_.method == LindbladMethod::Krylov ? plan.dt : std::min(max_step_, plan.dt);
  }

  void run(const DensityObserver& observer) {
    const int samples = plan_.sample_count();
    check_sample(0, 0.0, true);
    observer(0, 0.0, state_);
    double t = 0.0;
    for (int i = 1; i < samples; ++i) {
      const double t_next = plan_.time_at(i);
      if (options_.method == LindbladMethod::Chebyshev) {
        chebyshev_interval(t_next - t);
      } else {
        while (t_next - t > 1e-12 * plan_.dt) {
          const double h = std::min(step_, t_next - t);
          t += options_.method == LindbladMethod::Krylov ? arnoldi_step(h, t) : attempt(h, t);
        }
      }
      t = t_next;
      const bool check_pos = options_.positivity_stride > 0 ? (i % options_.positivity_stride == 0)
                                                            : false;
      check_sample(i, t, check_pos || i == samples - 1);
      observer(i, t, state_);
    }
  }

  double steps_taken() const { return accepted_; }

 private:
  void rhs(const CMatrix& rho, CMatrix& out) {
    kernels::lindblad_rhs(h_.storage(), rate_, levels_, rho, out);
  }

  // One classic RK4 step of size h from y. k1 may be supplied.
  void rk4(const CMatrix& y, const CMatrix& k1, double h, CMatrix& out) {
    tmp_.noalias() = y + (0.5 * h) * k1;
    rhs(tmp_, k2_);
    tmp_.noalias() = y + (0.5 * h) * k2_;
    rhs(tmp_, k3_);
    tmp_.noalias() = y + h * k3_;
    rhs(tmp_, k4_);
    out.noalias() = y + (h / 6.0) * (k1 + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

  // exp(tau L) rho = sum_k w_k J_k(tau W) u_k with u_0 = rho,
  // u_1 = L rho / W, u_{k+1} = (2/W) L u_k + u_{k-1}; w_0 = 1, w_k = 2.
  // u_k = (-i)^k T_k(i L / W) rho stays hermitian.
  void chebyshev_interval(double tau) {
    CMatrix& rho = state_.rho_;
    // Keep the argument moderate so the leading Bessel weights stay O(1).
    const int pieces = std::max(1, static_cast<int>(std::ceil(tau * width_ / 200.0)));
    const double h = tau / pieces;
    const double z = h * width_;
    const double cutoff = 1e-2 * options_.local_tol * h;
    for (int piece = 0; piece < pieces; ++piece) {
      u_prev_ = rho;
      rhs(u_prev_, u_cur_);
      u_cur_ /= width_;
      sum_ = std::cyl_bessel_j(0.0, z) * u_prev_ + (2.0 * std::cyl_bessel_j(1.0, z)) * u_cur_;
      for (int k = 2;; ++k) {
        const double jk = std::cyl_bessel_j(double(k), z);
        rhs(u_cur_, u_next_);
        u_next_ = (2.0 / width_) * u_next_ + u_prev_;
        sum_ += (2.0 * jk) * u_next_;
        std::swap(u_prev_, u_cur_);
        std::swap(u_cur_, u_next_);
        if (k > z && std::abs(jk) < cutoff) break;
        if (k > 10000) throw ConvergenceError("Chebyshev series did not converge");
      }
      rho = 0.5 * (sum_ + sum_.adjoint());
      ++accepted_;
    }
  }

  static cplx inner(const CMatrix& a, const CMatrix& b) {
    return Eigen::Map<const CVector>(a.data(), a.size()).dot(Eigen::Map<const CVector>(b.data(), b.size()));
  }

  // One Arnoldi exponential step; the basis is built once and reused while
  // the step shrinks. Returns the accepted step length.
  double arnoldi_step(double h, double t) {
    CMatrix& rho = state_.rho_;
    const int m = options_.krylov_dim;
    const double beta = rho.norm();
    basis_.resize(static_cast<std::size_t>(m + 1));
    basis_[0] = rho / beta;
    Eigen::MatrixXcd hess = Eigen::MatrixXcd::Zero(m + 1, m);
    int size = m;
    double residual = 0.0;
    for (int j = 0; j < m; ++j) {
      rhs(basis_[static_cast<std::size_t>(j)], basis_[static_cast<std::size_t>(j + 1)]);
      CMatrix& w = basis_[static_cast<std::size_t>(j + 1)];
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= j; ++i) {
          const cplx c = inner(basis_[static_cast<std::size_t>(i)], w);
          hess(i, j) += c;
          w -= c * basis_[static_cast<std::size_t>(i)];
        }
      const double norm = w.norm();
      hess(j + 1, j) = norm;
      if (norm < 1e-13 * std::max(1.0, hess.topRows(j + 1).cwiseAbs().maxCoeff())) {
        size = j + 1;
        residual = 0.0;
        break;
      }
      w /= norm;
      residual = norm;
    }
    const Eigen::MatrixXcd hm = hess.topLeftCorner(size, size);
    for (;;) {
      const Eigen::MatrixXcd e = (h * hm).exp();
      const double err = beta * residual * std::abs(e(size - 1, 0));
      const double allowed = options_.local_tol * h;
      if (err <= allowed) {
        rho = beta * e(0, 0) * basis_[0];
        for (int j = 1; j < size; ++j) rho += (beta * e(j, 0)) * basis_[static_cast<std::size_t>(j)];
        rho = 0.5 * (rho + rho.adjoint()).eval();
        ++accepted_;
        if (err < 0.05 * allowed) step_ = std::max(step_, 1.5 * h);
        return h;
      }
      h *= 0.7;
      step_ = h;
      if (h < options_.min_step_fraction * plan_.dt) {
        std::ostringstream os;
        os << "master-equation step size underflow near t = " << t;
        throw ConvergenceError(os.str());
      }
    }
  }

  // Returns the accepted step length (possibly smaller than h).
  double attempt(double h, double t) {
    CMatrix& rho = state_.rho_;
    rhs(rho, k1_);
    for (;;) {
      rk4(rho, k1_, h, full_);
      rk4(rho, k1_, 0.5 * h, half_);
      rhs(half_, k1_mid_);
      rk4(half_, k1_mid_, 0.5 * h, twice_);
      const double err = (twice_ - full_).cwiseAbs().maxCoeff() / 15.0;
      const double allowed = options_.local_tol * h;
      if (err <= allowed) {
        rho = 0.5 * (twice_ + twice_.adjoint());
        ++accepted_;
        const double grow = err > 0.0 ? 0.9 * std::pow(allowed / err, 0.2) : 2.0;
        step_ = std::min(max_step_, h * std::clamp(grow, 1.0, 2.0));
        return h;
      }
      h *= std::clamp(0.9 * std::pow(allowed / err, 0.2), 0.2, 0.9);
      step_ = h;
      if (h < options_.min_step_fraction * plan_.dt) {
        std::ostringstream os;
        os << "master-equation step size underflow near t = " << t;
        throw ConvergenceError(os.str());
      }
    }
  }

  void check_sample(int index, double t, bool positivity) {
    const double drift = std::abs(state_.trace() - 1.0);
    if (drift > 1e-8) {
      std::ostringstream os;
      os << "trace drift " << drift << " at t = " << t;
      throw ConvergenceError(os.str());
    }
    const double tail = state_.tail_weight();
    if (!(tail < state_.config().tail_tol)) throw TruncationError(t, tail, state_.config().tail_tol);
    if (positivity) {
      const double lowest = state_.min_eigenvalue();
      if (lowest < options_.positivity_floor) {
        std::ostringstream os;
        os << "density matrix lost positivity at t = " << t << " (eigenvalue " << lowest
           << ", sample " << index << ")";
        throw ConvergenceError(os.str());
      }
    }
  }

  const SparseOperator& h_;
  double rate_;
  int levels_;
  PropagatorPlan plan_;
  LindbladOptions options_;
  JointDensityMatrix state_;
  double max_step_ = 0.0;
  double step_ = 0.0;
  double accepted_ = 0;
  CMatrix k1_, k2_, k3_, k4_, k1_mid_, tmp_, full_, half_, twice_;
  std::vector<CMatrix> basis_;
  CMatrix u_prev_, u_cur_, u_next_, sum_;
  double width_ = 0.0;
};

void evolve_lindblad(const SparseOperator& h, const SparseOperator& b,
                     const JointDensityMatrix& rho0, const ModelParams& params,
                     const PropagatorPlan& plan, const DensityObserver& observer,
                     const LindbladOptions& options) {
  plan.validate();
  params.validate();
  if (!h.hermitian()) throw std::invalid_argument("evolve_lindblad requires a hermitian operator");
  if (h.dimension() != rho0.dimension()) throw std::invalid_argument("operator and density dimensions differ");
  if (b.dimension() != rho0.config().levels())
    throw std::invalid_argument("ladder operator must act on the oscillator levels");
  // The dissipator kernel is specialised to the standard lowering operator.
  const SparseOperator expected = build_ladder_ops(rho0.config()).annihilation;
  if ((b - expected).row_sum_norm() > 1e-12 * std::max(1.0, expected.row_sum_norm()))
    throw std::invalid_argument("evolve_lindblad expects the oscillator annihilation operator");
  if (!(options.local_tol > 0.0)) throw std::invalid_argument("local_tol must be > 0");
  if (options.krylov_dim < 4) throw std::invalid_argument("krylov_dim must be >= 4");
  LindbladIntegrator integrator(h, params.gamma / params.R, rho0, plan, options);
  integrator.run(observer);
}

std::vector<JointDensityMatrix> evolve_lindblad(const SparseOperator& h, const SparseOperator& b,
                                                const JointDensityMatrix& rho0,
                                                const ModelParams& params,
                                                const PropagatorPlan& plan,
                                                const LindbladOptions& options) {
  std::vector<JointDensityMatrix> out;
  evolve_lindblad(h, b, rho0, params, plan,
                  [&](int, double, const JointDensityMatrix& rho) { out.push_back(rho); }, options);
  return out;
}

}  // namespace rabicat
