// Copyright 2026 The kerrcat authors
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

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

#include "kerrcat/dynamics.hpp"
#include "kerrcat/internal/prepared_channels.hpp"

namespace kerrcat {

PureState evolve_pure_const(const Operator& h, const PureState& psi0, double t) {
    if (h.size() != psi0.size()) {
        throw InvalidDimensionError("evolve_pure_const: dimension mismatch");
    }
    h.require_hermitian(1e-9);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.mat);
    Vector phases =
        (-kI * t * es.eigenvalues().array().cast<Complex>()).exp().matrix();
    Vector amp = es.eigenvectors() *
                 (phases.asDiagonal() * (es.eigenvectors().adjoint() * psi0.amp));
    amp.normalize();
    return PureState(std::move(amp), psi0.dims);
}

Matrix liouvillian_matrix(const Matrix& h, const std::vector<CollapseChannel>& channels) {
    const Eigen::Index n = h.rows();
    const Matrix id = Matrix::Identity(n, n);
    // Column-major vectorization: vec(A rho B) = (B^T kron A) vec(rho).
    Matrix l = -kI * (kron(id, h) - kron(h.transpose(), id));
    for (const auto& c : channels) {
        if (c.rate == 0.0) continue;
        const Matrix& lk = c.op.mat;
        const Matrix k = lk.adjoint() * lk;
        l += c.rate * (kron(lk.conjugate(), lk) - 0.5 * kron(id, k) -
                       0.5 * kron(k.transpose(), id));
    }
    return l;
}

DensityMatrix oracle_evolve(const Operator& h, const std::vector<CollapseChannel>& channels,
                            const DensityMatrix& rho0, double t) {
    const int n = rho0.size();
    if (n > 16) {
        throw InvalidDimensionError("oracle_evolve: dense superoperator limited to dim 16");
    }
    if (h.size() != n) throw InvalidDimensionError("oracle_evolve: dimension mismatch");
    Matrix l = liouvillian_matrix(h.mat, channels);
    Matrix p = (t * l).exp();
    Eigen::Map<const Vector> v0(rho0.mat.data(), n * n);
    Vector v = p * v0;
    Matrix rho = Eigen::Map<const Matrix>(v.data(), n, n);
    // Symmetrize away the expm roundoff so the invariant check is fair.
    rho = 0.5 * (rho + rho.adjoint().eval());
    return DensityMatrix(std::move(rho), rho0.dims);
}

namespace {

struct Recorder {
    const ConstOptions* opts;
    Trajectory* traj;
    std::vector<Matrix> obs_t;
    int recorded = 0;

    Recorder(const ConstOptions& o, Trajectory& t) : opts(&o), traj(&t) {
        traj->expectations.resize(o.observables.size());
        for (const auto& op : o.observables) obs_t.push_back(op.mat.transpose());
    }

    void record(double t, const Matrix& y, const std::vector<int>& dims) {
        traj->times.push_back(t);
        auto& d = traj->diag;
        const double tr_err = std::abs(y.trace().real() - 1.0) + std::abs(y.trace().imag());
        const double h_err = herm_deviation(y);
        d.max_trace_error = std::max(d.max_trace_error, tr_err);
        d.max_herm_error = std::max(d.max_herm_error, h_err);
        if (tr_err >= 1e-7) {
            d.violations.push_back("trace drift " + std::to_string(tr_err) + " at t=" +
                                   std::to_string(t));
        }
        if (opts->positivity_check_stride > 0 &&
            recorded % opts->positivity_check_stride == 0) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (y + y.adjoint().eval()),
                                                     Eigen::EigenvaluesOnly);
            d.min_eigenvalue = std::min(d.min_eigenvalue, es.eigenvalues().minCoeff());
        }
        for (std::size_t i = 0; i < obs_t.size(); ++i) {
            traj->expectations[i].push_back(obs_t[i].cwiseProduct(y).sum());
        }
        if (opts->keep_states) {
            traj->states.emplace_back();
            traj->states.back().mat = y;
            traj->states.back().dims = dims;
        }
        ++recorded;
    }
};

// Sample times must lie on a uniform base grid; returns (dt, multiples).
std::pair<double, std::vector<long>> base_grid(const std::vector<double>& t_samples) {
    if (t_samples.empty()) throw ContractViolation("no sample times");
    double dt = 0.0;
    for (std::size_t i = 0; i < t_samples.size(); ++i) {
        const double step = i == 0 ? t_samples[0] : t_samples[i] - t_samples[i - 1];
        if (step < -1e-12) throw ContractViolation("sample times must be nondecreasing");
        if (step > 1e-12 && (dt == 0.0 || step < dt)) dt = step;
    }
    if (dt == 0.0) dt = 1.0;
    std::vector<long> mult;
    for (double t : t_samples) {
        const double m = t / dt;
        const long ml = std::lround(m);
        if (std::abs(m - ml) > 1e-6) {
            throw ContractViolation("evolve_const: sample times must share a uniform grid");
        }
        mult.push_back(ml);
    }
    return {dt, mult};
}

// Exact amplitude-damping update for one mode; k-photon-loss Kraus
// operators applied as strided scaled copies.
class AmplitudeDamping {
  public:
    AmplitudeDamping(int mode, double rate, const std::vector<int>& dims, double tau)
        : mode_(mode), dims_(dims) {
        const int d = dims[mode];
        gamma_ = 1.0 - std::exp(-rate * tau);
        f_.assign(d, std::vector<double>(d, 0.0));
        // f_[k][n] = sqrt(C(n,k) (1-gamma)^(n-k) gamma^k)
        for (int n = 0; n < d; ++n) {
            double binom = 1.0;
            for (int k = 0; k <= n; ++k) {
                if (k > 0) binom *= static_cast<double>(n - k + 1) / k;
                f_[k][n] = std::sqrt(binom * std::pow(1.0 - gamma_, n - k) *
                                     std::pow(gamma_, k));
            }
        }
    }

    void apply(Matrix& rho, Matrix& scratch) const {
        const int d = dims_[mode_];
        const int other = dims_.size() == 2 ? dims_[1 - mode_] : 1;
        scratch.setZero();
        for (int k = 0; k < d; ++k) {
            if (k > 0 && f_[k][d - 1] < 1e-12 && gamma_ < 0.5) break;
            for (int m = 0; m + k < d; ++m) {
                for (int n = 0; n + k < d; ++n) {
                    const double w = f_[k][m + k] * f_[k][n + k];
                    if (w == 0.0) continue;
                    if (dims_.size() == 1 || mode_ == 0) {
                        scratch.block(m * other, n * other, other, other).noalias() +=
                            w * rho.block((m + k) * other, (n + k) * other, other, other);
                    } else {
                        scratch(Eigen::seqN(m, other, d), Eigen::seqN(n, other, d)) +=
                            w * rho(Eigen::seqN(m + k, other, d), Eigen::seqN(n + k, other, d));
                    }
                }
            }
        }
        rho.swap(scratch);
    }

  private:
    int mode_;
    std::vector<int> dims_;
    double gamma_;
    std::vector<std::vector<double>> f_;
};

// Strang splitting with the unitary factor exact (cached expm), pure
// lowering channels exact (Kraus), and remaining weak channels expanded
// to second order.
class SplitStepPropagator {
  public:
    SplitStepPropagator(const Operator& h, const std::vector<CollapseChannel>& channels,
                        const std::vector<int>& dims, double dt)
        : dims_(dims), dt_(dt) {
        const int n = h.size();
        Eigen::SelfAdjointEigenSolver<Matrix> es(h.mat);
        Vector phases =
            (-kI * dt * es.eigenvalues().array().cast<Complex>()).exp().matrix();
        u_ = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
        udag_ = u_.adjoint();

        std::vector<CollapseChannel> small;
        for (const auto& c : channels) {
            const int mode = lowering_mode(c.op, dims);
            if (mode >= 0) {
                kraus_.emplace_back(mode, c.rate, dims, 0.5 * dt);
            } else {
                small.push_back(c);
            }
        }
        small_ = internal::prepare_channels(small);
        t1_.resize(n, n);
        t2_.resize(n, n);
        scratch_.resize(n, n);
    }

    void step(Matrix& rho) {
        half_dissipative(rho);
        t1_.noalias() = u_ * rho;
        rho.noalias() = t1_ * udag_;
        half_dissipative(rho);
    }

  private:
    static int lowering_mode(const Operator& op, const std::vector<int>& dims) {
        for (std::size_t m = 0; m < dims.size(); ++m) {
            Operator a = annihilation(dims[m]);
            Matrix full = dims.size() == 2 ? on_mode(a, static_cast<int>(m), dims).mat
                                           : a.mat;
            if ((op.mat - full).cwiseAbs().maxCoeff() < 1e-12) return static_cast<int>(m);
        }
        return -1;
    }

    void half_dissipative(Matrix& rho) {
        for (const auto& k : kraus_) k.apply(rho, scratch_);
        if (!small_.empty()) {
            const double tau = 0.5 * dt_;
            t1_.setZero();
            internal::add_dissipators(small_, rho, t1_, t2_);
            scratch_.setZero();
            internal::add_dissipators(small_, t1_, scratch_, t2_);
            rho.noalias() += tau * t1_;
            rho.noalias() += (0.5 * tau * tau) * scratch_;
        }
    }

    std::vector<int> dims_;
    double dt_;
    Matrix u_, udag_;
    std::vector<AmplitudeDamping> kraus_;
    std::vector<internal::PreparedChannel> small_;
    Matrix t1_, t2_, scratch_;
};

}  // namespace

Trajectory evolve_const(const Operator& h, const std::vector<CollapseChannel>& channels,
                        const DensityMatrix& rho0, const std::vector<double>& t_samples,
                        const ConstOptions& opts) {
    if (h.size() != rho0.size()) {
        throw InvalidDimensionError("evolve_const: dimension mismatch");
    }
    h.require_hermitian(1e-9);
    auto [dt, mult] = base_grid(t_samples);

    Trajectory traj;
    Recorder rec(opts, traj);
    const int n = h.size();

    bool any_rate = false;
    for (const auto& c : channels) any_rate = any_rate || c.rate > 0.0;

    if (!any_rate) {
        // Unitary stepping: rho -> U rho U^dag with U = exp(-i H dt).
        Eigen::SelfAdjointEigenSolver<Matrix> es(h.mat);
        Vector phases =
            (-kI * dt * es.eigenvalues().array().cast<Complex>()).exp().matrix();
        Matrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
        Matrix udag = u.adjoint();
        Matrix y = rho0.mat, tmp(n, n);
        long step = 0;
        for (std::size_t i = 0; i < mult.size(); ++i) {
            while (step < mult[i]) {
                tmp.noalias() = u * y;
                y.noalias() = tmp * udag;
                ++step;
            }
            rec.record(t_samples[i], y, rho0.dims);
        }
        return traj;
    }

    if (static_cast<long>(n) * n <= opts.max_superop_dim) {
        Matrix l = liouvillian_matrix(h.mat, channels);
        Matrix p = (dt * l).exp();
        Vector v = Eigen::Map<const Vector>(rho0.mat.data(), n * n);
        long step = 0;
        for (std::size_t i = 0; i < mult.size(); ++i) {
            while (step < mult[i]) {
                v = p * v;
                ++step;
            }
            Matrix y = Eigen::Map<const Matrix>(v.data(), n, n);
            rec.record(t_samples[i], y, rho0.dims);
        }
        return traj;
    }

    // Split-step path; subdivide the sample spacing to the requested dt.
    const int nsub = std::max(1, static_cast<int>(std::ceil(dt / opts.split_dt)));
    SplitStepPropagator prop(h, channels, rho0.dims, dt / nsub);
    Matrix y = rho0.mat;
    long step = 0;
    for (std::size_t i = 0; i < mult.size(); ++i) {
        while (step < mult[i]) {
            for (int s = 0; s < nsub; ++s) prop.step(y);
            ++step;
        }
        rec.record(t_samples[i], y, rho0.dims);
    }
    return traj;
}

}  // namespace kerrcat
