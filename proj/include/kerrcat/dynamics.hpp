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

#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "kerrcat/hilbert.hpp"
#include "kerrcat/model.hpp"

namespace kerrcat {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// One dissipation channel rate * D[L].
struct CollapseChannel {
    Operator op;
    double rate = 0.0;  // 1/us, angular-consistent
};

/// Dissipators of the single-mode master equation per the noise config:
/// kappa_a (1+n_th) D[a], kappa_a n_th D[a^dag], kappa_phi D[a^dag a].
std::vector<CollapseChannel> qubit_channels(const DeviceParams& p,
                                            const NoiseConfig& noise, int dim);

/// Same channels embedded on mode a of a two-mode space, plus
/// kappa_b D[b] on the cavity when enabled.
std::vector<CollapseChannel> two_mode_channels(const DeviceParams& p,
                                               const NoiseConfig& noise,
                                               const std::vector<int>& dims);

/// -i[H, rho] + sum_k rate_k (L rho L^dag - 1/2 {L^dag L, rho}),
/// evaluated by direct matrix products.
Matrix lindblad_rhs(const Matrix& h, const std::vector<CollapseChannel>& channels,
                    const Matrix& rho);

/// Time-dependent Hamiltonian: envelope coefficients sampled inside
/// integrator stages scale a fixed sparse term list.
class TimeDependentH {
  public:
    TimeDependentH(const std::vector<HamiltonianTerm>& terms,
                   std::function<SlotValues(double)> envelopes);

    int size() const { return size_; }
    /// Refresh the sparse matrix for time t and return it.
    const SparseMatrix& at(double t);
    bool is_static() const { return !envelopes_; }

  private:
    int size_ = 0;
    std::function<SlotValues(double)> envelopes_;
    SparseMatrix pattern_;                 // union sparsity, values rewritten
    std::vector<Eigen::VectorXcd> values_; // per-term values on the pattern
    std::vector<Slot> slots_;
};

struct TrajectoryDiagnostics {
    double max_trace_error = 0.0;
    double max_herm_error = 0.0;
    double min_eigenvalue = 1.0;  // over the samples where it was checked
    long accepted_steps = 0;
    long rejected_steps = 0;
    std::vector<std::string> violations;  // reported, never repaired
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;             // empty if keep_states off
    std::vector<std::vector<Complex>> expectations; // [observable][sample]
    TrajectoryDiagnostics diag;
};

struct EvolveOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    bool keep_states = true;
    std::vector<Operator> observables;
    /// Check positivity every n-th sample (0 = off); trace/Hermiticity
    /// are always checked per sample.
    int positivity_check_stride = 0;
    long max_steps = 80'000'000;
};

/// Adaptive embedded Dormand-Prince 5(4) integration of the master
/// equation. Steps are clamped to the sample times and to the listed
/// discontinuity breakpoints so envelope kinks are never stepped over.
Trajectory integrate_master_equation(TimeDependentH& h,
                                     const std::vector<CollapseChannel>& channels,
                                     const DensityMatrix& rho0,
                                     const std::vector<double>& t_samples,
                                     const std::vector<double>& breakpoints,
                                     const EvolveOptions& opts = {});

struct PureTrajectory {
    std::vector<double> times;
    std::vector<PureState> states;
};

/// Adaptive Schroedinger integration of a pure state (no dissipation);
/// same stepper and clamping rules as the master-equation path.
PureTrajectory integrate_schroedinger(TimeDependentH& h, const PureState& psi0,
                                      const std::vector<double>& t_samples,
                                      const std::vector<double>& breakpoints,
                                      double rtol = 1e-9, double atol = 1e-11);

// --- exact propagation for constant generators -------------------------

/// exp(-i H t) psi via eigendecomposition; exact for Hermitian H.
PureState evolve_pure_const(const Operator& h, const PureState& psi0, double t);

/// Dense Liouvillian matrix over column-major vec(rho).
Matrix liouvillian_matrix(const Matrix& h, const std::vector<CollapseChannel>& channels);

/// Brute-force oracle: materialize the Liouvillian and apply its matrix
/// exponential. Requires total dimension <= 16.
DensityMatrix oracle_evolve(const Operator& h,
                            const std::vector<CollapseChannel>& channels,
                            const DensityMatrix& rho0, double t);

struct ConstOptions {
    bool keep_states = true;
    std::vector<Operator> observables;
    int positivity_check_stride = 0;
    /// Liouvillian-exponential path is used while N^2 <= this; larger
    /// problems fall back to the split-step propagator.
    int max_superop_dim = 1764;
    /// Split-step internal substep (us); halve until observables settle.
    double split_dt = 5e-4;
};

/// Exact/spectral propagation for a time-independent Hamiltonian and
/// constant channels, sampled on a uniform time grid:
///   - no channels: unitary propagation via eigendecomposition,
///   - N^2 small:   one matrix exponential of the Liouvillian, reused,
///   - otherwise:   Strang split-step (exact unitary via cached expm,
///                  exact amplitude-damping Kraus for pure lowering
///                  channels, second-order expansion for weak channels).
Trajectory evolve_const(const Operator& h, const std::vector<CollapseChannel>& channels,
                        const DensityMatrix& rho0, const std::vector<double>& t_samples,
                        const ConstOptions& opts = {});

}  // namespace kerrcat
