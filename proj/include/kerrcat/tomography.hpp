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

#include <array>
#include <cstdint>
#include <functional>

#include "kerrcat/fitting.hpp"
#include "kerrcat/schedule.hpp"

namespace kerrcat {

/// 6 preparations x {<I>,<X>,<Y>,<Z>} plus per-value standard errors.
/// Indexed by the Cardinal enum order.
struct ExpectationSet {
    std::array<double, 6> I{}, X{}, Y{}, Z{};
    std::array<double, 6> I_err{}, X_err{}, Y_err{}, Z_err{};

    void set_uniform_error(double err);
};

/// 4x4 real Pauli transfer matrix.
struct PTM {
    Eigen::Matrix4d r = Eigen::Matrix4d::Identity();
};

struct TomoOptions {
    int dim = 24;
    bool thermal_init = false;
    double rtol = 1e-8;
    double atol = 1e-10;
};

/// Full pipeline per cardinal preparation: Fock-qubit init, mapping ramp,
/// the operation under test, reverse ramp, ideal Fock-qubit basis
/// rotations, and the three-outcome {|0>,|1>,leak} projective readout.
/// <I> is the retained population; leaked population is discarded.
ExpectationSet measure_cardinals(const std::function<void(PulseSchedule&)>& operation,
                                 const DeviceParams& p, const NoiseConfig& noise,
                                 const TomoOptions& opts = {});

/// Fock-qubit readout of a final state: expectations from the {0,1}
/// block after undoing the accumulated cat-frame phase.
void fock_readout(const DensityMatrix& rho, double frame_phase, double& i_val,
                  double& x_val, double& y_val, double& z_val);

/// Pauli-transfer matrix from measured expectations, with the
/// mapping-only set as the initial Pauli frame. No maximum-likelihood
/// projection is applied.
PTM ptm_from_expectations(const ExpectationSet& es, const ExpectationSet& reference);

/// F = ((1/2) Tr(R_ideal^T R_exp) + 1) / 3.
double ptm_fidelity(const PTM& r_exp, const PTM& r_ideal);

/// Expectations of perfect preparations sent through a 2x2 unitary.
ExpectationSet ideal_expectations(const Eigen::Matrix2cd& u);

/// PTM of a 2x2 unitary, built through the same expectation pipeline so
/// orientations always match.
PTM ideal_ptm(const Eigen::Matrix2cd& u);

Eigen::Matrix2cd rot_x(double theta);
Eigen::Matrix2cd rot_z(double theta);

/// Gaussian resampling of every expectation value by its standard error;
/// returns the standard deviation of the refit PTM fidelity.
double bootstrap_fidelity_error(const ExpectationSet& es, const ExpectationSet& reference,
                                const PTM& r_ideal, int n_resamples, std::uint64_t seed);

// --- in-manifold (noiseless) process tomography -------------------------

struct ManifoldTomographyResult {
    PTM ptm;
    double fidelity = 0.0;  // against the supplied ideal unitary
};

/// Process tomography restricted to the cat manifold: pure-state
/// evolution of the six manifold cardinal states through the operation,
/// projected back onto the (frame-rotated) manifold basis.
ManifoldTomographyResult manifold_process_tomography(
    const std::function<void(PulseSchedule&)>& operation, const Eigen::Matrix2cd& ideal,
    const DeviceParams& p, int dim = 24);

// --- random sequence benchmark ------------------------------------------

struct RbOptions {
    int dim = 24;
    std::vector<int> sequence_lengths;  // defaults to a log grid up to n_max
};

struct RbResult {
    std::vector<int> lengths;
    std::vector<double> z_mean;
    double tau_n = 0.0;
    double per_gate_error = 0.0;  // r = (1 - e^{-1/tau})/2
    ExpFit fit;
};

/// Random sequences of X(pi/2), X(pi) closed by an exactly composed undo
/// gate; ensemble <Z> vs sequence length with an exponential fit.
RbResult random_sequence_benchmark(int n_max, int n_samples, const DeviceParams& p,
                                   const NoiseConfig& noise, std::uint64_t seed,
                                   const RbOptions& opts = {});

}  // namespace kerrcat
