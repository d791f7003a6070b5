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

#include "kerrcat/model.hpp"

namespace kerrcat {

/// Eigenspectrum of a parity-conserving cat Hamiltonian, reported in
/// nu-units (MHz). Eigenvalues are sorted descending, so the degenerate
/// cat manifold comes first in this inverted-well frame.
struct SpectrumReport {
    std::vector<double> eigenvalues_MHz;
    std::vector<int> parities;               // +1 / -1 per eigenstate
    std::vector<Vector> eigenvectors;        // same order
    double cat_energy_MHz = 0.0;             // mean of the top pair
    double cat_splitting_MHz = 0.0;          // |E0 - E1|
    /// Transition frequencies (negative) from the cat manifold to the
    /// closest odd and even excited states.
    std::pair<double, double> gap_numeric_MHz{0.0, 0.0};
    /// Half-frequency of the transition to the second even excited state.
    double two_photon_line_MHz = 0.0;
    double gap_estimate_MHz = 0.0;           // 4 eps2 when built from params
};

/// Full eigendecomposition with parity labels. H must be Hermitian and
/// commute with the parity operator; the solve runs per parity block so
/// the quasi-degenerate cat pair comes out with definite parity.
SpectrumReport diagonalize(const Operator& h);

/// Large-alpha gap magnitude 4 K nbar = 4 eps2, in MHz.
double gap_estimate(double K_MHz, double eps2_MHz);

/// Spurious in-manifold Z rotation rate Omega_z = -4 delta nbar e^{-2 nbar}
/// for a residual detuning delta (both in MHz).
double spurious_z_rate(double delta_MHz, double alpha);

/// Cat-manifold basis with fixed phases (overlap with |alpha> real
/// positive) and the in-manifold Pauli operators.
struct ManifoldBasis {
    PureState c_plus;   // even
    PureState c_minus;  // odd
    Operator sigma_x, sigma_y, sigma_z;
    Operator projector;  // |C+><C+| + |C-><C-|

    /// (C+ + e^{i phase} C-)/sqrt(2) and friends.
    PureState equator_state(double phase) const;
    PureState plus_x() const { return equator_state(0.0); }
    PureState minus_x() const { return equator_state(std::numbers::pi); }
};

ManifoldBasis manifold_basis(const Operator& h, Complex alpha_ref);

struct TuneupResult {
    double delta_as_MHz = 0.0;
    double residual_rate_MHz = 0.0;  // |Omega_z| at the minimizer
};

/// Scalar search over Delta_as minimizing the simulated Z-rotation rate
/// of |C_alpha^{+i}> under h_effective; 2 us evolution, phase fit of the
/// in-manifold Bloch angle. Throws FitError if the rate does not change
/// sign across Delta_as in [0, 8 K xi_s^2].
TuneupResult tuneup_detuning(const DeviceParams& p, int dim = 0);

/// Measured Z-rotation rate (MHz) at a given Delta_as; the primitive the
/// tuneup search minimizes, exposed for sweeps.
double measured_z_rate(const DeviceParams& p, double delta_as_MHz, int dim = 0);

}  // namespace kerrcat
