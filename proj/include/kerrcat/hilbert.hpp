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

#include <Eigen/Dense>
#include <vector>

#include "kerrcat/errors.hpp"
#include "kerrcat/units.hpp"

namespace kerrcat {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Largest absolute deviation from Hermiticity, max|M - M^dag|.
double herm_deviation(const Matrix& m);

/// Dense operator on a truncated Fock space. `dims` lists the mode
/// dimensions; their product equals the matrix size (one or two modes).
struct Operator {
    Matrix mat;
    std::vector<int> dims;

    Operator() = default;
    Operator(Matrix m, std::vector<int> d);

    int size() const { return static_cast<int>(mat.rows()); }
    int n_modes() const { return static_cast<int>(dims.size()); }

    Operator dagger() const;
    /// Throws ContractViolation unless max|M - M^dag| < tol.
    void require_hermitian(double tol = 1e-12) const;
};

/// Normalized state vector on the same truncated space as Operator.
struct PureState {
    Vector amp;
    std::vector<int> dims;

    PureState() = default;
    PureState(Vector a, std::vector<int> d);

    int size() const { return static_cast<int>(amp.size()); }
};

/// Hermitian, unit-trace density matrix. Construction checks trace and
/// Hermiticity; the positivity check runs an eigensolve so it is a
/// separate call for use at pipeline boundaries rather than hot loops.
struct DensityMatrix {
    Matrix mat;
    std::vector<int> dims;

    DensityMatrix() = default;
    DensityMatrix(Matrix m, std::vector<int> d);

    int size() const { return static_cast<int>(mat.rows()); }

    static DensityMatrix from_pure(const PureState& psi);

    double trace_error() const;
    double herm_error() const { return herm_deviation(mat); }
    double min_eigenvalue() const;
    /// Full invariant check (trace 1e-8, Hermiticity 1e-10, min eig > -1e-8).
    void validate() const;
};

// --- constructors -----------------------------------------------------

Operator identity_op(int dim);
Operator annihilation(int dim);
Operator creation(int dim);
Operator number_op(int dim);
Operator parity(int dim);

PureState fock(int n, int dim);

/// Unitary displacement exp(alpha a^dag - alpha* a), built by matrix
/// exponential in a workspace of dimension dim + ceil(8|alpha|) and then
/// truncated. Requires |alpha|^2 + 5|alpha| < dim.
Operator displacement(Complex alpha, int dim);

/// Coherent state with amplitudes e^{-|a|^2/2} a^n / sqrt(n!),
/// renormalized after truncation. Same guard as displacement.
PureState coherent_state(Complex alpha, int dim);

/// Even / odd cat states N^pm (|alpha> pm |-alpha>).
PureState cat_even(Complex alpha, int dim);
PureState cat_odd(Complex alpha, int dim);

// --- algebra ----------------------------------------------------------

/// Kronecker product, row-major block layout (mode 0 slow, mode 1 fast).
Matrix kron(const Matrix& a, const Matrix& b);

Operator tensor(const Operator& a, const Operator& b);
PureState tensor(const PureState& a, const PureState& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Embed a single-mode operator on mode `mode` of a two-mode space.
Operator on_mode(const Operator& op, int mode, const std::vector<int>& dims);

/// Trace out all modes except `keep` (two-mode only).
DensityMatrix partial_trace(const DensityMatrix& rho, int keep);

Complex expval(const Operator& op, const PureState& psi);
Complex expval(const Operator& op, const DensityMatrix& rho);
Complex overlap(const PureState& a, const PureState& b);

/// |<a|b>|^2 fidelity between pure states.
double state_fidelity(const PureState& a, const PureState& b);

// --- Wigner function --------------------------------------------------

/// W(a) = (2/pi) Tr[D^dag(a) rho D(a) P], evaluated in an enlarged
/// workspace so the displaced state is not clipped by the truncation.
/// The result is real to 1e-10; the imaginary residual is checked.
std::vector<double> wigner(const DensityMatrix& rho,
                           const std::vector<Complex>& points);

/// Cartesian-grid version; exploits D(x + iy) = e^{ixy} D(x) D(iy) so the
/// 1-D displacement exponentials are built once per axis value.
/// Returns row-major field W[iy * nx + ix].
std::vector<double> wigner_grid(const DensityMatrix& rho,
                                const std::vector<double>& xs,
                                const std::vector<double>& ys);

}  // namespace kerrcat
