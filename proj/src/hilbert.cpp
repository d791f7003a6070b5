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

#include "kerrcat/hilbert.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kerrcat {

namespace {

int dims_product(const std::vector<int>& dims) {
    int p = 1;
    for (int d : dims) p *= d;
    return p;
}

void check_dims(const std::vector<int>& dims, int size, const char* what) {
    if (dims.empty() || dims_product(dims) != size) {
        throw InvalidDimensionError(std::string(what) +
                                    ": mode dimensions do not match size");
    }
    for (int d : dims) {
        if (d < 2) {
            throw InvalidDimensionError(std::string(what) + ": dim < 2");
        }
    }
}

void check_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) {
        throw ContractViolation(std::string(what) + ": non-finite entries");
    }
}

int displacement_workspace(Complex alpha, int dim) {
    return dim + static_cast<int>(std::ceil(8.0 * std::abs(alpha)));
}

void displacement_guard(Complex alpha, int dim) {
    const double a = std::abs(alpha);
    if (a * a + 5.0 * a >= static_cast<double>(dim)) {
        throw TruncationError("displacement: |alpha|^2 + 5|alpha| >= dim (" +
                              std::to_string(a) + " vs dim " +
                              std::to_string(dim) + ")");
    }
}

}  // namespace

double herm_deviation(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Operator::Operator(Matrix m, std::vector<int> d) : mat(std::move(m)), dims(std::move(d)) {
    if (mat.rows() != mat.cols()) {
        throw InvalidDimensionError("Operator: matrix not square");
    }
    check_dims(dims, size(), "Operator");
    check_finite(mat, "Operator");
}

Operator Operator::dagger() const { return Operator(mat.adjoint(), dims); }

void Operator::require_hermitian(double tol) const {
    if (herm_deviation(mat) >= tol) {
        throw ContractViolation("Operator: Hermiticity violated");
    }
}

PureState::PureState(Vector a, std::vector<int> d) : amp(std::move(a)), dims(std::move(d)) {
    check_dims(dims, size(), "PureState");
    if (!amp.allFinite()) {
        throw ContractViolation("PureState: non-finite amplitudes");
    }
    if (std::abs(amp.norm() - 1.0) >= 1e-10) {
        throw ContractViolation("PureState: not normalized");
    }
}

DensityMatrix::DensityMatrix(Matrix m, std::vector<int> d)
    : mat(std::move(m)), dims(std::move(d)) {
    if (mat.rows() != mat.cols()) {
        throw InvalidDimensionError("DensityMatrix: matrix not square");
    }
    check_dims(dims, size(), "DensityMatrix");
    check_finite(mat, "DensityMatrix");
    if (trace_error() >= 1e-8) {
        throw ContractViolation("DensityMatrix: trace deviates from 1");
    }
    if (herm_error() >= 1e-10) {
        throw ContractViolation("DensityMatrix: not Hermitian");
    }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    return DensityMatrix(psi.amp * psi.amp.adjoint(), psi.dims);
}

double DensityMatrix::trace_error() const { return std::abs(mat.trace().real() - 1.0); }

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void DensityMatrix::validate() const {
    if (trace_error() >= 1e-8 || herm_error() >= 1e-10) {
        throw ContractViolation("DensityMatrix: trace/Hermiticity invariant violated");
    }
    if (min_eigenvalue() <= -1e-8) {
        throw ContractViolation("DensityMatrix: negative eigenvalue");
    }
}

Operator identity_op(int dim) {
    if (dim < 2) throw InvalidDimensionError("identity_op: dim < 2");
    return Operator(Matrix::Identity(dim, dim), {dim});
}

Operator annihilation(int dim) {
    if (dim < 2) throw InvalidDimensionError("annihilation: dim < 2");
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 0; n + 1 < dim; ++n) {
        a(n, n + 1) = std::sqrt(static_cast<double>(n + 1));
    }
    return Operator(std::move(a), {dim});
}

Operator creation(int dim) { return annihilation(dim).dagger(); }

Operator number_op(int dim) {
    if (dim < 2) throw InvalidDimensionError("number_op: dim < 2");
    Matrix n = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
    return Operator(std::move(n), {dim});
}

Operator parity(int dim) {
    if (dim < 2) throw InvalidDimensionError("parity: dim < 2");
    Matrix p = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
    return Operator(std::move(p), {dim});
}

PureState fock(int n, int dim) {
    if (dim < 2) throw InvalidDimensionError("fock: dim < 2");
    if (n < 0 || n >= dim) throw InvalidDimensionError("fock: level outside space");
    Vector v = Vector::Zero(dim);
    v(n) = 1.0;
    return PureState(std::move(v), {dim});
}

Operator displacement(Complex alpha, int dim) {
    if (dim < 2) throw InvalidDimensionError("displacement: dim < 2");
    displacement_guard(alpha, dim);
    const int ws = displacement_workspace(alpha, dim);
    Matrix a = annihilation(ws).mat;
    Matrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
    Matrix d_full = gen.exp();
    return Operator(d_full.topLeftCorner(dim, dim), {dim});
}

PureState coherent_state(Complex alpha, int dim) {
    if (dim < 2) throw InvalidDimensionError("coherent_state: dim < 2");
    displacement_guard(alpha, dim);
    Vector c(dim);
    c(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n) {
        c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    }
    c.normalize();
    return PureState(std::move(c), {dim});
}

namespace {
PureState cat_state(Complex alpha, double sign, int dim) {
    Vector plus = coherent_state(alpha, dim).amp;
    Vector minus = coherent_state(-alpha, dim).amp;
    Vector c = plus + sign * minus;
    c.normalize();
    return PureState(std::move(c), {dim});
}
}  // namespace

PureState cat_even(Complex alpha, int dim) { return cat_state(alpha, +1.0, dim); }
PureState cat_odd(Complex alpha, int dim) { return cat_state(alpha, -1.0, dim); }

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

namespace {
std::vector<int> cat_dims(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> d = a;
    d.insert(d.end(), b.begin(), b.end());
    return d;
}
}  // namespace

Operator tensor(const Operator& a, const Operator& b) {
    return Operator(kron(a.mat, b.mat), cat_dims(a.dims, b.dims));
}

PureState tensor(const PureState& a, const PureState& b) {
    Vector v(a.size() * b.size());
    for (int i = 0; i < a.size(); ++i) {
        v.segment(i * b.size(), b.size()) = a.amp(i) * b.amp;
    }
    return PureState(std::move(v), cat_dims(a.dims, b.dims));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix(kron(a.mat, b.mat), cat_dims(a.dims, b.dims));
}

Operator on_mode(const Operator& op, int mode, const std::vector<int>& dims) {
    if (dims.size() != 2 || mode < 0 || mode > 1) {
        throw InvalidDimensionError("on_mode: expects a two-mode space");
    }
    if (op.size() != dims[mode]) {
        throw InvalidDimensionError("on_mode: operator does not match mode dim");
    }
    const Matrix ia = Matrix::Identity(dims[0], dims[0]);
    const Matrix ib = Matrix::Identity(dims[1], dims[1]);
    Matrix m = (mode == 0) ? kron(op.mat, ib) : kron(ia, op.mat);
    return Operator(std::move(m), dims);
}

DensityMatrix partial_trace(const DensityMatrix& rho, int keep) {
    if (rho.dims.size() != 2 || keep < 0 || keep > 1) {
        throw InvalidDimensionError("partial_trace: expects a two-mode state");
    }
    const int da = rho.dims[0];
    const int db = rho.dims[1];
    const int dk = rho.dims[keep];
    Matrix out = Matrix::Zero(dk, dk);
    if (keep == 0) {
        for (int i = 0; i < da; ++i)
            for (int j = 0; j < da; ++j)
                for (int n = 0; n < db; ++n)
                    out(i, j) += rho.mat(i * db + n, j * db + n);
    } else {
        for (int i = 0; i < db; ++i)
            for (int j = 0; j < db; ++j)
                for (int n = 0; n < da; ++n)
                    out(i, j) += rho.mat(n * db + i, n * db + j);
    }
    return DensityMatrix(std::move(out), {dk});
}

Complex expval(const Operator& op, const PureState& psi) {
    return psi.amp.dot(op.mat * psi.amp);
}

Complex expval(const Operator& op, const DensityMatrix& rho) {
    return (op.mat * rho.mat).trace();
}

Complex overlap(const PureState& a, const PureState& b) { return a.amp.dot(b.amp); }

double state_fidelity(const PureState& a, const PureState& b) {
    return std::norm(overlap(a, b));
}

namespace {

// Displaced-parity trace with rho embedded in the workspace so that far
// displacements are not clipped by the physical truncation.
double displaced_parity(const Matrix& rho_block, const Matrix& d_ws) {
    const int dim = static_cast<int>(rho_block.rows());
    const int ws = static_cast<int>(d_ws.rows());
    // Tr[D^dag rho D P] = sum_n (-1)^n d_n^dag rho d_n with d_n = D e_n.
    // rho only occupies the top-left dim x dim block.
    Matrix m = rho_block * d_ws.topRows(dim);  // dim x ws
    Complex w = 0.0;
    for (int n = 0; n < ws; ++n) {
        const Complex v = d_ws.col(n).head(dim).dot(m.col(n));
        w += (n % 2 == 0) ? v : -v;
    }
    if (std::abs(w.imag()) > 1e-10) {
        throw ContractViolation("wigner: displaced parity not real");
    }
    return w.real();
}

}  // namespace

std::vector<double> wigner(const DensityMatrix& rho, const std::vector<Complex>& points) {
    if (rho.dims.size() != 1) {
        throw InvalidDimensionError("wigner: single-mode states only");
    }
    double amax = 0.0;
    for (Complex p : points) amax = std::max(amax, std::abs(p));
    const int dim = rho.size();
    const int ws = dim + static_cast<int>(std::ceil(8.0 * amax)) + 8;
    const Matrix a = annihilation(ws).mat;
    const Matrix adag = a.adjoint();

    std::vector<double> field;
    field.reserve(points.size());
    for (Complex p : points) {
        Matrix d = (p * adag - std::conj(p) * a).exp();
        field.push_back((2.0 / std::numbers::pi) * displaced_parity(rho.mat, d));
    }
    return field;
}

std::vector<double> wigner_grid(const DensityMatrix& rho, const std::vector<double>& xs,
                                const std::vector<double>& ys) {
    if (rho.dims.size() != 1) {
        throw InvalidDimensionError("wigner_grid: single-mode states only");
    }
    double amax = 0.0;
    for (double x : xs)
        for (double y : ys) amax = std::max(amax, std::hypot(x, y));
    const int dim = rho.size();
    const int ws = dim + static_cast<int>(std::ceil(8.0 * amax)) + 8;
    const Matrix a = annihilation(ws).mat;
    const Matrix adag = a.adjoint();

    std::vector<Matrix> dx, dy;
    dx.reserve(xs.size());
    dy.reserve(ys.size());
    for (double x : xs) dx.push_back(((x * adag) - (x * a)).exp());
    for (double y : ys) dy.push_back((Complex(0, y) * (adag + a)).exp());

    std::vector<double> field(xs.size() * ys.size());
    for (std::size_t iy = 0; iy < ys.size(); ++iy) {
        for (std::size_t ix = 0; ix < xs.size(); ++ix) {
            // D(x + iy) = e^{i x y} D(x) D(iy); the phase cancels in the
            // sandwich so only the product matters.
            Matrix d = dx[ix] * dy[iy];
            field[iy * xs.size() + ix] =
                (2.0 / std::numbers::pi) * displaced_parity(rho.mat, d);
        }
    }
    return field;
}

}  // namespace kerrcat
