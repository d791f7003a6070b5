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

#include "kerrcat/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kerrcat/dynamics.hpp"

namespace kerrcat {

SpectrumReport diagonalize(const Operator& h) {
    h.require_hermitian(1e-9);
    const int dim = h.size();
    const Matrix p = parity(dim).mat;
    if ((h.mat * p - p * h.mat).cwiseAbs().maxCoeff() > 1e-8 * h.mat.cwiseAbs().maxCoeff()) {
        throw ContractViolation("diagonalize: Hamiltonian does not conserve parity");
    }

    // Solve per parity block; the quasi-degenerate cat pair then comes
    // out with definite parity instead of an arbitrary mixture.
    struct Level {
        double e;
        int parity;
        Vector v;
    };
    std::vector<Level> levels;
    for (int par = 0; par < 2; ++par) {
        std::vector<int> idx;
        for (int n = par; n < dim; n += 2) idx.push_back(n);
        const int m = static_cast<int>(idx.size());
        Matrix block(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) block(i, j) = h.mat(idx[i], idx[j]);
        Eigen::SelfAdjointEigenSolver<Matrix> es(block);
        for (int k = 0; k < m; ++k) {
            Level lv;
            lv.e = es.eigenvalues()(k);
            lv.parity = par == 0 ? +1 : -1;
            lv.v = Vector::Zero(dim);
            for (int i = 0; i < m; ++i) lv.v(idx[i]) = es.eigenvectors()(i, k);
            levels.push_back(std::move(lv));
        }
    }
    std::sort(levels.begin(), levels.end(),
              [](const Level& a, const Level& b) { return a.e > b.e; });

    SpectrumReport rep;
    for (auto& lv : levels) {
        rep.eigenvalues_MHz.push_back(to_mhz(lv.e));
        rep.parities.push_back(lv.parity);
        rep.eigenvectors.push_back(std::move(lv.v));
    }
    rep.cat_energy_MHz = 0.5 * (rep.eigenvalues_MHz[0] + rep.eigenvalues_MHz[1]);
    rep.cat_splitting_MHz = std::abs(rep.eigenvalues_MHz[0] - rep.eigenvalues_MHz[1]);

    // First excited states of each parity below the cat pair, and the
    // second even state for the two-photon line.
    double e_odd = 0.0, e_even = 0.0, e_even2 = 0.0;
    int seen_even = 0;
    bool have_odd = false;
    for (std::size_t k = 2; k < rep.eigenvalues_MHz.size(); ++k) {
        if (rep.parities[k] < 0 && !have_odd) {
            e_odd = rep.eigenvalues_MHz[k];
            have_odd = true;
        }
        if (rep.parities[k] > 0) {
            ++seen_even;
            if (seen_even == 1) e_even = rep.eigenvalues_MHz[k];
            if (seen_even == 2) e_even2 = rep.eigenvalues_MHz[k];
        }
        if (have_odd && seen_even >= 2) break;
    }
    const double g_odd = e_odd - rep.cat_energy_MHz;
    const double g_even = e_even - rep.cat_energy_MHz;
    rep.gap_numeric_MHz = std::abs(g_even) < std::abs(g_odd)
                              ? std::make_pair(g_even, g_odd)
                              : std::make_pair(g_odd, g_even);
    rep.two_photon_line_MHz = 0.5 * (e_even2 - rep.cat_energy_MHz);
    return rep;
}

double gap_estimate(double K_MHz, double eps2_MHz) {
    if (!(eps2_MHz > 0)) throw ContractViolation("gap_estimate: eps2 must be > 0");
    (void)K_MHz;  // 4 K nbar = 4 eps2; K cancels
    return 4.0 * eps2_MHz;
}

double spurious_z_rate(double delta_MHz, double alpha) {
    const double nbar = alpha * alpha;
    return -4.0 * delta_MHz * nbar * std::exp(-2.0 * nbar);
}

PureState ManifoldBasis::equator_state(double phase) const {
    Vector v = (c_plus.amp + std::exp(kI * phase) * c_minus.amp) / std::sqrt(2.0);
    v.normalize();
    return PureState(std::move(v), c_plus.dims);
}

ManifoldBasis manifold_basis(const Operator& h, Complex alpha_ref) {
    SpectrumReport rep = diagonalize(h);
    const int dim = h.size();
    Vector vp, vm;
    if (rep.parities[0] > 0) {
        vp = rep.eigenvectors[0];
        vm = rep.eigenvectors[1];
    } else {
        vp = rep.eigenvectors[1];
        vm = rep.eigenvectors[0];
    }
    // Fix phases so the overlap with |alpha_ref> is real positive; the
    // manifold combinations then behave like the textbook cat basis.
    const Vector coh = coherent_state(alpha_ref, dim).amp;
    const Complex op = coh.dot(vp);
    const Complex om = coh.dot(vm);
    if (std::abs(op) > 1e-12) vp *= std::conj(op) / std::abs(op) * 1.0;
    if (std::abs(om) > 1e-12) vm *= std::conj(om) / std::abs(om) * 1.0;

    ManifoldBasis basis;
    basis.c_plus = PureState(vp, {dim});
    basis.c_minus = PureState(vm, {dim});
    Matrix pp = vp * vp.adjoint();
    Matrix mm = vm * vm.adjoint();
    Matrix pm = vp * vm.adjoint();
    basis.sigma_x = Operator(pm + pm.adjoint().eval(), {dim});
    basis.sigma_y = Operator(-kI * (pm - pm.adjoint().eval()), {dim});
    basis.sigma_z = Operator(pp - mm, {dim});
    basis.projector = Operator(pp + mm, {dim});
    return basis;
}

namespace {

// Unwrapped in-manifold Bloch angle slope of |C^{+i}> under h_effective,
// over a short unitary evolution.
double z_rate_of(const DeviceParams& p, int dim) {
    const Operator h = h_effective(p, dim);
    const ManifoldBasis basis = manifold_basis(h, p.alpha());
    // |C^{+i}> = (|a> + i|-a>)/sqrt(2), an equator state of the manifold.
    PureState psi = basis.equator_state(-0.5 * std::numbers::pi);

    Eigen::SelfAdjointEigenSolver<Matrix> es(h.mat);
    const Vector modes = es.eigenvectors().adjoint() * psi.amp;

    const double t_max = 2.0, dt = 0.05;
    double prev_angle = 0.0, acc = 0.0;
    std::vector<double> ts, angles;
    for (double t = 0.0; t <= t_max + 1e-9; t += dt) {
        Vector phases = (-kI * t * es.eigenvalues().array().cast<Complex>()).exp().matrix();
        Vector amp = es.eigenvectors() * (phases.asDiagonal() * modes);
        const Complex sx = amp.dot(basis.sigma_x.mat * amp);
        const Complex sy = amp.dot(basis.sigma_y.mat * amp);
        double ang = std::atan2(sy.real(), sx.real());
        if (!ts.empty()) {
            double d = ang - prev_angle;
            while (d > std::numbers::pi) d -= kTwoPi;
            while (d < -std::numbers::pi) d += kTwoPi;
            acc += d;
        }
        prev_angle = ang;
        ts.push_back(t);
        angles.push_back(acc);
    }
    // Linear fit of the unwrapped angle; slope in rad/us.
    const int n = static_cast<int>(ts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += ts[i];
        sy += angles[i];
        sxx += ts[i] * ts[i];
        sxy += ts[i] * angles[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return to_mhz(slope);
}

}  // namespace

double measured_z_rate(const DeviceParams& p, double delta_as_MHz, int dim) {
    DeviceParams q = p;
    q.delta_as_MHz = delta_as_MHz;
    if (dim <= 0) dim = 24;
    return z_rate_of(q, dim);
}

TuneupResult tuneup_detuning(const DeviceParams& p, int dim) {
    if (!(p.eps2_MHz > 0)) throw ContractViolation("tuneup_detuning: eps2 must be > 0");
    if (dim <= 0) dim = 24;
    if (p.xi_s == 0.0) return {0.0, std::abs(measured_z_rate(p, 0.0, dim))};

    const double stark = 4.0 * p.K_MHz * p.xi_s * p.xi_s;
    double lo = 0.0, hi = 2.0 * stark;
    double f_lo = measured_z_rate(p, lo, dim);
    double f_hi = measured_z_rate(p, hi, dim);
    if (f_lo * f_hi > 0.0) {
        throw FitError("tuneup_detuning: no sign change of the rotation rate in [0, " +
                       std::to_string(hi) + "] MHz");
    }
    // Bisection is plenty: the rate is nearly linear in the detuning.
    for (int it = 0; it < 60 && hi - lo > 1e-5; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = measured_z_rate(p, mid, dim);
        if (f_lo * f_mid <= 0.0) {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    TuneupResult res;
    res.delta_as_MHz = 0.5 * (lo + hi);
    res.residual_rate_MHz = std::abs(measured_z_rate(p, res.delta_as_MHz, dim));
    return res;
}

}  // namespace kerrcat
