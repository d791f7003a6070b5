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

#include "kerrcat/model.hpp"

#include <cmath>

namespace kerrcat {

double DeviceParams::alpha() const { return std::sqrt(eps2_MHz / K_MHz); }

Complex DeviceParams::g_cr() const {
    return g_cr_MHz * std::exp(kI * g_cr_phase_rad);
}

void DeviceParams::validate() const {
    if (!(K_MHz > 0)) throw ConfigError("K_MHz must be > 0");
    if (!(eps2_MHz >= 0)) throw ConfigError("eps2_MHz must be >= 0");
    if (!(T1_us > 0)) throw ConfigError("T1_us must be > 0");
    if (!(kappa_b_c_MHz >= 0)) throw ConfigError("kappa_b_c_MHz must be >= 0");
    if (!(kappa_b_l_MHz >= 0)) throw ConfigError("kappa_b_l_MHz must be >= 0");
    if (!(kappa_b_MHz() > 0)) throw ConfigError("kappa_b_c_MHz + kappa_b_l_MHz must be > 0");
    if (!(n_th >= 0 && n_th < 1)) throw ConfigError("n_th must lie in [0, 1)");
    if (!(kappa_phi_eff_Hz >= 0)) throw ConfigError("kappa_phi_eff_Hz must be >= 0");
    if (!(g_cr_MHz >= 0)) throw ConfigError("g_cr_MHz must be >= 0");
    if (!(eps_x_MHz >= 0)) throw ConfigError("eps_x_MHz must be >= 0");
}

NoiseConfig NoiseConfig::none() {
    NoiseConfig n;
    n.photon_loss = n.thermal = n.dephasing = n.cavity_loss = false;
    return n;
}

DeviceParams NoiseConfig::apply(const DeviceParams& p) const {
    DeviceParams q = p;
    if (T1_us) q.T1_us = *T1_us;
    if (n_th) q.n_th = *n_th;
    if (kappa_phi_eff_Hz) q.kappa_phi_eff_Hz = *kappa_phi_eff_Hz;
    q.validate();
    return q;
}

Matrix assemble(const std::vector<HamiltonianTerm>& terms, const SlotValues& v) {
    if (terms.empty()) throw InvalidDimensionError("assemble: empty term list");
    Matrix h = Matrix::Zero(terms.front().op.size(), terms.front().op.size());
    for (const auto& t : terms) {
        Complex c;
        switch (t.slot) {
            case Slot::Static: c = 1.0; break;
            case Slot::Squeezing: c = v.squeezing; break;
            case Slot::SqueezingConj: c = std::conj(v.squeezing); break;
            case Slot::Rabi: c = v.rabi; break;
            case Slot::RabiConj: c = std::conj(v.rabi); break;
            case Slot::Conversion: c = v.conversion; break;
            case Slot::ConversionConj: c = std::conj(v.conversion); break;
            case Slot::StarkSqueezing: c = v.stark_s; break;
            case Slot::StarkConversion: c = v.stark_cr; break;
        }
        if (c != 0.0) h += c * t.op.mat;
    }
    return h;
}

Operator h_cat(double K_MHz, double eps2_MHz, int dim) {
    const double alpha = std::sqrt(std::max(eps2_MHz, 0.0) / K_MHz);
    if (alpha * alpha + 5.0 * alpha >= static_cast<double>(dim)) {
        throw TruncationError("h_cat: dim too small for alpha = " + std::to_string(alpha));
    }
    const Matrix a = annihilation(dim).mat;
    const Matrix ad = a.adjoint();
    Matrix h = angular(-K_MHz) * (ad * ad * a * a) +
               angular(eps2_MHz) * (ad * ad + a * a);
    return Operator(std::move(h), {dim});
}

Operator h_effective(const DeviceParams& p, int dim) {
    const double alpha = p.alpha();
    if (alpha * alpha + 5.0 * alpha >= static_cast<double>(dim)) {
        throw TruncationError("h_effective: dim too small for alpha = " +
                              std::to_string(alpha));
    }
    const Matrix a = annihilation(dim).mat;
    const Matrix ad = a.adjoint();
    const Matrix n = ad * a;
    Matrix h = angular(p.delta_as_MHz) * n + angular(-p.K_MHz) * (ad * ad * a * a) +
               angular(p.eps2_MHz) * (ad * ad + a * a) +
               angular(-4.0 * p.K_MHz * p.xi_s * p.xi_s) * n;
    return Operator(std::move(h), {dim});
}

std::vector<HamiltonianTerm> h_full_two_mode(const DeviceParams& p,
                                             const std::vector<int>& dims) {
    if (dims.size() != 2) {
        throw InvalidDimensionError("h_full_two_mode: expects two mode dims");
    }
    const double alpha = p.alpha();
    if (alpha * alpha + 5.0 * alpha >= static_cast<double>(dims[0])) {
        throw TruncationError("h_full_two_mode: mode-a dim too small");
    }
    const Operator a1 = annihilation(dims[0]);
    const Operator b1 = annihilation(dims[1]);
    const Operator a = on_mode(a1, 0, dims);
    const Operator b = on_mode(b1, 1, dims);
    const Matrix ad = a.mat.adjoint();
    const Matrix bd = b.mat.adjoint();
    const Matrix na = ad * a.mat;
    const Matrix nb = bd * b.mat;

    std::vector<HamiltonianTerm> terms;
    Matrix h_static = angular(p.delta_as_MHz) * na +
                      angular(-p.K_MHz) * (ad * ad * a.mat * a.mat) +
                      angular(-p.chi_ab_MHz) * (na * nb);
    terms.push_back({Operator(std::move(h_static), dims), Slot::Static});
    terms.push_back({Operator(kTwoPi * (ad * ad), dims), Slot::Squeezing});
    terms.push_back({Operator(kTwoPi * (a.mat * a.mat), dims), Slot::SqueezingConj});
    terms.push_back({Operator(kTwoPi * ad, dims), Slot::Rabi});
    terms.push_back({Operator(kTwoPi * a.mat, dims), Slot::RabiConj});
    terms.push_back({Operator(kTwoPi * (ad * b.mat), dims), Slot::Conversion});
    terms.push_back({Operator(kTwoPi * (a.mat * bd), dims), Slot::ConversionConj});
    terms.push_back({Operator(angular(-4.0 * p.K_MHz * p.xi_s * p.xi_s) * na, dims),
                     Slot::StarkSqueezing});
    terms.push_back({Operator(angular(-4.0 * p.K_MHz * p.xi_cr * p.xi_cr) * na, dims),
                     Slot::StarkConversion});
    return terms;
}

std::vector<HamiltonianTerm> h_terms_single_mode(const DeviceParams& p, int dim) {
    const double alpha = p.alpha();
    if (alpha * alpha + 5.0 * alpha >= static_cast<double>(dim)) {
        throw TruncationError("h_terms_single_mode: dim too small");
    }
    const Matrix a = annihilation(dim).mat;
    const Matrix ad = a.adjoint();
    const Matrix n = ad * a;

    std::vector<HamiltonianTerm> terms;
    Matrix h_static = angular(p.delta_as_MHz) * n + angular(-p.K_MHz) * (ad * ad * a * a);
    terms.push_back({Operator(std::move(h_static), {dim}), Slot::Static});
    terms.push_back({Operator(kTwoPi * (ad * ad), {dim}), Slot::Squeezing});
    terms.push_back({Operator(kTwoPi * (a * a), {dim}), Slot::SqueezingConj});
    terms.push_back({Operator(kTwoPi * ad, {dim}), Slot::Rabi});
    terms.push_back({Operator(kTwoPi * a, {dim}), Slot::RabiConj});
    terms.push_back({Operator(angular(-4.0 * p.K_MHz * p.xi_s * p.xi_s) * n, {dim}),
                     Slot::StarkSqueezing});
    return terms;
}

Operator drive_term(Complex eps_x_MHz, int dim) {
    const Matrix a = annihilation(dim).mat;
    Matrix h = angular(eps_x_MHz) * a.adjoint() + angular(std::conj(eps_x_MHz)) * a;
    return Operator(std::move(h), {dim});
}

std::vector<double> classical_energy_surface(double K_MHz, double eps2_MHz,
                                             const std::vector<Complex>& grid) {
    std::vector<double> e;
    e.reserve(grid.size());
    for (Complex a : grid) {
        const double n = std::norm(a);
        e.push_back(-K_MHz * n * n + 2.0 * eps2_MHz * (a * a).real());
    }
    return e;
}

}  // namespace kerrcat
