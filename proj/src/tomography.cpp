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

#include "kerrcat/tomography.hpp"

#include <cmath>
#include <future>
#include <random>

#include "kerrcat/spectrum.hpp"

namespace kerrcat {

namespace {

constexpr std::array<Cardinal, 6> kCardinals = {Cardinal::PlusX,  Cardinal::MinusX,
                                                Cardinal::PlusY,  Cardinal::MinusY,
                                                Cardinal::PlusZ,  Cardinal::MinusZ};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

void ExpectationSet::set_uniform_error(double err) {
    I_err.fill(err);
    X_err.fill(err);
    Y_err.fill(err);
    Z_err.fill(err);
}

void fock_readout(const DensityMatrix& rho, double frame_phase, double& i_val,
                  double& x_val, double& y_val, double& z_val) {
    const double p0 = rho.mat(0, 0).real();
    const double p1 = rho.mat(1, 1).real();
    // Undo the cat-frame phase: rho' = e^{-i phi n} rho e^{i phi n}, so
    // rho'_{01} = e^{i phi} rho_{01}.
    const Complex r01 = std::exp(kI * frame_phase) * rho.mat(0, 1);
    i_val = p0 + p1;
    z_val = p0 - p1;
    x_val = 2.0 * r01.real();
    y_val = -2.0 * r01.imag();
}

ExpectationSet measure_cardinals(const std::function<void(PulseSchedule&)>& operation,
                                 const DeviceParams& p, const NoiseConfig& noise,
                                 const TomoOptions& opts) {
    ExpectationSet es;
    auto run_one = [&](int idx) {
        InitOptions init_opts;
        init_opts.thermal_error = opts.thermal_init;
        InitResult init = cardinal_init(kCardinals[idx], p, opts.dim, init_opts);
        PulseSchedule sched = init.schedule;
        operation(sched);
        sched.add_map_ramp(false);

        EvolveOptions eopts;
        eopts.rtol = opts.rtol;
        eopts.atol = opts.atol;
        eopts.keep_states = true;
        auto channels = qubit_channels(p, noise, opts.dim);
        Trajectory traj =
            evolve(sched, channels, init.rho0, {sched.total_time()}, eopts);
        std::array<double, 4> out{};
        fock_readout(traj.states.back(), sched.frame_phase(), out[0], out[1], out[2],
                     out[3]);
        return out;
    };

    std::array<std::future<std::array<double, 4>>, 6> futs;
    for (int i = 0; i < 6; ++i) {
        futs[i] = std::async(std::launch::async, run_one, i);
    }
    for (int i = 0; i < 6; ++i) {
        auto v = futs[i].get();
        es.I[i] = v[0];
        es.X[i] = v[1];
        es.Y[i] = v[2];
        es.Z[i] = v[3];
    }
    return es;
}

namespace {

using M2 = Eigen::Matrix2cd;

std::array<M2, 4> pauli_set(const ExpectationSet& es) {
    M2 sx, sy, sz, id;
    sx << 0, 1, 1, 0;
    sy << 0, Complex(0, -1), Complex(0, 1), 0;
    sz << 1, 0, 0, -1;
    id.setIdentity();

    std::array<M2, 6> rho;
    for (int i = 0; i < 6; ++i) {
        rho[i] = 0.5 * (es.I[i] * id + es.X[i] * sx + es.Y[i] * sy + es.Z[i] * sz);
    }
    std::array<M2, 4> pauli;
    pauli[0] = (rho[0] + rho[1] + rho[2] + rho[3] + rho[4] + rho[5]) / 3.0;
    pauli[1] = rho[0] - rho[1];  // +X - -X
    pauli[2] = rho[2] - rho[3];
    pauli[3] = rho[4] - rho[5];
    return pauli;
}

}  // namespace

PTM ptm_from_expectations(const ExpectationSet& es, const ExpectationSet& reference) {
    const auto fin = pauli_set(es);
    const auto init = pauli_set(reference);
    PTM ptm;
    for (int j = 0; j < 4; ++j) {
        for (int k = 0; k < 4; ++k) {
            ptm.r(j, k) = 0.5 * (init[j] * fin[k]).trace().real();
        }
    }
    return ptm;
}

double ptm_fidelity(const PTM& r_exp, const PTM& r_ideal) {
    return ((r_ideal.r.transpose() * r_exp.r).trace() * 0.5 + 1.0) / 3.0;
}

ExpectationSet ideal_expectations(const Eigen::Matrix2cd& u) {
    ExpectationSet es;
    const double s = 1.0 / std::sqrt(2.0);
    std::array<Eigen::Vector2cd, 6> prep;
    prep[0] << s, s;                 // +X
    prep[1] << s, -s;                // -X
    prep[2] << s, Complex(0, 1) * s; // +Y
    prep[3] << s, Complex(0, -1) * s;
    prep[4] << 1, 0;                 // +Z
    prep[5] << 0, 1;
    for (int i = 0; i < 6; ++i) {
        Eigen::Vector2cd v = u * prep[i];
        const Complex r01 = v(0) * std::conj(v(1));
        es.I[i] = 1.0;
        es.X[i] = 2.0 * r01.real();
        es.Y[i] = -2.0 * r01.imag();
        es.Z[i] = std::norm(v(0)) - std::norm(v(1));
    }
    return es;
}

PTM ideal_ptm(const Eigen::Matrix2cd& u) {
    const ExpectationSet identity_set = ideal_expectations(M2::Identity());
    return ptm_from_expectations(ideal_expectations(u), identity_set);
}

Eigen::Matrix2cd rot_x(double theta) {
    M2 u;
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    u << c, Complex(0, -s), Complex(0, -s), c;
    return u;
}

Eigen::Matrix2cd rot_z(double theta) {
    M2 u = M2::Zero();
    u(0, 0) = std::exp(Complex(0, -0.5 * theta));
    u(1, 1) = std::exp(Complex(0, 0.5 * theta));
    return u;
}

double bootstrap_fidelity_error(const ExpectationSet& es, const ExpectationSet& reference,
                                const PTM& r_ideal, int n_resamples, std::uint64_t seed) {
    std::mt19937_64 rng(splitmix64(seed));
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto resample = [&](const ExpectationSet& base) {
        ExpectationSet r = base;
        for (int i = 0; i < 6; ++i) {
            r.I[i] += base.I_err[i] * gauss(rng);
            r.X[i] += base.X_err[i] * gauss(rng);
            r.Y[i] += base.Y_err[i] * gauss(rng);
            r.Z[i] += base.Z_err[i] * gauss(rng);
        }
        return r;
    };

    double sum = 0.0, sum2 = 0.0;
    for (int k = 0; k < n_resamples; ++k) {
        const ExpectationSet es_k = resample(es);
        const ExpectationSet ref_k = resample(reference);
        const double f = ptm_fidelity(ptm_from_expectations(es_k, ref_k), r_ideal);
        sum += f;
        sum2 += f * f;
    }
    const double mean = sum / n_resamples;
    const double var = std::max(0.0, sum2 / n_resamples - mean * mean);
    return std::sqrt(var);
}

// --- in-manifold tomography ----------------------------------------------

namespace {

PureState manifold_cardinal(const ManifoldBasis& basis, int idx) {
    const double s = 1.0 / std::sqrt(2.0);
    Complex cp = 0, cm = 0;
    switch (idx) {
        case 0: cp = s; cm = s; break;
        case 1: cp = s; cm = -s; break;
        case 2: cp = s; cm = Complex(0, 1) * s; break;
        case 3: cp = s; cm = Complex(0, -1) * s; break;
        case 4: cp = 1; break;
        case 5: cm = 1; break;
    }
    Vector v = cp * basis.c_plus.amp + cm * basis.c_minus.amp;
    v.normalize();
    return PureState(std::move(v), basis.c_plus.dims);
}

}  // namespace

ManifoldTomographyResult manifold_process_tomography(
    const std::function<void(PulseSchedule&)>& operation, const Eigen::Matrix2cd& ideal,
    const DeviceParams& p, int dim) {
    const ManifoldBasis basis = manifold_basis(h_effective(p, dim), p.alpha());

    ExpectationSet es;
    for (int i = 0; i < 6; ++i) {
        PulseSchedule sched(p);
        operation(sched);
        const PureState psi0 = manifold_cardinal(basis, i);
        PureTrajectory traj = evolve_pure(sched, psi0, {sched.total_time()});
        const Vector& v = traj.states.back().amp;
        // Project onto the frame-rotated manifold basis.
        const double phi = sched.frame_phase();
        Vector bp = basis.c_plus.amp, bm = basis.c_minus.amp;
        for (int n = 0; n < dim; ++n) {
            const Complex ph = std::exp(kI * (phi * n));
            bp(n) *= ph;
            bm(n) *= ph;
        }
        const Complex cp = bp.dot(v);
        const Complex cm = bm.dot(v);
        const Complex r01 = cp * std::conj(cm);
        es.I[i] = std::norm(cp) + std::norm(cm);
        es.X[i] = 2.0 * r01.real();
        es.Y[i] = -2.0 * r01.imag();
        es.Z[i] = std::norm(cp) - std::norm(cm);
    }

    ManifoldTomographyResult res;
    res.ptm = ptm_from_expectations(es, ideal_expectations(Eigen::Matrix2cd::Identity()));
    res.fidelity = ptm_fidelity(res.ptm, ideal_ptm(ideal));
    return res;
}

// --- random sequence benchmark --------------------------------------------

RbResult random_sequence_benchmark(int n_max, int n_samples, const DeviceParams& p,
                                   const NoiseConfig& noise, std::uint64_t seed,
                                   const RbOptions& opts) {
    const int dim = opts.dim;
    std::vector<int> lengths = opts.sequence_lengths;
    if (lengths.empty()) {
        for (int n = 1; n <= n_max;) {
            lengths.push_back(n);
            n = std::max(n + 1, static_cast<int>(std::lround(n * 1.45)));
        }
    }

    const GateCalibration cal =
        calibrate_x_gate(p, dim, {0.5 * std::numbers::pi, std::numbers::pi});
    const ManifoldBasis basis = manifold_basis(h_effective(p, dim), p.alpha());
    const auto channels = qubit_channels(p, noise, dim);
    const bool noiseless = channels.empty();

    auto run_sequence = [&](int n_gates, std::uint64_t task_seed) {
        std::mt19937_64 rng(task_seed);
        std::uniform_int_distribution<int> pick(0, 1);
        PulseSchedule sched(p);
        int quarter_turns = 0;  // rotation angle in units of pi/2
        for (int g = 0; g < n_gates; ++g) {
            if (pick(rng) == 0) {
                sched.add_x_gate(0.5 * std::numbers::pi, cal);
                quarter_turns += 1;
            } else {
                sched.add_x_gate(std::numbers::pi, cal);
                quarter_turns += 2;
            }
        }
        // Exactly composed undo gate: complement to a full turn.
        const int undo = (4 - quarter_turns % 4) % 4;
        if (undo == 1) sched.add_x_gate(0.5 * std::numbers::pi, cal);
        if (undo == 2) sched.add_x_gate(std::numbers::pi, cal);
        if (undo == 3) sched.add_x_gate(-0.5 * std::numbers::pi, cal);

        if (noiseless) {
            PureTrajectory traj =
                evolve_pure(sched, basis.c_plus, {sched.total_time()});
            const Vector& v = traj.states.back().amp;
            return std::norm(basis.c_plus.amp.dot(v)) -
                   std::norm(basis.c_minus.amp.dot(v));
        }
        EvolveOptions eopts;
        eopts.keep_states = true;
        Trajectory traj = evolve(sched, channels, DensityMatrix::from_pure(basis.c_plus),
                                 {sched.total_time()}, eopts);
        const Matrix& rho = traj.states.back().mat;
        return (basis.sigma_z.mat.transpose().cwiseProduct(rho)).sum().real();
    };

    RbResult res;
    res.lengths = lengths;
    std::vector<std::future<double>> futs;
    std::vector<double> z_of_task;
    int task = 0;
    for (int n : lengths) {
        for (int s = 0; s < n_samples; ++s) {
            const std::uint64_t task_seed = splitmix64(seed + 0x1000 * task);
            futs.push_back(std::async(std::launch::async, run_sequence, n, task_seed));
            ++task;
            // Two cores; don't flood the scheduler with giant futures.
            if (futs.size() >= 4) {
                for (auto& f : futs) z_of_task.push_back(f.get());
                futs.clear();
            }
        }
    }
    for (auto& f : futs) z_of_task.push_back(f.get());

    std::vector<double> ns;
    int idx = 0;
    for (int n : lengths) {
        double acc = 0.0;
        for (int s = 0; s < n_samples; ++s) acc += z_of_task[idx++];
        res.z_mean.push_back(acc / n_samples);
        ns.push_back(static_cast<double>(n));
    }

    res.fit = exp_fit(ns, res.z_mean);
    res.tau_n = res.fit.tau;
    res.per_gate_error = 0.5 * (1.0 - std::exp(-1.0 / res.tau_n));
    return res;
}

}  // namespace kerrcat
