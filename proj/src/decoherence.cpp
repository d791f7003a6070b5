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

#include "kerrcat/decoherence.hpp"

#include <algorithm>
#include <cmath>

#include "kerrcat/spectrum.hpp"

namespace kerrcat {

double bitflip_time_analytic(double nbar, double T1_us, double n_th) {
    if (!(nbar > 0) || !(T1_us > 0)) {
        throw ContractViolation("bitflip_time_analytic: nbar and T1 must be > 0");
    }
    return T1_us / (2.0 * nbar * (1.0 + 2.0 * n_th));
}

LeakagePopulations leakage_population(double t_us, double T1_us, double n_th) {
    if (t_us < 0) throw ContractViolation("leakage_population: t must be >= 0");
    const double kappa = 1.0 / T1_us;
    LeakagePopulations p;
    p.p_excited =
        n_th / (1.0 + 2.0 * n_th) * (1.0 - std::exp(-kappa * (1.0 + 2.0 * n_th) * t_us));
    p.p_cat = 1.0 - p.p_excited;
    return p;
}

double leakage_equilibration_time(double T1_us, double n_th) {
    return T1_us / (1.0 + 2.0 * n_th);
}

namespace {

// Windowed exponential fit: fit over [0, 4 tau_est], iterate once.
void windowed_fit(CoherenceSeries& s) {
    try {
        ExpFit first = exp_fit(s.t_us, s.value);
        double window = 4.0 * first.tau;
        std::vector<double> t2, y2;
        for (std::size_t i = 0; i < s.t_us.size(); ++i) {
            if (s.t_us[i] <= window) {
                t2.push_back(s.t_us[i]);
                y2.push_back(s.value[i]);
            }
        }
        s.fit = (t2.size() >= 8) ? exp_fit(t2, y2) : first;
        s.fit_ok = true;
    } catch (const FitError& e) {
        s.fit_ok = false;
        s.fit_note = e.what();
    }
}

}  // namespace

CoherenceCurves coherence_sweep(BlochAxis axis, const DeviceParams& p,
                                const NoiseConfig& noise, double t_max_us,
                                const CoherenceOptions& opts) {
    const int dim = opts.dim;
    const Operator h = h_cat(p.K_MHz, p.eps2_MHz, dim);
    const ManifoldBasis basis = manifold_basis(h, p.alpha());
    const auto channels = qubit_channels(p, noise, dim);

    std::vector<double> t_samples;
    for (int i = 0; i < opts.n_points; ++i) {
        t_samples.push_back(t_max_us * i / (opts.n_points - 1));
    }

    struct Prep {
        std::string label;
        PureState psi;
        const Operator* obs;
    };
    std::vector<Prep> preps;
    const double pi = std::numbers::pi;
    switch (axis) {
        case BlochAxis::X:
            preps.push_back({"plusX", basis.equator_state(0.0), &basis.sigma_x});
            preps.push_back({"minusX", basis.equator_state(pi), &basis.sigma_x});
            break;
        case BlochAxis::Y:
            preps.push_back({"plusY", basis.equator_state(0.5 * pi), &basis.sigma_y});
            preps.push_back({"minusY", basis.equator_state(-0.5 * pi), &basis.sigma_y});
            break;
        case BlochAxis::Z:
            preps.push_back({"plusZ", basis.c_plus, &basis.sigma_z});
            preps.push_back({"minusZ", basis.c_minus, &basis.sigma_z});
            break;
    }

    CoherenceCurves curves;
    CoherenceSeries leak;
    leak.label = "leakage";
    leak.t_us = t_samples;
    leak.value.assign(t_samples.size(), 0.0);

    for (auto& prep : preps) {
        ConstOptions copts;
        copts.keep_states = false;
        copts.observables = {*prep.obs, basis.projector};
        copts.positivity_check_stride = opts.positivity_check_stride;
        Trajectory traj = evolve_const(h, channels, DensityMatrix::from_pure(prep.psi),
                                       t_samples, copts);
        CoherenceSeries s;
        s.label = prep.label;
        s.t_us = traj.times;
        for (Complex v : traj.expectations[0]) s.value.push_back(v.real());
        windowed_fit(s);
        curves.series.push_back(std::move(s));
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            leak.value[i] += 0.5 * (1.0 - traj.expectations[1][i].real());
        }
    }

    windowed_fit(leak);
    curves.leakage = std::move(leak);
    return curves;
}

}  // namespace kerrcat
