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

#include "kerrcat/fitting.hpp"
#include "kerrcat/schedule.hpp"

namespace kerrcat {

/// Bit-flip time T1 / (2 nbar (1 + 2 n_th)), in us.
double bitflip_time_analytic(double nbar, double T1_us, double n_th);

struct LeakagePopulations {
    double p_excited = 0.0;
    double p_cat = 0.0;
};

/// Rate-equation populations of the excited pair vs the cat manifold:
/// p_e(t) = n_th/(1+2n_th) (1 - e^{-kappa_a (1+2n_th) t}).
LeakagePopulations leakage_population(double t_us, double T1_us, double n_th);

/// Equilibration time constant 1/(kappa_a (1 + 2 n_th)), in us.
double leakage_equilibration_time(double T1_us, double n_th);

enum class BlochAxis { X, Y, Z };

struct CoherenceSeries {
    std::string label;
    std::vector<double> t_us;
    std::vector<double> value;
    ExpFit fit;           // windowed single-exponential fit
    bool fit_ok = false;
    std::string fit_note;
};

struct CoherenceCurves {
    std::vector<CoherenceSeries> series;   // the +axis and -axis states
    CoherenceSeries leakage;               // 1 - manifold population (rise)
};

struct CoherenceOptions {
    int dim = 40;
    int n_points = 120;
    /// Extra sampling density for short-lived axes; points are uniform.
    int positivity_check_stride = 0;
};

/// Evolve the two cardinal states of one Bloch axis under the ideal cat
/// Hamiltonian with the configured loss/gain/dephasing channels; record
/// cat-basis expectations and leakage, and fit single exponentials over
/// [0, 4 tau] (one tau iteration).
CoherenceCurves coherence_sweep(BlochAxis axis, const DeviceParams& p,
                                const NoiseConfig& noise, double t_max_us,
                                const CoherenceOptions& opts = {});

}  // namespace kerrcat
