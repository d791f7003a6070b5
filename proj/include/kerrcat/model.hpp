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

#include <optional>
#include <string>
#include <vector>

#include "kerrcat/hilbert.hpp"

namespace kerrcat {

/// Measured device constants. User-facing values are nu = omega/2pi in
/// MHz and times in us; builders convert to angular rad/us internally.
struct DeviceParams {
    double K_MHz = 6.7;               // Kerr nonlinearity
    double eps2_MHz = 17.75;          // squeezing drive amplitude
    double eps_x_MHz = 0.74;          // Rabi drive amplitude
    double delta_as_MHz = 2.2;        // detuning compensating Stark shifts
    double xi_s = 0.29;               // effective squeezing pump strength
    double xi_cr = 0.15;              // effective conversion pump strength
    double g3_MHz = 20.0;             // third-order nonlinearity
    double chi_ab_MHz = 0.2;          // cross-Kerr
    double g_cr_MHz = 1.7;            // conversion coupling magnitude
    double g_cr_phase_rad = -1.5707963267948966;  // i g(a b^dag - a^dag b)
    double T1_us = 15.5;              // single-photon decay time
    double kappa_b_c_MHz = 1.4;       // cavity linewidth, output coupling
    double kappa_b_l_MHz = 0.5;       // cavity linewidth, other losses
    double n_th = 0.04;               // thermal occupation
    double kappa_phi_eff_Hz = 0.0;    // effective white dephasing rate

    // Derived quantities are recomputed, never stored.
    double nbar() const { return eps2_MHz / K_MHz; }
    double alpha() const;
    double kappa_a_per_us() const { return 1.0 / T1_us; }
    double kappa_b_MHz() const { return kappa_b_c_MHz + kappa_b_l_MHz; }
    Complex g_cr() const;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Enable flags and overrides for the dissipation channels.
struct NoiseConfig {
    bool photon_loss = true;   // kappa_a (1 + n_th) D[a]
    bool thermal = true;       // kappa_a n_th D[a^dag]
    bool dephasing = true;     // kappa_phi_eff D[a^dag a]
    bool cavity_loss = true;   // kappa_b D[b]
    std::optional<double> T1_us;
    std::optional<double> n_th;
    std::optional<double> kappa_phi_eff_Hz;

    static NoiseConfig none();
    DeviceParams apply(const DeviceParams& p) const;
};

/// Which time-dependent coefficient scales a Hamiltonian term. Slot
/// coefficients are plain envelope values in MHz (complex for drives,
/// dimensionless in [0,1] for the quadratic Stark factors); the term
/// operators carry the 2pi so the assembled matrix is in rad/us.
enum class Slot {
    Static,
    Squeezing,       // eps2(t) a^dag^2, coefficient in MHz
    SqueezingConj,   // eps2*(t) a^2
    Rabi,            // eps_x(t) a^dag
    RabiConj,        // eps_x*(t) a
    Conversion,      // g_cr(t) a^dag b
    ConversionConj,  // g_cr*(t) a b^dag
    StarkSqueezing,  // -4K|xi_s|^2 n_a, scaled by |eps2(t)/eps2|^2
    StarkConversion, // -4K|xi_cr|^2 n_a, scaled by |g_cr(t)/g_cr|^2
};

struct HamiltonianTerm {
    Operator op;
    Slot slot = Slot::Static;
};

/// Instantaneous values of the envelope slots.
struct SlotValues {
    Complex squeezing{};   // MHz
    Complex rabi{};        // MHz
    Complex conversion{};  // MHz
    double stark_s = 0.0;  // dimensionless
    double stark_cr = 0.0;
};

/// Sum the term list at the given slot values (rad/us).
Matrix assemble(const std::vector<HamiltonianTerm>& terms, const SlotValues& v);

/// -K a^dag^2 a^2 + eps2 (a^dag^2 + a^2), angular units.
Operator h_cat(double K_MHz, double eps2_MHz, int dim);

/// Delta_as n - K a^dag^2 a^2 + eps2 a^dag^2 + eps2* a^2 - 4K|xi_s|^2 n.
Operator h_effective(const DeviceParams& p, int dim);

/// All terms of the two-mode Hamiltonian, tagged with envelope slots.
std::vector<HamiltonianTerm> h_full_two_mode(const DeviceParams& p,
                                             const std::vector<int>& dims);

/// Single-mode term list (no cavity): detuning/Kerr static part plus
/// squeezing, Rabi, and squeezing-Stark slots.
std::vector<HamiltonianTerm> h_terms_single_mode(const DeviceParams& p, int dim);

/// eps_x a^dag + eps_x* a, angular units.
Operator drive_term(Complex eps_x_MHz, int dim);

/// <a|H_cat|a> per coherent-state label: -K|a|^4 + 2 eps2 Re(a^2), in MHz.
std::vector<double> classical_energy_surface(double K_MHz, double eps2_MHz,
                                             const std::vector<Complex>& grid);

// --- config file I/O ---------------------------------------------------

/// Parse a JSON (.json) or flat TOML (.toml) config. Missing keys take
/// the defaults above; unknown keys are rejected.
DeviceParams load_params(const std::string& path);

struct ConfigReport {
    DeviceParams params;
    std::vector<std::string> overridden_keys;
    std::vector<std::string> defaulted_keys;
};

/// load_params plus a report of which keys were overridden vs defaulted.
ConfigReport validate_config(const std::string& path);

/// Apply one "key=value" override in place; throws ConfigError on
/// unknown key, bad number, or invariant violation.
void apply_override(DeviceParams& p, const std::string& key_value);

std::string params_to_json(const DeviceParams& p);

}  // namespace kerrcat
