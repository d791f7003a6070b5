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

#include <map>
#include <string>

#include "kerrcat/dynamics.hpp"
#include "kerrcat/model.hpp"

namespace kerrcat {

/// Time-dependent drive envelope, evaluated in segment-local time.
struct Envelope {
    enum class Kind { Zero, Constant, TanhRamp, Gaussian, RectWindow };
    Kind kind = Kind::Zero;
    Complex amplitude{};  // MHz peak
    double duration = 0.0;
    double ramp = 0.0;    // tanh ramp time
    bool rising = true;
    double sigma = 0.0;   // gaussian width; center = duration/2
    double w0 = 0.0, w1 = 0.0, edge = 0.0;  // rect window with linear edges
    bool invert = false;                    // amp * (1 - window)

    Complex value(double t_local) const;

    static Envelope zero();
    static Envelope constant(Complex amp);
    static Envelope tanh_ramp(Complex amp, double t_ramp, bool rising);
    /// Baseline-subtracted Gaussian: peak amp at duration/2, exactly zero
    /// at the segment edges (truncation at +-2 sigma for sigma = T/4).
    static Envelope gaussian(Complex amp, double duration, double sigma);
    static Envelope rect(Complex amp, double w0, double w1, double edge, bool invert,
                         double duration);
};

/// The mapping ramp of the squeezing drive (tanh profile, affine-rescaled
/// so the endpoints are exactly 0 and eps2).
Envelope map_ramp(bool on, double eps2_MHz, double t_ramp_us = 0.32);

struct Segment {
    double t0 = 0.0, t1 = 0.0;
    Envelope squeezing, rabi, conversion;
    std::string label;
};

struct ZGateConfig {
    bool experimental = false;
    /// Squeezing-off window; defaults to pi/2K for the ideal mode and
    /// 38 ns for the experimental mode when <= 0.
    double T_Z_us = 0.0;
    double edge_us = 0.004;  // linear rise/fall of the experimental step
};

/// Numerically calibrated Gaussian X-pulse amplitudes (amplitude-Rabi
/// sweep against the in-manifold rotation angle).
struct GateCalibration {
    double duration_us = 0.024;
    double sigma_us = 0.006;
    std::map<long, double> amp_MHz;  // keyed by round(theta * 1e9)
    std::vector<std::string> warnings;

    /// Exact calibrated amplitude if present, else linear scaling from
    /// the nearest calibrated angle.
    double amplitude(double theta) const;
};

GateCalibration calibrate_x_gate(const DeviceParams& p, int dim,
                                 const std::vector<double>& thetas,
                                 double duration_us = 0.024);

/// Drive timeline: ordered non-overlapping segments tiling [0, T] plus
/// the accumulated cat-frame phase from Z gates. Builders stamp the
/// current frame phase into the envelopes they append.
class PulseSchedule {
  public:
    explicit PulseSchedule(const DeviceParams& p) : params_(p) {}

    void add_map_ramp(bool on, double t_ramp_us = 0.32);
    /// Stabilization on, no other drive.
    void add_hold(double duration_us);
    /// Everything off (bare Fock qubit idling).
    void add_off_idle(double duration_us);
    /// Rabi drive with a tanh rise, then constant hold.
    void add_rabi_drive(double hold_us, double arg_eps_x, double rise_us = 0.08);
    void add_x_gate(double theta, const GateCalibration& cal);
    void add_z_gate(const ZGateConfig& cfg = {});
    void add_segment(Segment seg, double duration_us);

    double total_time() const;
    SlotValues slot_values(double t) const;
    std::vector<double> breakpoints() const;
    double frame_phase() const { return frame_phase_; }
    const DeviceParams& params() const { return params_; }
    const std::vector<Segment>& segments() const { return segments_; }
    std::string to_json() const;

  private:
    DeviceParams params_;
    std::vector<Segment> segments_;
    double frame_phase_ = 0.0;
};

/// Frame-phase increment of one Z gate, -pi/2 - 2 pi Delta_as T_Z.
double z_gate_phase(const DeviceParams& p, double T_Z_us);

/// Fig. 2 style sequence: map ramp on, Rabi drive with 80 ns rise held
/// for dt, map ramp off.
PulseSchedule rabi_sequence(double dt_us, double arg_eps_x, const DeviceParams& p);

enum class Cardinal { PlusX, MinusX, PlusY, MinusY, PlusZ, MinusZ };

const char* cardinal_name(Cardinal c);

struct InitOptions {
    bool thermal_error = false;         // mix n_th into the Fock preparation
    bool manifold_gates = false;        // |0> -> C+ then in-manifold X gates
    const GateCalibration* cal = nullptr;  // required for manifold_gates Y/Z
};

struct InitResult {
    DensityMatrix rho0;     // Fock-space state before the schedule runs
    PulseSchedule schedule; // mapping ramp (plus init gates if requested)
};

/// Fock-qubit preparation of a cardinal point followed by the mapping
/// ramp onto the cat qubit.
InitResult cardinal_init(Cardinal c, const DeviceParams& p, int dim,
                         const InitOptions& opts = {});

// --- running a schedule -------------------------------------------------

/// Master-equation evolution of a schedule: builds the single- or
/// two-mode term list at the state's dimensions and integrates with
/// envelope callables sampled inside the integrator stages.
Trajectory evolve(const PulseSchedule& schedule,
                  const std::vector<CollapseChannel>& channels,
                  const DensityMatrix& rho0, const std::vector<double>& t_samples,
                  const EvolveOptions& opts = {});

/// Dissipation-free pure-state evolution of a schedule.
PureTrajectory evolve_pure(const PulseSchedule& schedule, const PureState& psi0,
                           const std::vector<double>& t_samples);

}  // namespace kerrcat
