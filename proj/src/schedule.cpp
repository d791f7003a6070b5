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

#include "kerrcat/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "kerrcat/spectrum.hpp"

namespace kerrcat {

namespace {
double tanh_shape(double t, double t_ramp) {
    // 1/2 (1 + tanh(4 (t - T/2)/(T/2))), affine-rescaled to hit 0 and 1
    // exactly at the segment edges.
    auto f = [t_ramp](double x) {
        return 0.5 * (1.0 + std::tanh(4.0 * (x - 0.5 * t_ramp) / (0.5 * t_ramp)));
    };
    const double f0 = f(0.0), f1 = f(t_ramp);
    return (f(t) - f0) / (f1 - f0);
}
}  // namespace

Complex Envelope::value(double t) const {
    if (kind == Kind::Zero) return 0.0;
    if (t < -1e-12 || (duration > 0 && t > duration + 1e-12)) return 0.0;
    switch (kind) {
        case Kind::Zero:
            return 0.0;
        case Kind::Constant:
            return amplitude;
        case Kind::TanhRamp: {
            const double s = tanh_shape(std::clamp(t, 0.0, ramp), ramp);
            return amplitude * (rising ? s : 1.0 - s);
        }
        case Kind::Gaussian: {
            const double c = 0.5 * duration;
            const double g = std::exp(-0.5 * (t - c) * (t - c) / (sigma * sigma));
            const double g_edge = std::exp(-0.125 * duration * duration / (sigma * sigma));
            return amplitude * (g - g_edge) / (1.0 - g_edge);
        }
        case Kind::RectWindow: {
            double w = 0.0;
            if (t >= w0 && t <= w1) {
                if (edge > 0.0 && t < w0 + edge) {
                    w = (t - w0) / edge;
                } else if (edge > 0.0 && t > w1 - edge) {
                    w = (w1 - t) / edge;
                } else {
                    w = 1.0;
                }
            }
            return amplitude * (invert ? 1.0 - w : w);
        }
    }
    return 0.0;
}

Envelope Envelope::zero() { return Envelope{}; }

Envelope Envelope::constant(Complex amp) {
    Envelope e;
    e.kind = Kind::Constant;
    e.amplitude = amp;
    return e;
}

Envelope Envelope::tanh_ramp(Complex amp, double t_ramp, bool rising_edge) {
    if (!(t_ramp > 0)) throw ContractViolation("tanh_ramp: ramp time must be > 0");
    Envelope e;
    e.kind = Kind::TanhRamp;
    e.amplitude = amp;
    e.ramp = t_ramp;
    e.duration = t_ramp;
    e.rising = rising_edge;
    return e;
}

Envelope Envelope::gaussian(Complex amp, double duration, double sigma) {
    if (!(duration > 0) || !(sigma > 0)) {
        throw ContractViolation("gaussian: duration and sigma must be > 0");
    }
    Envelope e;
    e.kind = Kind::Gaussian;
    e.amplitude = amp;
    e.duration = duration;
    e.sigma = sigma;
    return e;
}

Envelope Envelope::rect(Complex amp, double w0, double w1, double edge, bool invert,
                        double duration) {
    Envelope e;
    e.kind = Kind::RectWindow;
    e.amplitude = amp;
    e.w0 = w0;
    e.w1 = w1;
    e.edge = edge;
    e.invert = invert;
    e.duration = duration;
    return e;
}

Envelope map_ramp(bool on, double eps2_MHz, double t_ramp_us) {
    return Envelope::tanh_ramp(eps2_MHz, t_ramp_us, on);
}

double GateCalibration::amplitude(double theta) const {
    if (amp_MHz.empty()) throw ContractViolation("GateCalibration: empty");
    const long key = std::lround(theta * 1e9);
    auto it = amp_MHz.find(key);
    if (it != amp_MHz.end()) return it->second;
    // Linear scaling from the nearest calibrated angle.
    auto best = amp_MHz.begin();
    for (auto jt = amp_MHz.begin(); jt != amp_MHz.end(); ++jt) {
        if (std::abs(jt->first - key) < std::abs(best->first - key)) best = jt;
    }
    const double theta_cal = static_cast<double>(best->first) * 1e-9;
    if (theta_cal == 0.0) throw ContractViolation("GateCalibration: zero reference angle");
    return best->second * theta / theta_cal;
}

void PulseSchedule::add_segment(Segment seg, double duration_us) {
    if (!(duration_us > 0)) throw ContractViolation("segment duration must be > 0");
    seg.t0 = total_time();
    seg.t1 = seg.t0 + duration_us;
    segments_.push_back(std::move(seg));
}

double PulseSchedule::total_time() const {
    return segments_.empty() ? 0.0 : segments_.back().t1;
}

void PulseSchedule::add_map_ramp(bool on, double t_ramp_us) {
    Segment s;
    const Complex amp = params_.eps2_MHz * std::exp(2.0 * kI * frame_phase_);
    s.squeezing = Envelope::tanh_ramp(amp, t_ramp_us, on);
    s.label = on ? "map_ramp_on" : "map_ramp_off";
    add_segment(std::move(s), t_ramp_us);
}

void PulseSchedule::add_hold(double duration_us) {
    Segment s;
    s.squeezing = Envelope::constant(params_.eps2_MHz * std::exp(2.0 * kI * frame_phase_));
    s.label = "hold";
    add_segment(std::move(s), duration_us);
}

void PulseSchedule::add_off_idle(double duration_us) {
    Segment s;
    s.label = "off_idle";
    add_segment(std::move(s), duration_us);
}

void PulseSchedule::add_rabi_drive(double hold_us, double arg_eps_x, double rise_us) {
    const Complex sq = params_.eps2_MHz * std::exp(2.0 * kI * frame_phase_);
    const Complex rx = params_.eps_x_MHz * std::exp(kI * (arg_eps_x + frame_phase_));
    Segment rise;
    rise.squeezing = Envelope::constant(sq);
    rise.rabi = Envelope::tanh_ramp(rx, rise_us, true);
    rise.label = "rabi_rise";
    add_segment(std::move(rise), rise_us);
    if (hold_us > 0) {
        Segment hold;
        hold.squeezing = Envelope::constant(sq);
        hold.rabi = Envelope::constant(rx);
        hold.label = "rabi_hold";
        add_segment(std::move(hold), hold_us);
    }
}

void PulseSchedule::add_x_gate(double theta, const GateCalibration& cal) {
    Segment s;
    s.squeezing = Envelope::constant(params_.eps2_MHz * std::exp(2.0 * kI * frame_phase_));
    if (theta != 0.0) {
        const double amp = cal.amplitude(std::abs(theta));
        const double phase = (theta > 0 ? 0.0 : std::numbers::pi) + frame_phase_;
        s.rabi =
            Envelope::gaussian(amp * std::exp(kI * phase), cal.duration_us, cal.sigma_us);
    }
    s.label = "x_gate";
    add_segment(std::move(s), cal.duration_us);
}

double z_gate_phase(const DeviceParams& p, double T_Z_us) {
    return -0.5 * std::numbers::pi - angular(p.delta_as_MHz) * T_Z_us;
}

void PulseSchedule::add_z_gate(const ZGateConfig& cfg) {
    double T_Z = cfg.T_Z_us;
    if (T_Z <= 0) {
        T_Z = cfg.experimental ? 0.038
                               : std::numbers::pi / (2.0 * angular(params_.K_MHz));
    }
    if (!cfg.experimental) {
        Segment s;
        s.label = "z_gate";
        add_segment(std::move(s), T_Z);
        frame_phase_ += z_gate_phase(params_, T_Z);
        return;
    }
    // Falling edge plus off window at the old squeezing phase, then the
    // rising edge at the boosted phase.
    const double e = std::min(cfg.edge_us, 0.5 * T_Z);
    const Complex old_amp = params_.eps2_MHz * std::exp(2.0 * kI * frame_phase_);
    Segment fall;
    fall.squeezing = Envelope::rect(old_amp, 0.0, T_Z + e, e, true, T_Z - e);
    fall.label = "z_gate_fall";
    add_segment(std::move(fall), T_Z - e);
    frame_phase_ += z_gate_phase(params_, T_Z);
    const Complex new_amp = params_.eps2_MHz * std::exp(2.0 * kI * frame_phase_);
    Segment rise;
    rise.squeezing = Envelope::rect(new_amp, 0.0, 2.0 * e + T_Z, e, false, e);
    rise.label = "z_gate_rise";
    add_segment(std::move(rise), e);
}

SlotValues PulseSchedule::slot_values(double t) const {
    SlotValues v;
    const Segment* seg = nullptr;
    for (const auto& s : segments_) {
        if (t >= s.t0 - 1e-12 && t <= s.t1 + 1e-12) seg = &s;
        if (t < s.t1 - 1e-12) break;
    }
    if (!seg) return v;
    const double tl = t - seg->t0;
    v.squeezing = seg->squeezing.value(tl);
    v.rabi = seg->rabi.value(tl);
    v.conversion = seg->conversion.value(tl);
    if (params_.eps2_MHz > 0) {
        const double r = std::abs(v.squeezing) / params_.eps2_MHz;
        v.stark_s = r * r;
    }
    if (params_.g_cr_MHz > 0) {
        const double r = std::abs(v.conversion) / params_.g_cr_MHz;
        v.stark_cr = r * r;
    }
    return v;
}

std::vector<double> PulseSchedule::breakpoints() const {
    std::vector<double> bp;
    for (const auto& s : segments_) {
        bp.push_back(s.t0);
        bp.push_back(s.t1);
        for (const Envelope* e : {&s.squeezing, &s.rabi, &s.conversion}) {
            if (e->kind == Envelope::Kind::RectWindow) {
                for (double x : {e->w0, e->w0 + e->edge, e->w1 - e->edge, e->w1}) {
                    const double abs_t = s.t0 + x;
                    if (abs_t > s.t0 && abs_t < s.t1) bp.push_back(abs_t);
                }
            }
        }
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             bp.end());
    return bp;
}

namespace {
const char* kind_name(Envelope::Kind k) {
    switch (k) {
        case Envelope::Kind::Zero: return "zero";
        case Envelope::Kind::Constant: return "constant";
        case Envelope::Kind::TanhRamp: return "tanh-ramp";
        case Envelope::Kind::Gaussian: return "gaussian";
        case Envelope::Kind::RectWindow: return "rect-window";
    }
    return "?";
}

nlohmann::ordered_json envelope_json(const Envelope& e) {
    nlohmann::ordered_json j;
    j["kind"] = kind_name(e.kind);
    if (e.kind == Envelope::Kind::Zero) return j;
    j["amplitude_MHz"] = {e.amplitude.real(), e.amplitude.imag()};
    if (e.kind == Envelope::Kind::TanhRamp) {
        j["ramp_us"] = e.ramp;
        j["rising"] = e.rising;
    } else if (e.kind == Envelope::Kind::Gaussian) {
        j["sigma_us"] = e.sigma;
    } else if (e.kind == Envelope::Kind::RectWindow) {
        j["window_us"] = {e.w0, e.w1};
        j["edge_us"] = e.edge;
        j["invert"] = e.invert;
    }
    return j;
}
}  // namespace

std::string PulseSchedule::to_json() const {
    nlohmann::ordered_json j;
    j["frame_phase_rad"] = frame_phase_;
    j["total_time_us"] = total_time();
    j["segments"] = nlohmann::json::array();
    for (const auto& s : segments_) {
        nlohmann::ordered_json seg;
        seg["label"] = s.label;
        seg["t0_us"] = s.t0;
        seg["t1_us"] = s.t1;
        seg["squeezing"] = envelope_json(s.squeezing);
        seg["rabi"] = envelope_json(s.rabi);
        seg["conversion"] = envelope_json(s.conversion);
        j["segments"].push_back(seg);
    }
    return j.dump(2);
}

PulseSchedule rabi_sequence(double dt_us, double arg_eps_x, const DeviceParams& p) {
    if (dt_us < 0) throw ContractViolation("rabi_sequence: dt must be >= 0");
    PulseSchedule sched(p);
    sched.add_map_ramp(true);
    sched.add_rabi_drive(dt_us, arg_eps_x);
    sched.add_map_ramp(false);
    return sched;
}

const char* cardinal_name(Cardinal c) {
    switch (c) {
        case Cardinal::PlusX: return "plusX";
        case Cardinal::MinusX: return "minusX";
        case Cardinal::PlusY: return "plusY";
        case Cardinal::MinusY: return "minusY";
        case Cardinal::PlusZ: return "plusZ";
        case Cardinal::MinusZ: return "minusZ";
    }
    return "?";
}

InitResult cardinal_init(Cardinal c, const DeviceParams& p, int dim,
                         const InitOptions& opts) {
    // Ideal two-level preparation unitary on the {|0>,|1>} span:
    // prep|0> = u00|0> + u10|1>.
    Complex u00 = 1, u10 = 0;
    const double s = 1.0 / std::sqrt(2.0);
    switch (c) {
        case Cardinal::PlusZ: break;
        case Cardinal::MinusZ: u00 = 0; u10 = 1; break;
        case Cardinal::PlusX: u00 = s; u10 = s; break;
        case Cardinal::MinusX: u00 = s; u10 = -s; break;
        case Cardinal::PlusY: u00 = s; u10 = kI * s; break;
        case Cardinal::MinusY: u00 = s; u10 = -kI * s; break;
    }

    PulseSchedule sched(p);
    Matrix rho = Matrix::Zero(dim, dim);

    if (opts.manifold_gates) {
        if (c == Cardinal::PlusX || c == Cardinal::MinusX) {
            throw ContractViolation(
                "cardinal_init: X states need the Fock-qubit preparation path");
        }
        if (!opts.cal && c != Cardinal::PlusZ) {
            throw ContractViolation("cardinal_init: manifold gates need a calibration");
        }
        rho(0, 0) = 1.0;
        if (opts.thermal_error) {
            rho(0, 0) = 1.0 - p.n_th;
            rho(1, 1) = p.n_th;
        }
        sched.add_map_ramp(true);
        switch (c) {
            case Cardinal::PlusZ: break;
            case Cardinal::MinusZ: sched.add_x_gate(std::numbers::pi, *opts.cal); break;
            case Cardinal::PlusY: sched.add_x_gate(0.5 * std::numbers::pi, *opts.cal); break;
            case Cardinal::MinusY:
                sched.add_x_gate(-0.5 * std::numbers::pi, *opts.cal);
                break;
            default: break;
        }
    } else {
        Vector prep = Vector::Zero(dim);
        prep(0) = u00;
        prep(1) = u10;
        if (opts.thermal_error) {
            // The same ideal unitary applied to the thermal |1> component.
            Vector orth = Vector::Zero(dim);
            orth(0) = -std::conj(u10);
            orth(1) = std::conj(u00);
            rho = (1.0 - p.n_th) * (prep * prep.adjoint()) +
                  p.n_th * (orth * orth.adjoint());
        } else {
            rho = prep * prep.adjoint();
        }
        sched.add_map_ramp(true);
    }
    InitResult res{DensityMatrix(std::move(rho), {dim}), std::move(sched)};
    return res;
}

namespace {
std::function<SlotValues(double)> envelope_fn(const PulseSchedule& sched) {
    return [&sched](double t) { return sched.slot_values(t); };
}
}  // namespace

Trajectory evolve(const PulseSchedule& schedule,
                  const std::vector<CollapseChannel>& channels,
                  const DensityMatrix& rho0, const std::vector<double>& t_samples,
                  const EvolveOptions& opts) {
    const double t_end = *std::max_element(t_samples.begin(), t_samples.end());
    if (schedule.total_time() < t_end - 1e-9) {
        throw ContractViolation("evolve: schedule does not cover the sample window");
    }
    std::vector<HamiltonianTerm> terms =
        rho0.dims.size() == 2 ? h_full_two_mode(schedule.params(), rho0.dims)
                              : h_terms_single_mode(schedule.params(), rho0.dims[0]);
    TimeDependentH h(terms, envelope_fn(schedule));
    return integrate_master_equation(h, channels, rho0, t_samples,
                                     schedule.breakpoints(), opts);
}

PureTrajectory evolve_pure(const PulseSchedule& schedule, const PureState& psi0,
                           const std::vector<double>& t_samples) {
    std::vector<HamiltonianTerm> terms =
        psi0.dims.size() == 2 ? h_full_two_mode(schedule.params(), psi0.dims)
                              : h_terms_single_mode(schedule.params(), psi0.dims[0]);
    TimeDependentH h(terms, envelope_fn(schedule));
    return integrate_schroedinger(h, psi0, t_samples, schedule.breakpoints());
}

GateCalibration calibrate_x_gate(const DeviceParams& p, int dim,
                                 const std::vector<double>& thetas,
                                 double duration_us) {
    GateCalibration cal;
    cal.duration_us = duration_us;
    cal.sigma_us = duration_us / 4.0;

    const Operator h_eff = h_effective(p, dim);
    const ManifoldBasis basis = manifold_basis(h_eff, p.alpha());
    const PureState psi0 = basis.c_plus;

    // Envelope area of the baseline-subtracted Gaussian at unit peak.
    double area = 0.0;
    {
        Envelope e = Envelope::gaussian(1.0, duration_us, cal.sigma_us);
        const int n = 2000;
        for (int i = 0; i < n; ++i) {
            area += e.value((i + 0.5) * duration_us / n).real() * duration_us / n;
        }
    }

    const double gap_bound = 4.0 * p.K_MHz * p.nbar();
    for (double theta : thetas) {
        if (theta <= 0) throw ContractViolation("calibrate_x_gate: theta must be > 0");
        double amp = theta / (kTwoPi * 4.0 * p.alpha() * area);
        double measured = 0.0;
        for (int it = 0; it < 12; ++it) {
            PulseSchedule sched(p);
            Segment s;
            s.squeezing = Envelope::constant(p.eps2_MHz);
            s.rabi = Envelope::gaussian(amp, duration_us, cal.sigma_us);
            s.label = "x_cal";
            sched.add_segment(std::move(s), duration_us);
            PureTrajectory traj = evolve_pure(sched, psi0, {duration_us});
            const Vector& v = traj.states.back().amp;
            const Complex cp = basis.c_plus.amp.dot(v);
            const Complex cm = basis.c_minus.amp.dot(v);
            measured = 2.0 * std::atan2(std::abs(cm), std::abs(cp));
            if (std::abs(measured - theta) < 1e-5) break;
            amp *= theta / std::max(measured, 1e-3);
        }
        cal.amp_MHz[std::lround(theta * 1e9)] = amp;
        if (amp >= 0.5 * gap_bound) {
            cal.warnings.push_back("x_gate amplitude " + std::to_string(amp) +
                                   " MHz approaches the adiabaticity bound (gap " +
                                   std::to_string(gap_bound) + " MHz)");
        }
    }
    return cal;
}

}  // namespace kerrcat
