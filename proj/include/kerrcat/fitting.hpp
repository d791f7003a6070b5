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
#include <functional>
#include <vector>

namespace kerrcat {

struct LmOptions {
    int max_iterations = 200;
    double step_tol = 1e-10;   // relative parameter step
    double lambda0 = 1e-3;
    double jacobian_eps = 1e-7;
};

struct LmResult {
    Eigen::VectorXd params;
    double rms_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Damped least squares with a finite-difference Jacobian. Throws
/// FitError (with the residual in the message) when it fails to converge.
LmResult levenberg_marquardt(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residuals,
    Eigen::VectorXd p0, const LmOptions& opts = {});

struct ExpFit {
    double amplitude = 0.0;
    double tau = 0.0;
    double offset = 0.0;
    double rms_residual = 0.0;
};

/// 3-parameter a e^{-t/tau} + c, seeded by log-linear regression on the
/// offset-corrected data. Needs >= 8 points; constant series is rejected
/// as unidentifiable.
ExpFit exp_fit(const std::vector<double>& t, const std::vector<double>& y);

struct OscillationFit {
    double freq_MHz = 0.0;  // frequency of the cosine, 1/us = MHz
    double amplitude = 0.0;
    double phase = 0.0;
    double tau = 0.0;       // decay; large when the fit finds none
    double offset = 0.0;
    double rms_residual = 0.0;
    double contrast() const { return std::abs(amplitude); }
};

/// Damped cosine a cos(2 pi f t + phi) e^{-t/tau} + c. The frequency is
/// seeded by a periodogram scan, then refined together with the other
/// parameters.
OscillationFit fit_oscillation(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace kerrcat
