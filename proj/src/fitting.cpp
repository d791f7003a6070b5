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

#include "kerrcat/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "kerrcat/errors.hpp"
#include "kerrcat/units.hpp"

namespace kerrcat {

LmResult levenberg_marquardt(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residuals,
    Eigen::VectorXd p0, const LmOptions& opts) {
    using Eigen::MatrixXd;
    using Eigen::VectorXd;

    VectorXd p = std::move(p0);
    VectorXd r = residuals(p);
    double cost = r.squaredNorm();
    double lambda = opts.lambda0;
    const int np = static_cast<int>(p.size());

    LmResult result;
    for (int it = 0; it < opts.max_iterations; ++it) {
        result.iterations = it + 1;
        MatrixXd jac(r.size(), np);
        for (int k = 0; k < np; ++k) {
            VectorXd pk = p;
            const double h = opts.jacobian_eps * std::max(1.0, std::abs(p(k)));
            pk(k) += h;
            jac.col(k) = (residuals(pk) - r) / h;
        }
        const MatrixXd jtj = jac.transpose() * jac;
        const VectorXd jtr = jac.transpose() * r;

        bool improved = false;
        for (int attempt = 0; attempt < 12; ++attempt) {
            MatrixXd damped = jtj;
            damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
            VectorXd step = damped.ldlt().solve(-jtr);
            VectorXd ptrial = p + step;
            VectorXd rtrial = residuals(ptrial);
            const double ctrial = rtrial.squaredNorm();
            if (std::isfinite(ctrial) && ctrial < cost) {
                const double rel_step =
                    step.norm() / std::max(1e-300, p.norm() + step.norm());
                p = ptrial;
                r = rtrial;
                cost = ctrial;
                lambda = std::max(lambda * 0.3, 1e-12);
                improved = true;
                if (rel_step < opts.step_tol) {
                    result.params = p;
                    result.rms_residual = std::sqrt(cost / r.size());
                    result.converged = true;
                    return result;
                }
                break;
            }
            lambda *= 10.0;
        }
        if (!improved) {
            // Stuck at a (possibly good) local minimum.
            result.params = p;
            result.rms_residual = std::sqrt(cost / r.size());
            result.converged = cost < 1e-20 || lambda < 1e11;
            if (!result.converged) {
                throw FitError("levenberg_marquardt: no descent direction, rms=" +
                               std::to_string(result.rms_residual));
            }
            return result;
        }
    }
    throw FitError("levenberg_marquardt: not converged after " +
                   std::to_string(opts.max_iterations) +
                   " iterations, rms=" + std::to_string(std::sqrt(cost / r.size())));
}

ExpFit exp_fit(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size()) throw FitError("exp_fit: size mismatch");
    if (t.size() < 8) throw FitError("exp_fit: needs at least 8 points");
    const int n = static_cast<int>(t.size());

    const auto [ymin_it, ymax_it] = std::minmax_element(y.begin(), y.end());
    const double spread = *ymax_it - *ymin_it;
    const double yscale = std::max(std::abs(*ymax_it), std::abs(*ymin_it));
    if (spread < 1e-12 + 1e-9 * yscale) {
        throw FitError("exp_fit: constant series, tau unidentifiable");
    }

    // Log-linear seed on offset-corrected data. The offset guess is the
    // tail average, nudged off the data so logs stay finite.
    double c0 = std::accumulate(y.end() - n / 4 - 1, y.end(), 0.0) / (n / 4 + 1);
    double a0 = y.front() - c0;
    if (std::abs(a0) < 0.05 * spread) a0 = (y.front() >= c0 ? 1.0 : -1.0) * spread;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int i = 0; i < n; ++i) {
        const double z = (y[i] - c0) / a0;
        if (z > 0.02) {
            const double ly = std::log(z);
            sx += t[i];
            sy += ly;
            sxx += t[i] * t[i];
            sxy += t[i] * ly;
            ++m;
        }
    }
    double tau0 = (t.back() - t.front()) / 2.0;
    if (m >= 2) {
        const double slope = (m * sxy - sx * sy) / std::max(1e-300, m * sxx - sx * sx);
        if (slope < -1e-12) tau0 = -1.0 / slope;
    }
    tau0 = std::clamp(tau0, 1e-6, 1e7);

    auto resid = [&](const Eigen::VectorXd& p) {
        Eigen::VectorXd r(n);
        const double a = p(0), tau = std::abs(p(1)), c = p(2);
        for (int i = 0; i < n; ++i) {
            r(i) = a * std::exp(-t[i] / std::max(tau, 1e-9)) + c - y[i];
        }
        return r;
    };
    Eigen::VectorXd p0(3);
    p0 << a0, tau0, c0;
    LmResult lm = levenberg_marquardt(resid, p0);
    ExpFit fit;
    fit.amplitude = lm.params(0);
    fit.tau = std::abs(lm.params(1));
    fit.offset = lm.params(2);
    fit.rms_residual = lm.rms_residual;
    if (!lm.converged || !(fit.tau > 0) || !std::isfinite(fit.tau)) {
        throw FitError("exp_fit: failed, rms=" + std::to_string(lm.rms_residual));
    }
    return fit;
}

OscillationFit fit_oscillation(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size()) throw FitError("fit_oscillation: size mismatch");
    if (t.size() < 12) throw FitError("fit_oscillation: needs at least 12 points");
    const int n = static_cast<int>(t.size());
    const double span = t.back() - t.front();
    if (span <= 0) throw FitError("fit_oscillation: degenerate time axis");

    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;

    // Periodogram scan for the dominant frequency; two refinement passes.
    double dt_min = span;
    for (int i = 1; i < n; ++i) dt_min = std::min(dt_min, t[i] - t[i - 1]);
    double f_lo = 0.25 / span, f_hi = 0.5 / std::max(dt_min, 1e-9);
    double best_f = f_lo, best_a = -1.0;
    for (int pass = 0; pass < 3; ++pass) {
        const int steps = 400;
        const double df = (f_hi - f_lo) / steps;
        for (int k = 0; k <= steps; ++k) {
            const double f = f_lo + k * df;
            Complex acc = 0.0;
            for (int i = 0; i < n; ++i) {
                acc += (y[i] - mean) * std::exp(Complex(0.0, -kTwoPi * f * t[i]));
            }
            const double a = std::abs(acc);
            if (a > best_a) {
                best_a = a;
                best_f = f;
            }
        }
        const double width = (f_hi - f_lo) / 20.0;
        f_lo = std::max(best_f - width, 1e-6);
        f_hi = best_f + width;
    }

    Complex acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += (y[i] - mean) * std::exp(Complex(0.0, -kTwoPi * best_f * t[i]));
    }
    const double a0 = 2.0 * std::abs(acc) / n;
    const double phi0 = std::arg(acc);

    auto resid = [&](const Eigen::VectorXd& p) {
        Eigen::VectorXd r(n);
        const double a = p(0), f = p(1), phi = p(2), tau = std::abs(p(3)), c = p(4);
        for (int i = 0; i < n; ++i) {
            r(i) = a * std::cos(kTwoPi * f * t[i] + phi) *
                       std::exp(-t[i] / std::max(tau, 1e-9)) +
                   c - y[i];
        }
        return r;
    };
    Eigen::VectorXd p0(5);
    p0 << a0, best_f, phi0, 20.0 * span, mean;
    LmResult lm = levenberg_marquardt(resid, p0);

    OscillationFit fit;
    fit.amplitude = lm.params(0);
    fit.freq_MHz = std::abs(lm.params(1));
    fit.phase = lm.params(2);
    fit.tau = std::abs(lm.params(3));
    fit.offset = lm.params(4);
    fit.rms_residual = lm.rms_residual;
    return fit;
}

}  // namespace kerrcat
