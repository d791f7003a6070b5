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

#include <complex>
#include <numbers>

namespace kerrcat {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Unit convention used throughout:
//   - user-facing frequencies are nu = omega/2pi in MHz,
//   - internal generator entries are angular, rad/us,
//   - times are us, dissipator rates are 1/us (angular-consistent).
// 1 MHz = 1/us, so the whole conversion is the single factor 2pi below.
inline double angular(double nu_mhz) { return kTwoPi * nu_mhz; }
inline Complex angular(Complex nu_mhz) { return kTwoPi * nu_mhz; }
inline double to_mhz(double omega_rad_per_us) { return omega_rad_per_us / kTwoPi; }

}  // namespace kerrcat
