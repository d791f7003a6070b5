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

#include <stdexcept>
#include <string>

namespace kerrcat {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Fock truncation below the minimum usable size (dim < 2 or mismatch).
struct InvalidDimensionError : Error {
    using Error::Error;
};

/// Requested amplitude does not fit inside the truncated Fock space.
struct TruncationError : Error {
    using Error::Error;
};

/// Adaptive integrator step size underflowed.
struct StiffnessError : Error {
    using Error::Error;
};

/// Nonlinear least-squares fit did not converge or is unidentifiable.
struct FitError : Error {
    using Error::Error;
};

/// A caller violated an operation contract (e.g. non-Hermitian input).
struct ContractViolation : Error {
    using Error::Error;
};

/// Configuration file parse or validation failure.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace kerrcat
