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

#include "kerrcat/dynamics.hpp"

namespace kerrcat::internal {

/// Channel with precomputed L^dag and K = L^dag L, and diagonal fast
/// paths (K is diagonal for every ladder-type jump operator).
struct PreparedChannel {
    double rate = 0.0;
    SparseMatrix l, ldag, k;
    bool l_diag = false, k_diag = false;
    Eigen::VectorXcd l_d, k_d;
};

SparseMatrix to_sparse(const Matrix& m);

std::vector<PreparedChannel> prepare_channels(const std::vector<CollapseChannel>& channels);

/// out += sum_k rate_k (L rho L^dag - 1/2 {L^dag L, rho}); tmp is scratch.
void add_dissipators(const std::vector<PreparedChannel>& channels, const Matrix& rho,
                     Matrix& out, Matrix& tmp);

/// out = -i[H, rho] + dissipators.
void rhs_into(const SparseMatrix& h, const std::vector<PreparedChannel>& channels,
              const Matrix& rho, Matrix& out, Matrix& tmp);

}  // namespace kerrcat::internal
