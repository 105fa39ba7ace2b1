// Copyright 2026 The holoflux authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "holoflux/algebra_lie.hpp"

namespace holoflux {

/// State functional on the truncated kernel algebra, represented by a
/// density matrix on the truncated Hilbert space. The Haar state is the
/// rank-one projector onto the constant vector: <Omega, rho_L(F) Omega>
/// equals the double Haar integral of F.
struct StateFunctional {
    ProductSpace space;
    Eigen::MatrixXcd density;

    static StateFunctional haar(const ProductSpace &space);
    /// Vector state concentrated on a non-trivial basis mode; deliberately
    /// not Haar, used as the negative control for state consistency.
    static StateFunctional perturbed(const ProductSpace &space, int basis_index);

    cx value(const Op &rho_of_kernel) const;
    /// Positivity and normalization diagnostics.
    double min_eigenvalue() const;
};

/// |omega_coarse(F) - omega_fine(morphism(F))| for one test kernel, with the
/// fine state evaluated on the morphism image.
double state_consistency_residual(const StateFunctional &coarse_state,
                                  const StateFunctional &fine_state, const Op &rho_coarse,
                                  const Op &rho_fine);

} // namespace holoflux
