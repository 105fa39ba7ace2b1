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

#include "holoflux/states.hpp"

namespace holoflux {

namespace {

int constant_vector_index(const ProductSpace &space) {
    // position of the all-trivial basis vector
    std::vector<int> idx(space.edges.size());
    for (std::size_t e = 0; e < space.edges.size(); ++e) {
        std::vector<EntryIdx> basis = space.edges[e].basis();
        const Backend *be = space.edges[e].be;
        int triv = be->kind() == Backend::Kind::finite ? be->irrep_labels().front() : 0;
        int pos = -1;
        for (std::size_t p = 0; p < basis.size(); ++p)
            if (basis[p] == EntryIdx{triv, 0, 0}) pos = static_cast<int>(p);
        idx[e] = pos;
    }
    return space.flatten(idx);
}

} // namespace

StateFunctional StateFunctional::haar(const ProductSpace &space) {
    StateFunctional s{space, Eigen::MatrixXcd::Zero(space.dim(), space.dim())};
    const int omega = constant_vector_index(space);
    s.density(omega, omega) = 1.0;
    return s;
}

StateFunctional StateFunctional::perturbed(const ProductSpace &space, int basis_index) {
    StateFunctional s{space, Eigen::MatrixXcd::Zero(space.dim(), space.dim())};
    s.density(basis_index, basis_index) = 1.0;
    return s;
}

cx StateFunctional::value(const Op &rho_of_kernel) const {
    if (!(rho_of_kernel.from == space) || !(rho_of_kernel.to == space))
        throw DomainError("state evaluation: operator space mismatch");
    return (density * rho_of_kernel.m).trace();
}

double StateFunctional::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(density);
    return es.eigenvalues().minCoeff();
}

double state_consistency_residual(const StateFunctional &coarse_state,
                                  const StateFunctional &fine_state, const Op &rho_coarse,
                                  const Op &rho_fine) {
    return std::abs(coarse_state.value(rho_coarse) - fine_state.value(rho_fine));
}

} // namespace holoflux
