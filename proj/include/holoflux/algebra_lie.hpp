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

#include "holoflux/algebra_finite.hpp"
#include "holoflux/hilbert.hpp"

namespace holoflux {

/// Harmonically finite kernel F({h_e}, {g_e}) on a Lie-backend graph, stored
/// in the canonical product basis: each entry maps the per-edge index list
/// [h_label, h_m, h_n, g_label, g_m, g_n] x E to a complex coefficient.
class LieKernel {
  public:
    LieKernel() = default;
    LieKernel(const Backend *be, int n_edges) : be_(be), n_edges_(n_edges) {}

    static LieKernel zero(const Backend *be, int n_edges) { return LieKernel(be, n_edges); }
    /// Truncated convolution unit, delta^band on every edge.
    static LieKernel delta_identity(const Backend *be, int n_edges, int band);
    static LieKernel random(const Backend *be, int n_edges, int h_band, int g_band, Rng &rng);

    const Backend *backend() const { return be_; }
    int n_edges() const { return n_edges_; }
    const std::map<std::vector<int>, cx> &entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    void add(const std::vector<int> &key, cx value);
    void cleanup(double tol = 1e-14);
    LieKernel &operator+=(const LieKernel &other);
    LieKernel &operator-=(const LieKernel &other);
    LieKernel &operator*=(cx s);

    int h_band(int edge) const;
    int g_band(int edge) const;
    EntryIdx h_entry(const std::vector<int> &key, int edge) const;
    EntryIdx g_entry(const std::vector<int> &key, int edge) const;

    /// L2 norm of the difference, using the Schur weights 1/(d_h d_g) per edge.
    double distance(const LieKernel &other) const;
    double norm() const;
    cx eval(const std::vector<GroupElem> &h, const std::vector<GroupElem> &g) const;

  private:
    const Backend *be_ = nullptr;
    int n_edges_ = 0;
    std::map<std::vector<int>, cx> entries_;
};

/// rho_L / rho_R of a kernel as a dense operator between truncated spaces.
/// Throws CutoffOverflow when a kernel band exceeds the space cutoff.
Op lie_rho(Side side, const LieKernel &k, const ProductSpace &from, const ProductSpace &to);

/// Matrix-free application of rho_side(k) to a vector; avoids materializing
/// the full tensor-product matrix on inflated spaces.
Eigen::VectorXcd lie_rho_apply(Side side, const LieKernel &k, const Eigen::VectorXcd &psi,
                               const ProductSpace &from, const ProductSpace &to);

LieKernel lie_convolve(Side side, const LieKernel &a, const LieKernel &b);
LieKernel lie_involute(Side side, const LieKernel &k);
/// I(f)(h,g) = f(g h^-1 g^-1, g) per edge; inverse uses alpha_{g^-1}.
LieKernel lie_iso_I(const LieKernel &k, bool inverse = false);
/// Edge inversion gamma on every edge: F -> F({g^-1 h^-1 g}, {g^-1}).
LieKernel lie_gamma_all(const LieKernel &k);
/// Fundamental morphisms into the 2-edge algebra (positions: 0 = initial,
/// 1 = terminal); delta factors are truncated at delta_band.
LieKernel lie_fundamental(FundamentalKind kind, const LieKernel &k, int delta_band);
/// Witness-induced *-morphism for left/right policies.
LieKernel lie_graph_morphism(const RefinementWitness &w, const StructuredGraph &coarse,
                             const StructuredGraph &fine, const LieKernel &k, int delta_band);
/// Vertex gauge automorphism on kernels.
LieKernel lie_gauge_kernel(const std::map<std::string, GroupElem> &lambda,
                           const StructuredGraph &g, const LieKernel &k);
/// omega(F) = full Haar integral over all h and g variables.
cx lie_haar_state(const LieKernel &k);

/// Operator-level companions built from word pullbacks.
Op lie_refinement_isometry(const RefinementWitness &w, const StructuredGraph &coarse,
                           const StructuredGraph &fine, const ProductSpace &coarse_space,
                           const ProductSpace &fine_space);
Op lie_unitary_iota(const ProductSpace &from, const ProductSpace &to);
/// 2-edge implementing unitaries, tuple order [initial, terminal]:
/// alpha_L: Psi(g2, g1) -> Psi(g2 g1, g1); alpha_R: Psi(g2, g1) -> Psi(g2, g2 g1).
Op lie_unitary_alpha(Side which, const ProductSpace &from, const ProductSpace &to);
Op lie_gauge_unitary(const std::map<std::string, GroupElem> &lambda, const StructuredGraph &g,
                     const ProductSpace &from, const ProductSpace &to);
Op lie_translation_unitary(const std::vector<GroupElem> &tuple, const ProductSpace &from,
                           const ProductSpace &to);

} // namespace holoflux
