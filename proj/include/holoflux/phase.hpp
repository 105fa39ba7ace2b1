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

#include "holoflux/graph.hpp"
#include "holoflux/pw.hpp"

namespace holoflux {

/// Point of the truncated phase space: edge id -> (theta, holonomy).
/// Finite backends carry empty theta coordinates (configuration space only).
struct PhasePoint {
    const Backend *be = nullptr;
    std::map<std::string, std::pair<CoAlgElem, GroupElem>> data;

    const std::pair<CoAlgElem, GroupElem> &at(const std::string &edge) const;
    static PhasePoint random(const Backend *be, const StructuredGraph &g, Rng &rng,
                             double theta_scale = 1.0);
};

/// Monomial in the theta coordinates: (edge, axis) -> power.
using ThetaMono = std::map<std::pair<std::string, int>, int>;

/// One term of a cylindrical function: coeff * theta-monomial * product of
/// per-edge group factors.
struct CylTerm {
    cx coeff{1.0, 0.0};
    ThetaMono mono;
    std::map<std::string, PWFunction> gfac;
};

/// Finite sum of (polynomial in theta) x (harmonically finite group part),
/// the function class closed under every projection pullback used here.
class CylFunction {
  public:
    CylFunction() = default;
    CylFunction(const Backend *be, std::vector<std::string> edge_ids)
        : be_(be), edge_ids_(std::move(edge_ids)) {}

    static CylFunction constant(const Backend *be, const StructuredGraph &g, cx value);
    /// Momentum functional P^e_X(theta, g) = theta_e(X).
    static CylFunction momentum(const Backend *be, const StructuredGraph &g,
                                const std::string &edge, const AlgElem &x);
    static CylFunction theta_coordinate(const Backend *be, const StructuredGraph &g,
                                        const std::string &edge, int axis);
    static CylFunction group_factor(const Backend *be, const StructuredGraph &g,
                                    const std::string &edge, const PWFunction &f);

    const Backend *backend() const { return be_; }
    const std::vector<std::string> &edge_ids() const { return edge_ids_; }
    const std::vector<CylTerm> &terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    int theta_degree() const;

    cx eval(const PhasePoint &p) const;

    CylFunction &operator+=(const CylFunction &other);
    CylFunction &operator*=(cx s);
    friend CylFunction operator+(CylFunction a, const CylFunction &b) { return a += b; }
    friend CylFunction operator*(cx s, CylFunction f) { return f *= s; }
    CylFunction product(const CylFunction &other) const;

    /// d/d theta_(edge, axis).
    CylFunction partial_theta(const std::string &edge, int axis) const;
    /// Right-invariant derivative acting on the group factor of one edge.
    CylFunction right_invariant_derivative(const std::string &edge, int axis) const;

    /// Expands every group factor into single Peter-Weyl entries and merges
    /// equal terms; keeps term counts at the true support size.
    void canonicalize();

    void push_term(CylTerm term) {
        atomic_ = false;
        terms_.push_back(std::move(term));
    }

  private:
    CylFunction fused_product(const CylFunction &other) const;
    void materialize(const std::map<std::vector<int>, cx> &merged);

    const Backend *be_ = nullptr;
    std::vector<std::string> edge_ids_;
    std::vector<CylTerm> terms_;
    // true when every group factor of every term is a single PW entry
    bool atomic_ = false;
};

/// Canonical Poisson bracket on the truncated phase space, per edge:
/// {f, f'} = <d_theta f, R f'> - <d_theta f', R f> - theta([d_theta f, d_theta f']).
CylFunction poisson_bracket(const CylFunction &f, const CylFunction &fp);

/// Sup of |f| over a sample of random phase points.
double sup_norm_sampled(const CylFunction &f, const StructuredGraph &g, Rng &rng, int samples,
                        double theta_scale = 1.0);

/// The projection p^c induced by a witness: per coarse edge,
/// g_e = g_m^(s_m) ... g_1^(s_1) and theta_e the weighted CoAd-twisted sum of
/// the factor momenta (inverted factors enter through iota).
PhasePoint project_point(const RefinementWitness &w, const StructuredGraph &coarse,
                         const StructuredGraph &fine, const PhasePoint &fine_point);

/// Edge inversion iota(theta, g) = (-CoAd(g^-1) theta, g^-1) applied on all
/// edges, mapping Gamma_l to Gamma_{l^-1}.
PhasePoint invert_point(const PhasePoint &p);

/// Pullback p^c* on cylindrical functions; exact, stays in the class.
CylFunction pullback_cyl(const RefinementWitness &w, const StructuredGraph &coarse,
                         const StructuredGraph &fine, const CylFunction &f);

/// Pullback along edge inversion, (iota* f)(theta, g) = f(iota(theta, g)).
CylFunction pullback_inversion(const CylFunction &f);

} // namespace holoflux
