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

#include "holoflux/weyl.hpp"

#include <cmath>

namespace holoflux {

namespace {

double midpoint_coeff(Ordering ordering, double eps, int m, int k, int n) {
    const double x = ordering == Ordering::weyl ? eps * (k + 0.5 * n) : eps * k;
    double r = 1.0;
    for (int i = 0; i < m; ++i) r *= x;
    return r;
}

/// U(1): matrix of a single term theta^m * (mode sum) on one edge.
Eigen::MatrixXcd u1_term_matrix(const EdgeSpace &from, const EdgeSpace &to, int m,
                                const PWFunction &f, double eps, Ordering ordering) {
    std::vector<EntryIdx> fb = from.basis();
    std::vector<EntryIdx> tb = to.basis();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(tb.size(), fb.size());
    for (std::size_t col = 0; col < fb.size(); ++col) {
        const int k = fb[col].label;
        for (const auto &[n, c] : f.coef()) {
            const int kp = k + n;
            for (std::size_t row = 0; row < tb.size(); ++row)
                if (tb[row].label == kp)
                    out(row, col) += c(0, 0) * midpoint_coeff(ordering, eps, m, k, n);
        }
    }
    return out;
}

Eigen::MatrixXcd identity_embed(const EdgeSpace &from, const EdgeSpace &to) {
    return embed_op(ProductSpace{{from}}, ProductSpace{{to}}).m;
}

/// Per-term theta data: power per (edge position, axis).
std::map<std::pair<int, int>, int> term_theta(const CylTerm &t, const StructuredGraph &g) {
    std::map<std::pair<int, int>, int> out;
    for (const auto &[key, p] : t.mono) out[{g.edge_position(key.first), key.second}] = p;
    return out;
}

} // namespace

Op weyl_quantize(const Symbol &symbol, Ordering ordering, const StructuredGraph &graph,
                 const ProductSpace &from, const ProductSpace &to) {
    const Backend *be = symbol.sigma.backend();
    if (symbol.epsilon <= 0.0) throw DomainError("quantization needs epsilon > 0");
    if (be->kind() == Backend::Kind::finite)
        throw Unsupported("quantization is defined on the Lie backends");
    Op op = Op::zero(from, to);
    const double eps = symbol.epsilon;
    for (const auto &term : symbol.sigma.terms()) {
        auto theta = term_theta(term, graph);
        if (be->kind() == Backend::Kind::u1) {
            std::vector<Eigen::MatrixXcd> factors;
            for (std::size_t e = 0; e < from.edges.size(); ++e) {
                int m = 0;
                auto it = theta.find({static_cast<int>(e), 0});
                if (it != theta.end()) m = it->second;
                PWFunction f = PWFunction::constant(be, cx(1.0));
                auto git = term.gfac.find(graph.edges[e].id);
                if (git != term.gfac.end()) f = git->second;
                factors.push_back(
                    u1_term_matrix(from.edges[e], to.edges[e], m, f, eps, ordering));
            }
            op.m += term.coeff * kron_all(factors);
            continue;
        }
        // SU(2)
        if (ordering != Ordering::weyl)
            throw Unsupported("Kohn-Nirenberg ordering is implemented on U(1) only");
        int degree = 0;
        for (const auto &[key, p] : theta) degree += p;
        if (degree > 1)
            throw Unsupported("SU(2) quantization supports theta-degree <= 1 symbols");
        ProductFunction pf;
        ProductFunction::Term ft;
        ft.coeff = cx(1.0);
        for (const auto &[edge, f] : term.gfac) ft.factors[graph.edge_position(edge)] = f;
        pf.terms.push_back(ft);
        Op mf = mult_op(from, to, pf);
        if (degree == 0) {
            op.m += term.coeff * mf.m;
        } else {
            const auto &[key, p] = *theta.begin();
            const int e = key.first;
            const int axis = key.second;
            // symmetric ordering (-i eps/2)(R_a M_f + M_f R_a)
            std::vector<Eigen::MatrixXcd> r_from, r_to;
            for (std::size_t j = 0; j < from.edges.size(); ++j) {
                r_from.push_back(static_cast<int>(j) == e
                                     ? generator_matrix(from.edges[j], axis)
                                     : Eigen::MatrixXcd::Identity(from.edges[j].dim(),
                                                                  from.edges[j].dim()));
                r_to.push_back(static_cast<int>(j) == e
                                   ? generator_matrix(to.edges[j], axis)
                                   : Eigen::MatrixXcd::Identity(to.edges[j].dim(),
                                                                to.edges[j].dim()));
            }
            Eigen::MatrixXcd rf = kron_all(r_from);
            Eigen::MatrixXcd rt = kron_all(r_to);
            op.m += term.coeff * cx(0.0, -0.5 * eps) * (rt * mf.m + mf.m * rf);
        }
    }
    return op;
}

namespace {

/// Sum of c * exp(i a psi) closed under d/dpsi; the oracle uses it to apply
/// the theta-integral of the kernel formula as (i d/dpsi)^m at psi = 0.
struct ExpSum {
    std::vector<std::pair<cx, double>> terms; // (coefficient, frequency a)

    void differentiate_i() { // apply i d/dpsi
        for (auto &[c, a] : terms) c *= cx(-a, 0.0);
    }
    cx at_zero() const {
        cx acc(0.0, 0.0);
        for (const auto &[c, a] : terms) acc += c;
        return acc;
    }
};

} // namespace

Op weyl_oracle_u1(const Symbol &symbol, Ordering ordering, const StructuredGraph &graph,
                  const ProductSpace &from, const ProductSpace &to) {
    const Backend *be = symbol.sigma.backend();
    if (be->kind() != Backend::Kind::u1) throw Unsupported("the kernel-formula oracle is U(1) only");
    Op op = Op::zero(from, to);
    const double eps = symbol.epsilon;
    for (const auto &term : symbol.sigma.terms()) {
        auto theta = term_theta(term, graph);
        std::vector<Eigen::MatrixXcd> factors;
        for (std::size_t e = 0; e < from.edges.size(); ++e) {
            int m = 0;
            auto it = theta.find({static_cast<int>(e), 0});
            if (it != theta.end()) m = it->second;
            PWFunction f = PWFunction::constant(be, cx(1.0));
            auto git = term.gfac.find(graph.edges[e].id);
            if (git != term.gfac.end()) f = git->second;
            std::vector<EntryIdx> fb = from.edges[e].basis();
            std::vector<EntryIdx> tb = to.edges[e].basis();
            Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(tb.size(), fb.size());
            for (std::size_t col = 0; col < fb.size(); ++col) {
                const int k = fb[col].label;
                for (const auto &[n, c] : f.coef()) {
                    // (Q Psi_k)(phi) = e^(iN phi) eps^m (i d/dpsi)^m
                    //   [ e^(-iN psi/2) Psi_k(phi - psi) ]_(psi=0)   (Weyl)
                    // with the e^(-iN psi/2) factor absent for Kohn-Nirenberg.
                    ExpSum u;
                    const double freq =
                        ordering == Ordering::weyl ? -0.5 * n - k : -double(k);
                    u.terms.push_back({cx(1.0, 0.0), freq});
                    for (int d = 0; d < m; ++d) u.differentiate_i();
                    cx amp = c(0, 0) * u.at_zero() * std::pow(eps, m);
                    const int kp = k + n;
                    for (std::size_t row = 0; row < tb.size(); ++row)
                        if (tb[row].label == kp) mat(row, col) += amp;
                }
            }
            factors.push_back(std::move(mat));
        }
        op.m += term.coeff * kron_all(factors);
    }
    return op;
}

} // namespace holoflux
