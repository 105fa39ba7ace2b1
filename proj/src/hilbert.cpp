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

#include "holoflux/hilbert.hpp"

#include <cmath>

namespace holoflux {

int ProductSpace::dim() const {
    int d = 1;
    for (const auto &e : edges) d *= e.dim();
    return d;
}

std::vector<int> ProductSpace::edge_dims() const {
    std::vector<int> dims;
    dims.reserve(edges.size());
    for (const auto &e : edges) dims.push_back(e.dim());
    return dims;
}

int ProductSpace::flatten(const std::vector<int> &per_edge) const {
    int idx = 0;
    for (std::size_t e = 0; e < edges.size(); ++e) idx = idx * edges[e].dim() + per_edge[e];
    return idx;
}

std::vector<int> ProductSpace::unflatten(int idx) const {
    std::vector<int> per_edge(edges.size());
    for (std::size_t e = edges.size(); e-- > 0;) {
        const int d = edges[e].dim();
        per_edge[e] = idx % d;
        idx /= d;
    }
    return per_edge;
}

ProductSpace ProductSpace::uniform(const Backend *be, int n_edges, int cutoff) {
    ProductSpace s;
    s.edges.assign(n_edges, EdgeSpace{be, cutoff});
    return s;
}

Op Op::identity(const ProductSpace &s) {
    return Op{s, s, Eigen::MatrixXcd::Identity(s.dim(), s.dim())};
}

Op Op::zero(const ProductSpace &from, const ProductSpace &to) {
    return Op{from, to, Eigen::MatrixXcd::Zero(to.dim(), from.dim())};
}

Op Op::adjoint() const { return Op{to, from, m.adjoint()}; }

Op operator*(const Op &a, const Op &b) {
    if (!(a.from == b.to)) throw DomainError("operator composition: space mismatch");
    return Op{b.from, a.to, a.m * b.m};
}

Op operator+(const Op &a, const Op &b) {
    if (!(a.from == b.from) || !(a.to == b.to)) throw DomainError("operator sum: space mismatch");
    return Op{a.from, a.to, a.m + b.m};
}

Op operator-(const Op &a, const Op &b) {
    if (!(a.from == b.from) || !(a.to == b.to)) throw DomainError("operator diff: space mismatch");
    return Op{a.from, a.to, a.m - b.m};
}

Op operator*(cx s, Op a) {
    a.m *= s;
    return a;
}

double op_distance(const Op &a, const Op &b) {
    if (!(a.from == b.from) || !(a.to == b.to))
        throw DomainError("operator comparison: space mismatch");
    if (a.m.size() == 0) return 0.0;
    return (a.m - b.m).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd kron_all(const std::vector<Eigen::MatrixXcd> &factors) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Ones(1, 1);
    for (const auto &f : factors) {
        Eigen::MatrixXcd next(acc.rows() * f.rows(), acc.cols() * f.cols());
        for (int i = 0; i < acc.rows(); ++i)
            for (int j = 0; j < acc.cols(); ++j)
                next.block(i * f.rows(), j * f.cols(), f.rows(), f.cols()) = acc(i, j) * f;
        acc = std::move(next);
    }
    return acc;
}

Eigen::MatrixXcd conv_entry_matrix(const EdgeSpace &space, const EntryIdx &h) {
    // Left convolution by pi^l_ab sends Phi_(l,c,d) to delta_bc Phi_(l,a,d)/d_l.
    std::vector<EntryIdx> basis = space.basis();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(basis.size(), basis.size());
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const EntryIdx &b = basis[col];
        if (b.label != h.label || b.m != h.n) continue;
        EntryIdx target{h.label, h.m, b.n};
        for (std::size_t row = 0; row < basis.size(); ++row)
            if (basis[row] == target) {
                m(row, col) = 1.0 / space.be->irrep_dim(h.label);
                break;
            }
    }
    return m;
}

Eigen::MatrixXcd mult_matrix(const EdgeSpace &from, const EdgeSpace &to, const PWFunction &f) {
    if (from.be != to.be) throw BackendMismatch("mult_matrix across backends");
    auto &cache = HarmonicCache::for_backend(from.be);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(to.dim(), from.dim());
    for (const auto &[l, c] : f.coef()) {
        const int d = from.be->irrep_dim(l);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (c(i, j) == cx(0.0)) continue;
                m += c(i, j) * cache.mult_entry_matrix(EntryIdx{l, i, j}, from.cutoff, to.cutoff);
            }
    }
    return m;
}

Eigen::MatrixXcd generator_matrix(const EdgeSpace &space, int axis) {
    std::vector<EntryIdx> basis = space.basis();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(basis.size(), basis.size());
    std::map<int, Eigen::MatrixXcd> gens;
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const EntryIdx &b = basis[col];
        auto it = gens.find(b.label);
        if (it == gens.end()) it = gens.emplace(b.label, space.be->irrep_generator(b.label, axis)).first;
        const Eigen::MatrixXcd &gen = it->second;
        // R_a Phi_(l,m,n) = sum_k gen(m,k) Phi_(l,k,n)
        for (std::size_t row = 0; row < basis.size(); ++row) {
            const EntryIdx &r = basis[row];
            if (r.label == b.label && r.n == b.n) m(row, col) += gen(b.m, r.m);
        }
    }
    return m;
}

Op embed_op(const ProductSpace &from, const ProductSpace &to) {
    if (from.edges.size() != to.edges.size()) throw DomainError("embed_op: edge count mismatch");
    std::vector<Eigen::MatrixXcd> factors;
    for (std::size_t e = 0; e < from.edges.size(); ++e) {
        if (from.edges[e].cutoff > to.edges[e].cutoff)
            throw CutoffOverflow("embed_op requires nondecreasing cutoffs");
        auto fb = from.edges[e].basis();
        auto tb = to.edges[e].basis();
        Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(tb.size(), fb.size());
        for (std::size_t c = 0; c < fb.size(); ++c)
            for (std::size_t r = 0; r < tb.size(); ++r)
                if (tb[r] == fb[c]) mat(r, c) = 1.0;
        factors.push_back(std::move(mat));
    }
    return Op{from, to, kron_all(factors)};
}

namespace {

void merge_factor(WordExpansion::Term &term, int edge, const PWFunction &f) {
    auto it = term.factors.find(edge);
    if (it == term.factors.end())
        term.factors.emplace(edge, f);
    else
        it->second = it->second.product(f);
}

} // namespace

WordExpansion expand_entry_word(const Backend *be, const EntryIdx &entry,
                                const std::vector<WordToken> &word) {
    auto &cache = HarmonicCache::for_backend(be);
    const int d = be->irrep_dim(entry.label);
    WordExpansion out;
    if (word.empty()) {
        // Constant word: the entry evaluates at the identity.
        WordExpansion::Term t;
        t.coeff = be->irrep_matrix(entry.label, be->identity())(entry.m, entry.n);
        out.terms.push_back(std::move(t));
        return out;
    }
    // Sum over intermediate indices of the factorization
    // pi_mn(t_1 ... t_p) = sum pi_m,k1(t_1) pi_k1,k2(t_2) ... pi_kp-1,n(t_p).
    std::vector<int> ks(word.size() - 1, 0);
    auto advance = [&]() {
        for (std::size_t i = 0; i < ks.size(); ++i) {
            if (++ks[i] < d) return true;
            ks[i] = 0;
        }
        return false;
    };
    do {
        WordExpansion::Term term;
        bool dead = false;
        int row = entry.m;
        for (std::size_t t = 0; t < word.size() && !dead; ++t) {
            const int col = (t + 1 == word.size()) ? entry.n : ks[t];
            const WordToken &tok = word[t];
            if (tok.is_const) {
                cx v = be->irrep_matrix(entry.label, tok.constant)(row, col);
                term.coeff *= v;
                if (term.coeff == cx(0.0)) dead = true;
            } else if (tok.sign > 0) {
                merge_factor(term, tok.target_edge,
                             PWFunction::basis(be, entry.label, row, col));
            } else {
                merge_factor(term, tok.target_edge,
                             cache.inv_entry(EntryIdx{entry.label, row, col}));
            }
            row = col;
        }
        if (!dead) out.terms.push_back(std::move(term));
    } while (advance());
    return out;
}

namespace {

/// Scatters a per-edge factorized function into the flat coefficient vector
/// of the target space; returns false if a coefficient falls outside the
/// cutoff (and truncation is not allowed).
bool scatter_term(const ProductSpace &target, cx coeff,
                  const std::map<int, PWFunction> &factors, Eigen::VectorXcd &out,
                  bool allow_truncation) {
    const std::size_t n_edges = target.edges.size();
    // Per edge: list of (basis position, coefficient in the orthonormal basis).
    std::vector<std::vector<std::pair<int, cx>>> per_edge(n_edges);
    for (std::size_t e = 0; e < n_edges; ++e) {
        const EdgeSpace &space = target.edges[e];
        auto it = factors.find(static_cast<int>(e));
        std::vector<EntryIdx> basis = space.basis();
        if (it == factors.end()) {
            // constant factor 1 = Phi_trivial
            PWFunction one = PWFunction::constant(space.be, cx(1.0));
            it = factors.end();
            for (std::size_t p = 0; p < basis.size(); ++p) {
                const EntryIdx &b = basis[p];
                auto cit = one.coef().find(b.label);
                if (cit == one.coef().end()) continue;
                cx c = cit->second(b.m, b.n);
                if (c != cx(0.0))
                    per_edge[e].emplace_back(static_cast<int>(p),
                                             c / std::sqrt(double(space.be->irrep_dim(b.label))));
            }
            continue;
        }
        const PWFunction &f = it->second;
        double captured = 0.0;
        for (std::size_t p = 0; p < basis.size(); ++p) {
            const EntryIdx &b = basis[p];
            auto cit = f.coef().find(b.label);
            if (cit == f.coef().end()) continue;
            cx c = cit->second(b.m, b.n);
            if (c != cx(0.0)) {
                cx amp = c / std::sqrt(double(space.be->irrep_dim(b.label)));
                per_edge[e].emplace_back(static_cast<int>(p), amp);
                captured += std::norm(amp);
            }
        }
        if (!allow_truncation) {
            double total = f.norm2();
            if (total - captured > 1e-12 * std::max(1.0, total))
                return false;
        }
    }
    // Outer product scatter.
    std::vector<std::size_t> pos(n_edges, 0);
    for (std::size_t e = 0; e < n_edges; ++e)
        if (per_edge[e].empty()) return true; // factor vanishes inside cutoff
    while (true) {
        cx amp = coeff;
        std::vector<int> idx(n_edges);
        for (std::size_t e = 0; e < n_edges; ++e) {
            idx[e] = per_edge[e][pos[e]].first;
            amp *= per_edge[e][pos[e]].second;
        }
        out(target.flatten(idx)) += amp;
        std::size_t e = 0;
        for (; e < n_edges; ++e) {
            if (++pos[e] < per_edge[e].size()) break;
            pos[e] = 0;
        }
        if (e == n_edges) break;
    }
    return true;
}

} // namespace

Op pullback_op(const ProductSpace &source, const ProductSpace &target, const WordMap &map,
               bool allow_truncation) {
    if (map.source_words.size() != source.edges.size())
        throw DomainError("pullback_op: word count does not match source edges");
    const Backend *be = target.edges.empty() ? source.edges.front().be : target.edges.front().be;
    Op op = Op::zero(source, target);
    // Enumerate source product basis vectors.
    std::vector<std::vector<EntryIdx>> src_bases;
    for (const auto &e : source.edges) src_bases.push_back(e.basis());
    const int src_dim = source.dim();
    for (int col = 0; col < src_dim; ++col) {
        std::vector<int> per_edge = source.unflatten(col);
        // Expand each source edge's entry along its word, then combine.
        std::vector<WordExpansion> lists;
        double norm = 1.0;
        for (std::size_t e = 0; e < source.edges.size(); ++e) {
            const EntryIdx &entry = src_bases[e][per_edge[e]];
            norm *= std::sqrt(double(be->irrep_dim(entry.label)));
            lists.push_back(expand_entry_word(be, entry, map.source_words[e]));
        }
        Eigen::VectorXcd column = Eigen::VectorXcd::Zero(target.dim());
        // Cartesian product over the per-edge term lists.
        std::vector<std::size_t> pos(lists.size(), 0);
        bool any_empty = false;
        for (const auto &l : lists)
            if (l.terms.empty()) any_empty = true;
        if (!any_empty) {
            while (true) {
                cx coeff = norm;
                std::map<int, PWFunction> factors;
                for (std::size_t e = 0; e < lists.size(); ++e) {
                    const auto &term = lists[e].terms[pos[e]];
                    coeff *= term.coeff;
                    for (const auto &[edge, f] : term.factors) {
                        auto it = factors.find(edge);
                        if (it == factors.end())
                            factors.emplace(edge, f);
                        else
                            it->second = it->second.product(f);
                    }
                }
                if (coeff != cx(0.0)) {
                    if (!scatter_term(target, coeff, factors, column, allow_truncation))
                        throw CutoffOverflow(
                            "pullback image exceeds the target cutoff; raise the target band");
                }
                std::size_t e = 0;
                for (; e < lists.size(); ++e) {
                    if (++pos[e] < lists[e].terms.size()) break;
                    pos[e] = 0;
                }
                if (e == lists.size()) break;
            }
        }
        op.m.col(col) = column;
    }
    return op;
}

Op mult_op(const ProductSpace &from, const ProductSpace &to, const ProductFunction &f) {
    Op op = Op::zero(from, to);
    for (const auto &term : f.terms) {
        std::vector<Eigen::MatrixXcd> factors;
        for (std::size_t e = 0; e < from.edges.size(); ++e) {
            auto it = term.factors.find(static_cast<int>(e));
            if (it == term.factors.end()) {
                // identity-times-inclusion on untouched edges
                factors.push_back(
                    embed_op(ProductSpace{{from.edges[e]}}, ProductSpace{{to.edges[e]}}).m);
            } else {
                factors.push_back(mult_matrix(from.edges[e], to.edges[e], it->second));
            }
        }
        op.m += term.coeff * kron_all(factors);
    }
    return op;
}

} // namespace holoflux
