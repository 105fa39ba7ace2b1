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

#include "holoflux/phase.hpp"

#include <algorithm>
#include <cmath>

#include "holoflux/hilbert.hpp"

namespace holoflux {

const std::pair<CoAlgElem, GroupElem> &PhasePoint::at(const std::string &edge) const {
    auto it = data.find(edge);
    if (it == data.end()) throw ValidationError("phase point has no edge '" + edge + "'");
    return it->second;
}

PhasePoint PhasePoint::random(const Backend *be, const StructuredGraph &g, Rng &rng,
                              double theta_scale) {
    PhasePoint p;
    p.be = be;
    for (const auto &e : g.edges) {
        Eigen::VectorXd theta(be->alg_dim());
        for (int a = 0; a < be->alg_dim(); ++a) theta(a) = theta_scale * rng.uniform(-1.0, 1.0);
        p.data[e.id] = {be->coalg(theta), be->random_element(rng)};
    }
    return p;
}

CylFunction CylFunction::constant(const Backend *be, const StructuredGraph &g, cx value) {
    std::vector<std::string> ids;
    for (const auto &e : g.edges) ids.push_back(e.id);
    CylFunction f(be, std::move(ids));
    CylTerm t;
    t.coeff = value;
    f.terms_.push_back(std::move(t));
    f.atomic_ = true;
    return f;
}

CylFunction CylFunction::momentum(const Backend *be, const StructuredGraph &g,
                                  const std::string &edge, const AlgElem &x) {
    if (!be->is_lie()) throw Unsupported("momentum functionals need a Lie backend");
    CylFunction f = constant(be, g, cx(0.0));
    f.terms_.clear();
    for (int a = 0; a < be->alg_dim(); ++a) {
        if (x.x(a) == 0.0) continue;
        CylTerm t;
        t.coeff = x.x(a);
        t.mono[{edge, a}] = 1;
        f.terms_.push_back(std::move(t));
    }
    f.atomic_ = true;
    return f;
}

CylFunction CylFunction::theta_coordinate(const Backend *be, const StructuredGraph &g,
                                          const std::string &edge, int axis) {
    return momentum(be, g, edge, be->alg_basis(axis));
}

CylFunction CylFunction::group_factor(const Backend *be, const StructuredGraph &g,
                                      const std::string &edge, const PWFunction &fn) {
    CylFunction f = constant(be, g, cx(0.0));
    f.terms_.clear();
    CylTerm t;
    t.gfac[edge] = fn;
    f.terms_.push_back(std::move(t));
    f.canonicalize();
    return f;
}

int CylFunction::theta_degree() const {
    int deg = 0;
    for (const auto &t : terms_) {
        int d = 0;
        for (const auto &[k, p] : t.mono) d += p;
        deg = std::max(deg, d);
    }
    return deg;
}

cx CylFunction::eval(const PhasePoint &p) const {
    // Irrep matrices per (edge, label) are shared across all terms of one
    // evaluation; caching them makes large canonical sums cheap.
    std::map<std::pair<std::string, int>, Eigen::MatrixXcd> mats;
    auto irrep_at = [&](const std::string &edge, int label) -> const Eigen::MatrixXcd & {
        auto key = std::make_pair(edge, label);
        auto it = mats.find(key);
        if (it == mats.end())
            it = mats.emplace(key, be_->irrep_matrix(label, p.at(edge).second)).first;
        return it->second;
    };
    cx acc(0.0, 0.0);
    for (const auto &t : terms_) {
        cx v = t.coeff;
        for (const auto &[key, pw] : t.mono) {
            const double th = p.at(key.first).first.theta(key.second);
            for (int k = 0; k < pw; ++k) v *= th;
        }
        for (const auto &[edge, f] : t.gfac) {
            cx fval(0.0, 0.0);
            for (const auto &[l, c] : f.coef())
                fval += (c.cwiseProduct(irrep_at(edge, l))).sum();
            v *= fval;
        }
        acc += v;
    }
    return acc;
}

CylFunction &CylFunction::operator+=(const CylFunction &other) {
    if (be_ == nullptr) {
        be_ = other.be_;
        edge_ids_ = other.edge_ids_;
        atomic_ = true;
    }
    atomic_ = atomic_ && other.atomic_;
    for (const auto &t : other.terms_) terms_.push_back(t);
    return *this;
}

CylFunction &CylFunction::operator*=(cx s) {
    for (auto &t : terms_) t.coeff *= s;
    return *this;
}

CylFunction CylFunction::product(const CylFunction &other) const {
    if (atomic_ && other.atomic_) return fused_product(other);
    CylFunction out(be_, edge_ids_);
    for (const auto &ta : terms_) {
        for (const auto &tb : other.terms_) {
            CylTerm t;
            t.coeff = ta.coeff * tb.coeff;
            if (t.coeff == cx(0.0)) continue;
            t.mono = ta.mono;
            for (const auto &[k, p] : tb.mono) t.mono[k] += p;
            t.gfac = ta.gfac;
            for (const auto &[edge, f] : tb.gfac) {
                auto it = t.gfac.find(edge);
                if (it == t.gfac.end())
                    t.gfac.emplace(edge, f);
                else
                    it->second = it->second.product(f);
            }
            out.terms_.push_back(std::move(t));
        }
    }
    out.canonicalize();
    return out;
}

CylFunction CylFunction::fused_product(const CylFunction &other) const {
    auto &cache = HarmonicCache::for_backend(be_);
    std::map<std::string, int> edge_pos;
    for (std::size_t i = 0; i < edge_ids_.size(); ++i)
        edge_pos[edge_ids_[i]] = static_cast<int>(i);
    auto only_entry = [](const PWFunction &f) {
        for (const auto &[l, c] : f.coef())
            for (int m = 0; m < c.rows(); ++m)
                for (int n = 0; n < c.cols(); ++n)
                    if (c(m, n) != cx(0.0)) return std::make_pair(EntryIdx{l, m, n}, c(m, n));
        return std::make_pair(EntryIdx{0, 0, 0}, cx(0.0));
    };
    std::map<std::vector<int>, cx> merged;
    static const std::vector<std::pair<EntryIdx, cx>> kEmpty;
    for (const auto &ta : terms_) {
        for (const auto &tb : other.terms_) {
            cx coeff0 = ta.coeff * tb.coeff;
            if (coeff0 == cx(0.0)) continue;
            ThetaMono mono = ta.mono;
            for (const auto &[k, p] : tb.mono) mono[k] += p;
            std::vector<int> base;
            base.push_back(static_cast<int>(mono.size()));
            for (const auto &[k, p] : mono) {
                base.push_back(edge_pos.at(k.first));
                base.push_back(k.second);
                base.push_back(p);
            }
            // per-edge entry options, edges in interned order
            std::vector<int> edges;
            std::vector<std::pair<EntryIdx, cx>> fixed; // single-option slots
            std::vector<int> multi_edges;
            std::vector<const std::vector<std::pair<EntryIdx, cx>> *> multi;
            bool dead = false;
            for (std::size_t e = 0; e < edge_ids_.size() && !dead; ++e) {
                auto ia = ta.gfac.find(edge_ids_[e]);
                auto ib = tb.gfac.find(edge_ids_[e]);
                if (ia == ta.gfac.end() && ib == tb.gfac.end()) continue;
                if (ia != ta.gfac.end() && ib != tb.gfac.end()) {
                    auto [ea, cea] = only_entry(ia->second);
                    auto [eb, ceb] = only_entry(ib->second);
                    coeff0 *= cea * ceb;
                    const auto &opts = cache.prod_entry_sparse(ea, eb);
                    if (opts.empty()) dead = true;
                    multi_edges.push_back(static_cast<int>(e));
                    multi.push_back(&opts);
                } else {
                    const PWFunction &f = ia != ta.gfac.end() ? ia->second : ib->second;
                    auto [ee, cee] = only_entry(f);
                    coeff0 *= cee;
                    edges.push_back(static_cast<int>(e));
                    fixed.push_back({ee, cx(1.0)});
                }
            }
            if (dead || coeff0 == cx(0.0)) continue;
            // cartesian over the multi-option edges
            std::vector<std::size_t> pos(multi.size(), 0);
            while (true) {
                cx coeff = coeff0;
                std::vector<std::pair<int, EntryIdx>> slots;
                for (std::size_t i = 0; i < fixed.size(); ++i)
                    slots.push_back({edges[i], fixed[i].first});
                for (std::size_t i = 0; i < multi.size(); ++i) {
                    const auto &[idx, c] = (*multi[i])[pos[i]];
                    coeff *= c;
                    slots.push_back({multi_edges[i], idx});
                }
                std::sort(slots.begin(), slots.end(),
                          [](const auto &x, const auto &y) { return x.first < y.first; });
                std::vector<int> key = base;
                for (const auto &[e, idx] : slots) {
                    key.push_back(e);
                    key.push_back(idx.label);
                    key.push_back(idx.m);
                    key.push_back(idx.n);
                }
                merged[key] += coeff;
                std::size_t i = 0;
                for (; i < multi.size(); ++i) {
                    if (++pos[i] < multi[i]->size()) break;
                    pos[i] = 0;
                }
                if (i == multi.size() || multi.empty()) break;
            }
        }
    }
    CylFunction out(be_, edge_ids_);
    out.materialize(merged);
    return out;
}

void CylFunction::materialize(const std::map<std::vector<int>, cx> &merged) {
    terms_.clear();
    for (const auto &[key, coeff] : merged) {
        if (std::abs(coeff) <= 1e-15) continue;
        CylTerm t;
        t.coeff = coeff;
        const int n_mono = key[0];
        std::size_t at = 1;
        for (int i = 0; i < n_mono; ++i) {
            t.mono[{edge_ids_[key[at]], key[at + 1]}] = key[at + 2];
            at += 3;
        }
        while (at < key.size()) {
            t.gfac[edge_ids_[key[at]]] =
                PWFunction::basis(be_, key[at + 1], key[at + 2], key[at + 3]);
            at += 4;
        }
        terms_.push_back(std::move(t));
    }
    atomic_ = true;
}

void CylFunction::canonicalize() {
    // Flat integer keys (edges interned to positions) keep the merge cheap:
    // [n_mono, (edge, axis, pow)..., (edge, label, m, n)...]
    std::map<std::string, int> edge_pos;
    for (std::size_t i = 0; i < edge_ids_.size(); ++i)
        edge_pos[edge_ids_[i]] = static_cast<int>(i);
    std::map<std::vector<int>, cx> merged;
    for (const auto &term : terms_) {
        std::vector<int> base;
        base.push_back(static_cast<int>(term.mono.size()));
        for (const auto &[k, p] : term.mono) {
            base.push_back(edge_pos.at(k.first));
            base.push_back(k.second);
            base.push_back(p);
        }
        // cartesian expansion of the per-edge factors into single entries
        std::vector<int> edges;
        std::vector<std::vector<std::pair<std::array<int, 3>, cx>>> options;
        for (const auto &[edge, f] : term.gfac) {
            std::vector<std::pair<std::array<int, 3>, cx>> opts;
            for (const auto &[l, c] : f.coef())
                for (int m = 0; m < c.rows(); ++m)
                    for (int n = 0; n < c.cols(); ++n)
                        if (c(m, n) != cx(0.0))
                            opts.push_back({{l, m, n}, c(m, n)});
            edges.push_back(edge_pos.at(edge));
            options.push_back(std::move(opts));
        }
        bool dead = false;
        for (const auto &o : options)
            if (o.empty()) dead = true;
        if (dead) continue;
        std::vector<std::size_t> pos(options.size(), 0);
        while (true) {
            cx coeff = term.coeff;
            std::vector<int> key = base;
            for (std::size_t e = 0; e < options.size(); ++e) {
                const auto &[idx, c] = options[e][pos[e]];
                coeff *= c;
                key.push_back(edges[e]);
                key.push_back(idx[0]);
                key.push_back(idx[1]);
                key.push_back(idx[2]);
            }
            merged[key] += coeff;
            std::size_t e = 0;
            for (; e < options.size(); ++e) {
                if (++pos[e] < options[e].size()) break;
                pos[e] = 0;
            }
            if (e == options.size()) break;
        }
    }
    materialize(merged);
}

CylFunction CylFunction::partial_theta(const std::string &edge, int axis) const {
    CylFunction out(be_, edge_ids_);
    const std::pair<std::string, int> key{edge, axis};
    for (const auto &t : terms_) {
        auto it = t.mono.find(key);
        if (it == t.mono.end()) continue;
        CylTerm d = t;
        d.coeff *= static_cast<double>(it->second);
        if (it->second == 1)
            d.mono.erase(key);
        else
            d.mono[key] -= 1;
        out.terms_.push_back(std::move(d));
    }
    out.atomic_ = atomic_;
    return out;
}

CylFunction CylFunction::right_invariant_derivative(const std::string &edge, int axis) const {
    if (!be_->is_lie()) throw Unsupported("right-invariant derivative needs a Lie backend");
    CylFunction out(be_, edge_ids_);
    for (const auto &t : terms_) {
        auto it = t.gfac.find(edge);
        if (it == t.gfac.end()) continue; // constant in this edge's holonomy
        CylTerm d = t;
        d.gfac[edge] = it->second.right_invariant_derivative(axis);
        if (d.gfac[edge].empty()) continue;
        out.terms_.push_back(std::move(d));
    }
    out.canonicalize();
    return out;
}

CylFunction poisson_bracket(const CylFunction &f, const CylFunction &fp) {
    const Backend *be = f.backend();
    if (!be->is_lie()) throw Unsupported("Poisson bracket needs a Lie backend");
    if (f.edge_ids() != fp.edge_ids())
        throw ValidationError("Poisson bracket of functions on different graphs");
    CylFunction out(be, f.edge_ids());
    const auto &fabc = be->structure_constants();
    const int n = be->alg_dim();
    for (const auto &edge : f.edge_ids()) {
        for (int a = 0; a < n; ++a) {
            CylFunction fa = f.partial_theta(edge, a);
            CylFunction fpa = fp.partial_theta(edge, a);
            if (!fa.empty()) out += fa.product(fp.right_invariant_derivative(edge, a));
            if (!fpa.empty()) out += cx(-1.0) * fpa.product(f.right_invariant_derivative(edge, a));
        }
        // - theta([d_theta f, d_theta f']) = - sum_abc f_ab^c theta_c df_a df'_b
        for (int a = 0; a < n; ++a) {
            CylFunction fa = f.partial_theta(edge, a);
            if (fa.empty()) continue;
            for (int b = 0; b < n; ++b) {
                CylFunction fpb = fp.partial_theta(edge, b);
                if (fpb.empty()) continue;
                for (int c = 0; c < n; ++c) {
                    const double fab = fabc[a][b][c];
                    if (fab == 0.0) continue;
                    CylFunction thc =
                        CylFunction::theta_coordinate(be, StructuredGraph{}, edge, c);
                    // theta_coordinate built a function over an empty graph;
                    // rebuild with the right edge list.
                    CylFunction term(be, f.edge_ids());
                    CylTerm t;
                    t.coeff = -fab;
                    t.mono[{edge, c}] = 1;
                    term.push_term(std::move(t));
                    out += term.product(fa).product(fpb);
                }
            }
        }
    }
    out.canonicalize();
    return out;
}

double sup_norm_sampled(const CylFunction &f, const StructuredGraph &g, Rng &rng, int samples,
                        double theta_scale) {
    double sup = 0.0;
    for (int i = 0; i < samples; ++i) {
        PhasePoint p = PhasePoint::random(f.backend(), g, rng, theta_scale);
        sup = std::max(sup, std::abs(f.eval(p)));
    }
    return sup;
}

namespace {

std::pair<CoAlgElem, GroupElem> signed_factor(const Backend *be,
                                              const std::pair<CoAlgElem, GroupElem> &pg,
                                              int sign) {
    if (sign > 0) return pg;
    GroupElem gi = be->invert(pg.second);
    if (be->alg_dim() == 0) return {pg.first, gi};
    CoAlgElem th = be->coad(gi, pg.first);
    th.theta = -th.theta;
    return {th, gi};
}

} // namespace

PhasePoint project_point(const RefinementWitness &w, const StructuredGraph &coarse,
                         const StructuredGraph &fine, const PhasePoint &fine_point) {
    auto report = validate_witness(w, coarse, fine);
    if (!report.empty()) throw ValidationError("project_point: invalid witness: " + report.front());
    const Backend *be = fine_point.be;
    PhasePoint out;
    out.be = be;
    for (const auto &ce : coarse.edges) {
        const EdgeDecomposition &dec = w.decompositions.at(ce.id);
        const std::size_t m = dec.factors.size();
        std::vector<std::pair<CoAlgElem, GroupElem>> fac(m);
        for (std::size_t k = 0; k < m; ++k)
            fac[k] = signed_factor(be, fine_point.at(dec.factors[k].first), dec.factors[k].second);
        // group part g_m^(s_m) ... g_1^(s_1)
        GroupElem g = fac[m - 1].second;
        for (std::size_t k = m - 1; k-- > 0;) g = be->multiply(g, fac[k].second);
        // momentum part: theta = sum_k c_k CoAd(g_m ... g_{k+1}) theta_k
        CoAlgElem theta = be->coalg(Eigen::VectorXd::Zero(be->alg_dim()));
        if (be->alg_dim() > 0) {
            GroupElem suffix = be->identity();
            for (std::size_t k = m; k-- > 0;) {
                // suffix currently equals g_m^(s_m) ... g_{k+2}^(s_{k+2}); update
                // to include factor k+1 before using it for factor k.
                if (k + 1 < m) suffix = be->multiply(suffix, fac[k + 1].second);
                CoAlgElem rotated = be->coad(suffix, fac[k].first);
                theta.theta += dec.weights[k] * rotated.theta;
            }
        }
        out.data[ce.id] = {theta, g};
    }
    return out;
}

PhasePoint invert_point(const PhasePoint &p) {
    PhasePoint out;
    out.be = p.be;
    for (const auto &[edge, pg] : p.data) out.data[edge] = signed_factor(p.be, pg, -1);
    return out;
}

namespace {

/// Pullback of a theta coordinate theta_(e,a) on the coarse graph: a
/// theta-degree-1 cylindrical function on the fine graph with adjoint-entry
/// coefficient functions.
CylFunction pullback_theta(const Backend *be, const std::vector<std::string> &fine_ids,
                           const EdgeDecomposition &dec, int axis) {
    auto &cache = HarmonicCache::for_backend(be);
    const int n = be->alg_dim();
    const std::size_t m = dec.factors.size();
    CylFunction out(be, fine_ids);
    for (std::size_t k = 0; k < m; ++k) {
        if (dec.weights[k] == 0.0) continue;
        // CoAd(g_m^(s_m) ... g_{k+1}^(s_{k+1}))_(axis, b): expand the matrix
        // product over intermediate indices; each factor is an adjoint entry
        // of one fine edge.
        std::vector<std::size_t> chain;
        for (std::size_t j = m; j-- > k + 1;) chain.push_back(j);
        std::vector<int> idx(chain.size() + 1); // index path, idx[0] = axis
        std::function<void(std::size_t)> recurse = [&](std::size_t depth) {
            if (depth == chain.size()) {
                const int b = idx[depth];
                // theta part of factor k, sign-adjusted
                const auto &[fid, sign] = dec.factors[k];
                if (sign > 0) {
                    CylTerm t;
                    t.coeff = dec.weights[k];
                    t.mono[{fid, b}] = 1;
                    for (std::size_t c = 0; c < chain.size(); ++c) {
                        const auto &[cid, csign] = dec.factors[chain[c]];
                        t.gfac[cid] = cache.adjoint_entry(idx[c], idx[c + 1], csign < 0);
                    }
                    CylFunction term(be, fine_ids);
                    term.push_term(std::move(t));
                    out += term;
                } else {
                    // iota on factor k: theta_k = -CoAd(g_k^-1) theta, i.e.
                    // -(R(g_k^-1))_(b,c) theta_c
                    for (int c = 0; c < n; ++c) {
                        CylTerm t;
                        t.coeff = -dec.weights[k];
                        t.mono[{fid, c}] = 1;
                        for (std::size_t cc = 0; cc < chain.size(); ++cc) {
                            const auto &[cid, csign] = dec.factors[chain[cc]];
                            t.gfac[cid] = cache.adjoint_entry(idx[cc], idx[cc + 1], csign < 0);
                        }
                        PWFunction adj = cache.adjoint_entry(b, c, true);
                        auto it = t.gfac.find(fid);
                        if (it == t.gfac.end())
                            t.gfac.emplace(fid, adj);
                        else
                            it->second = it->second.product(adj);
                        CylFunction term(be, fine_ids);
                        term.push_term(std::move(t));
                        out += term;
                    }
                }
                return;
            }
            for (int b = 0; b < n; ++b) {
                idx[depth + 1] = b;
                recurse(depth + 1);
            }
        };
        idx[0] = axis;
        recurse(0);
    }
    return out;
}

/// Pullback of a single-edge group factor along the decomposition word.
CylFunction pullback_group_factor(const Backend *be, const std::vector<std::string> &fine_ids,
                                  const StructuredGraph &fine, const EdgeDecomposition &dec,
                                  const PWFunction &f) {
    std::vector<WordToken> word;
    for (std::size_t k = dec.factors.size(); k-- > 0;)
        word.push_back(WordToken::var(fine.edge_position(dec.factors[k].first),
                                      dec.factors[k].second));
    CylFunction out(be, fine_ids);
    for (const auto &[l, c] : f.coef()) {
        const int d = be->irrep_dim(l);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (c(i, j) == cx(0.0)) continue;
                WordExpansion exp = expand_entry_word(be, EntryIdx{l, i, j}, word);
                for (const auto &term : exp.terms) {
                    CylTerm t;
                    t.coeff = c(i, j) * term.coeff;
                    for (const auto &[edge_pos, pw] : term.factors)
                        t.gfac[fine.edges[edge_pos].id] = pw;
                    CylFunction add(be, fine_ids);
                    add.push_term(std::move(t));
                    out += add;
                }
            }
    }
    return out;
}

} // namespace

CylFunction pullback_cyl(const RefinementWitness &w, const StructuredGraph &coarse,
                         const StructuredGraph &fine, const CylFunction &f) {
    auto report = validate_witness(w, coarse, fine);
    if (!report.empty()) throw ValidationError("pullback_cyl: invalid witness: " + report.front());
    const Backend *be = f.backend();
    std::vector<std::string> fine_ids;
    for (const auto &e : fine.edges) fine_ids.push_back(e.id);
    CylFunction out(be, fine_ids);
    for (const auto &term : f.terms()) {
        CylFunction acc = CylFunction(be, fine_ids);
        CylTerm unit;
        unit.coeff = term.coeff;
        acc.push_term(std::move(unit));
        for (const auto &[key, power] : term.mono) {
            CylFunction th = pullback_theta(be, fine_ids, w.decompositions.at(key.first), key.second);
            for (int p = 0; p < power; ++p) acc = acc.product(th);
        }
        for (const auto &[edge, pw] : term.gfac)
            acc = acc.product(
                pullback_group_factor(be, fine_ids, fine, w.decompositions.at(edge), pw));
        out += acc;
    }
    out.canonicalize();
    return out;
}

CylFunction pullback_inversion(const CylFunction &f) {
    const Backend *be = f.backend();
    auto &cache = HarmonicCache::for_backend(be);
    CylFunction out(be, f.edge_ids());
    const int n = be->alg_dim();
    for (const auto &term : f.terms()) {
        CylFunction acc(be, f.edge_ids());
        CylTerm unit;
        unit.coeff = term.coeff;
        acc.push_term(std::move(unit));
        for (const auto &[key, power] : term.mono) {
            // theta_(e,a) o iota = -(R(g_e^-1))_(a,c) theta_(e,c)
            CylFunction th(be, f.edge_ids());
            for (int c = 0; c < n; ++c) {
                CylTerm t;
                t.coeff = -1.0;
                t.mono[{key.first, c}] = 1;
                t.gfac[key.first] = cache.adjoint_entry(key.second, c, true);
                th.push_term(std::move(t));
            }
            for (int p = 0; p < power; ++p) acc = acc.product(th);
        }
        for (const auto &[edge, pw] : term.gfac) {
            CylFunction gf(be, f.edge_ids());
            CylTerm t;
            t.gfac[edge] = pw.arg_inverted();
            gf.push_term(std::move(t));
            acc = acc.product(gf);
        }
        out += acc;
    }
    out.canonicalize();
    return out;
}

} // namespace holoflux
