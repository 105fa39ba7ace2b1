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

#include "holoflux/algebra_lie.hpp"

#include <cmath>

namespace holoflux {

namespace {

std::vector<int> make_key(const std::vector<std::pair<EntryIdx, EntryIdx>> &per_edge) {
    std::vector<int> key;
    key.reserve(per_edge.size() * 6);
    for (const auto &[h, g] : per_edge) {
        key.push_back(h.label);
        key.push_back(h.m);
        key.push_back(h.n);
        key.push_back(g.label);
        key.push_back(g.m);
        key.push_back(g.n);
    }
    return key;
}

int trivial_label(const Backend *be) {
    return be->kind() == Backend::Kind::finite ? be->irrep_labels().front() : 0;
}

/// One edge's contribution: coefficient times an h-entry and a g-entry.
struct EdgeContribution {
    cx coeff{1.0, 0.0};
    EntryIdx h;
    EntryIdx g;
};

/// Expands (h-function, g-function) PW factors into canonical contributions.
void scatter_pair(const Backend *be, cx coeff, const PWFunction &hf, const PWFunction &gf,
                  std::vector<EdgeContribution> &out) {
    for (const auto &[hl, hc] : hf.coef()) {
        const int dh = be->irrep_dim(hl);
        for (int hm = 0; hm < dh; ++hm)
            for (int hn = 0; hn < dh; ++hn) {
                const cx hv = hc(hm, hn);
                if (hv == cx(0.0)) continue;
                for (const auto &[gl, gc] : gf.coef()) {
                    const int dg = be->irrep_dim(gl);
                    for (int gm = 0; gm < dg; ++gm)
                        for (int gn = 0; gn < dg; ++gn) {
                            const cx gv = gc(gm, gn);
                            if (gv == cx(0.0)) continue;
                            out.push_back(EdgeContribution{coeff * hv * gv, EntryIdx{hl, hm, hn},
                                                           EntryIdx{gl, gm, gn}});
                        }
                }
            }
    }
}

/// Accumulates the cartesian product of per-edge contribution lists.
void accumulate(LieKernel &out, cx base,
                const std::vector<std::vector<EdgeContribution>> &per_edge) {
    for (const auto &lst : per_edge)
        if (lst.empty()) return;
    std::vector<std::size_t> pos(per_edge.size(), 0);
    while (true) {
        cx coeff = base;
        std::vector<std::pair<EntryIdx, EntryIdx>> key(per_edge.size());
        for (std::size_t e = 0; e < per_edge.size(); ++e) {
            const EdgeContribution &c = per_edge[e][pos[e]];
            coeff *= c.coeff;
            key[e] = {c.h, c.g};
        }
        if (coeff != cx(0.0)) out.add(make_key(key), coeff);
        std::size_t e = 0;
        for (; e < per_edge.size(); ++e) {
            if (++pos[e] < per_edge[e].size()) break;
            pos[e] = 0;
        }
        if (e == per_edge.size()) break;
    }
}

std::vector<EdgeContribution> single(const EntryIdx &h, const EntryIdx &g, cx coeff = cx(1.0)) {
    return {EdgeContribution{coeff, h, g}};
}

/// delta^band as per-edge contributions (h side), trivial g.
std::vector<EdgeContribution> delta_contributions(const Backend *be, int band) {
    PWFunction d = PWFunction::delta(be, band);
    std::vector<EdgeContribution> out;
    scatter_pair(be, cx(1.0), d, PWFunction::constant(be, cx(1.0)), out);
    return out;
}

} // namespace

LieKernel LieKernel::delta_identity(const Backend *be, int n_edges, int band) {
    LieKernel k(be, n_edges);
    std::vector<std::vector<EdgeContribution>> per_edge(n_edges, delta_contributions(be, band));
    accumulate(k, cx(1.0), per_edge);
    return k;
}

LieKernel LieKernel::random(const Backend *be, int n_edges, int h_band, int g_band, Rng &rng) {
    LieKernel k(be, n_edges);
    std::vector<EntryIdx> hbasis = pw_basis(be, h_band);
    std::vector<EntryIdx> gbasis = pw_basis(be, g_band);
    std::vector<std::pair<EntryIdx, EntryIdx>> key(n_edges);
    // dense random coefficients over the truncated canonical basis
    std::function<void(int)> walk = [&](int e) {
        if (e == n_edges) {
            cx v(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            k.add(make_key(key), v);
            return;
        }
        for (const auto &h : hbasis)
            for (const auto &g : gbasis) {
                key[e] = {h, g};
                walk(e + 1);
            }
    };
    walk(0);
    return k;
}

void LieKernel::add(const std::vector<int> &key, cx value) {
    if (value == cx(0.0)) return;
    auto it = entries_.find(key);
    if (it == entries_.end())
        entries_.emplace(key, value);
    else {
        it->second += value;
        if (std::abs(it->second) < 1e-300) entries_.erase(it);
    }
}

void LieKernel::cleanup(double tol) {
    for (auto it = entries_.begin(); it != entries_.end();) {
        if (std::abs(it->second) <= tol)
            it = entries_.erase(it);
        else
            ++it;
    }
}

LieKernel &LieKernel::operator+=(const LieKernel &other) {
    for (const auto &[k, v] : other.entries_) add(k, v);
    return *this;
}

LieKernel &LieKernel::operator-=(const LieKernel &other) {
    for (const auto &[k, v] : other.entries_) add(k, -v);
    return *this;
}

LieKernel &LieKernel::operator*=(cx s) {
    for (auto &[k, v] : entries_) v *= s;
    return *this;
}

EntryIdx LieKernel::h_entry(const std::vector<int> &key, int edge) const {
    return EntryIdx{key[6 * edge], key[6 * edge + 1], key[6 * edge + 2]};
}

EntryIdx LieKernel::g_entry(const std::vector<int> &key, int edge) const {
    return EntryIdx{key[6 * edge + 3], key[6 * edge + 4], key[6 * edge + 5]};
}

int LieKernel::h_band(int edge) const {
    int band = 0;
    for (const auto &[k, v] : entries_)
        band = std::max(band, be_->band_of_label(k[6 * edge]));
    return band;
}

int LieKernel::g_band(int edge) const {
    int band = 0;
    for (const auto &[k, v] : entries_)
        band = std::max(band, be_->band_of_label(k[6 * edge + 3]));
    return band;
}

double LieKernel::distance(const LieKernel &other) const {
    double acc = 0.0;
    auto weight = [&](const std::vector<int> &key) {
        double w = 1.0;
        for (int e = 0; e < n_edges_; ++e)
            w /= double(be_->irrep_dim(key[6 * e])) * double(be_->irrep_dim(key[6 * e + 3]));
        return w;
    };
    auto it = entries_.begin();
    auto jt = other.entries_.begin();
    while (it != entries_.end() || jt != other.entries_.end()) {
        if (jt == other.entries_.end() || (it != entries_.end() && it->first < jt->first)) {
            acc += std::norm(it->second) * weight(it->first);
            ++it;
        } else if (it == entries_.end() || jt->first < it->first) {
            acc += std::norm(jt->second) * weight(jt->first);
            ++jt;
        } else {
            acc += std::norm(it->second - jt->second) * weight(it->first);
            ++it;
            ++jt;
        }
    }
    return std::sqrt(acc);
}

double LieKernel::norm() const { return distance(LieKernel(be_, n_edges_)); }

cx LieKernel::eval(const std::vector<GroupElem> &h, const std::vector<GroupElem> &g) const {
    cx acc(0.0, 0.0);
    for (const auto &[key, v] : entries_) {
        cx term = v;
        for (int e = 0; e < n_edges_; ++e) {
            EntryIdx eh = h_entry(key, e), eg = g_entry(key, e);
            term *= be_->irrep_matrix(eh.label, h[e])(eh.m, eh.n);
            term *= be_->irrep_matrix(eg.label, g[e])(eg.m, eg.n);
        }
        acc += term;
    }
    return acc;
}

// ---------------------------------------------------------------------------

namespace {

/// Per-edge single-variable factor of rho_side for one kernel entry.
Eigen::MatrixXcd rho_edge_matrix(const Backend *be, HarmonicCache &cache, Side side,
                                 const EntryIdx &eh, const EntryIdx &eg, const EdgeSpace &fs,
                                 const EdgeSpace &ts) {
    std::vector<EntryIdx> basis = fs.basis();
    Eigen::MatrixXcd conv = Eigen::MatrixXcd::Zero(basis.size(), basis.size());
    if (side == Side::left) {
        for (std::size_t col = 0; col < basis.size(); ++col) {
            const EntryIdx &b = basis[col];
            if (b.label != eh.label || b.m != eh.n) continue;
            EntryIdx target{eh.label, eh.m, b.n};
            for (std::size_t row = 0; row < basis.size(); ++row)
                if (basis[row] == target) {
                    conv(row, col) = 1.0 / be->irrep_dim(eh.label);
                    break;
                }
        }
    } else {
        // D_A Phi_(l,c,d) = sum_k (int A pi^l_kd) Phi_(l,c,k); the integral
        // pairs A with the conjugate representation of l.
        for (std::size_t col = 0; col < basis.size(); ++col) {
            const EntryIdx &b = basis[col];
            for (std::size_t row = 0; row < basis.size(); ++row) {
                const EntryIdx &r = basis[row];
                if (r.label != b.label || r.m != b.m) continue;
                cx t = cache.entry_product_integral(
                    {{eh, false}, {EntryIdx{b.label, r.n, b.n}, false}});
                if (std::abs(t) > 1e-15) conv(row, col) = t;
            }
        }
    }
    return cache.mult_entry_matrix(eg, fs.cutoff, ts.cutoff) * conv;
}

/// Applies A on tensor axis `axis` of a flat vector with the given per-axis
/// dimensions (axis 0 most significant).
Eigen::VectorXcd apply_axis(const Eigen::MatrixXcd &a, const Eigen::VectorXcd &v,
                            const std::vector<int> &dims_in, int axis) {
    int before = 1, after = 1;
    for (int i = 0; i < axis; ++i) before *= dims_in[i];
    for (std::size_t i = axis + 1; i < dims_in.size(); ++i) after *= dims_in[i];
    const int din = dims_in[axis];
    const int dout = static_cast<int>(a.rows());
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(before * dout * after);
    for (int b = 0; b < before; ++b)
        for (int x = 0; x < dout; ++x)
            for (int y = 0; y < din; ++y) {
                const cx w = a(x, y);
                if (w == cx(0.0)) continue;
                const int src_base = (b * din + y) * after;
                const int dst_base = (b * dout + x) * after;
                for (int t = 0; t < after; ++t) out(dst_base + t) += w * v(src_base + t);
            }
    return out;
}

} // namespace

Op lie_rho(Side side, const LieKernel &k, const ProductSpace &from, const ProductSpace &to) {
    const Backend *be = k.backend();
    auto &cache = HarmonicCache::for_backend(be);
    Op op = Op::zero(from, to);
    for (const auto &[key, coeff] : k.entries()) {
        std::vector<Eigen::MatrixXcd> factors;
        for (int e = 0; e < k.n_edges(); ++e) {
            EntryIdx eh = k.h_entry(key, e), eg = k.g_entry(key, e);
            const EdgeSpace &fs = from.edges[e];
            const EdgeSpace &ts = to.edges[e];
            if (be->band_of_label(eh.label) > fs.cutoff ||
                be->band_of_label(eg.label) > std::max(fs.cutoff, ts.cutoff))
                throw CutoffOverflow("kernel band exceeds the Hilbert cutoff; required h-band " +
                                     std::to_string(be->band_of_label(eh.label)) + ", g-band " +
                                     std::to_string(be->band_of_label(eg.label)));
            factors.push_back(rho_edge_matrix(be, cache, side, eh, eg, fs, ts));
        }
        op.m += coeff * kron_all(factors);
    }
    return op;
}

Eigen::VectorXcd lie_rho_apply(Side side, const LieKernel &k, const Eigen::VectorXcd &psi,
                               const ProductSpace &from, const ProductSpace &to) {
    const Backend *be = k.backend();
    auto &cache = HarmonicCache::for_backend(be);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(to.dim());
    for (const auto &[key, coeff] : k.entries()) {
        Eigen::VectorXcd v = psi;
        std::vector<int> dims;
        for (const auto &e : from.edges) dims.push_back(e.dim());
        for (int e = 0; e < k.n_edges(); ++e) {
            EntryIdx eh = k.h_entry(key, e), eg = k.g_entry(key, e);
            if (be->band_of_label(eh.label) > from.edges[e].cutoff) {
                // high delta modes act as zero on the truncated domain
                v.setZero();
                break;
            }
            Eigen::MatrixXcd m =
                rho_edge_matrix(be, cache, side, eh, eg, from.edges[e], to.edges[e]);
            v = apply_axis(m, v, dims, e);
            dims[e] = to.edges[e].dim();
        }
        out += coeff * v;
    }
    return out;
}

namespace {

/// Integral over one copy of G entering the convolution formulas.
cx conv_integral(HarmonicCache &cache, Side side, const EntryIdx &ah, const EntryIdx &bh_half,
                 const EntryIdx &bg_half) {
    if (side == Side::left)
        return cache.entry_product_integral({{ah, false}, {bh_half, true}, {bg_half, true}});
    return cache.entry_product_integral({{ah, false}, {bh_half, true}, {bg_half, false}});
}

} // namespace

LieKernel lie_convolve(Side side, const LieKernel &a, const LieKernel &b) {
    if (a.backend() != b.backend() || a.n_edges() != b.n_edges())
        throw BackendMismatch("convolving kernels on different graphs");
    const Backend *be = a.backend();
    auto &cache = HarmonicCache::for_backend(be);
    LieKernel out(be, a.n_edges());
    for (const auto &[ka, ca] : a.entries()) {
        for (const auto &[kb, cb] : b.entries()) {
            std::vector<std::vector<EdgeContribution>> per_edge(a.n_edges());
            bool dead = false;
            for (int e = 0; e < a.n_edges() && !dead; ++e) {
                EntryIdx ah = a.h_entry(ka, e), ag = a.g_entry(ka, e);
                EntryIdx bh = b.h_entry(kb, e), bg = b.g_entry(kb, e);
                const int dbh = be->irrep_dim(bh.label);
                const int dbg = be->irrep_dim(bg.label);
                std::vector<EdgeContribution> &lst = per_edge[e];
                for (int r = 0; r < dbh; ++r) {
                    for (int s = 0; s < dbg; ++s) {
                        // left: int A(k) B_h(k^-1 .) B_g(k^-1 .);
                        // right: int A(k) B_h(k^-1 .) B_g(. k)
                        cx I = side == Side::left
                                   ? conv_integral(cache, side, ah, EntryIdx{bh.label, bh.m, r},
                                                   EntryIdx{bg.label, bg.m, s})
                                   : conv_integral(cache, side, ah, EntryIdx{bh.label, bh.m, r},
                                                   EntryIdx{bg.label, s, bg.n});
                        if (std::abs(I) < 1e-15) continue;
                        const PWFunction &gprod =
                            side == Side::left
                                ? cache.prod_entry(ag, EntryIdx{bg.label, s, bg.n})
                                : cache.prod_entry(ag, EntryIdx{bg.label, bg.m, s});
                        std::vector<EdgeContribution> tmp;
                        scatter_pair(be, I,
                                     PWFunction::basis(be, bh.label, r, bh.n),
                                     gprod, tmp);
                        for (auto &c : tmp) lst.push_back(c);
                    }
                }
                if (lst.empty()) dead = true;
            }
            if (!dead) accumulate(out, ca * cb, per_edge);
        }
    }
    out.cleanup();
    return out;
}

LieKernel lie_involute(Side side, const LieKernel &k) {
    const Backend *be = k.backend();
    auto &cache = HarmonicCache::for_backend(be);
    LieKernel out(be, k.n_edges());
    for (const auto &[key, c] : k.entries()) {
        std::vector<std::vector<EdgeContribution>> per_edge(k.n_edges());
        for (int e = 0; e < k.n_edges(); ++e) {
            EntryIdx ah = k.h_entry(key, e), ag = k.g_entry(key, e);
            const int dg = be->irrep_dim(ag.label);
            // conj(pi_mn(h^-1)) = pi_nm(h) for unitary irreps
            PWFunction h_base = PWFunction::basis(be, ah.label, ah.n, ah.m);
            for (int kk = 0; kk < dg; ++kk) {
                if (side == Side::left) {
                    // conj F(h^-1, h^-1 g): g-part splits into pi_k,gm(h) conj(pi_k,gn(g))
                    PWFunction hf = h_base.product(PWFunction::basis(be, ag.label, kk, ag.m));
                    const PWFunction &gf = cache.conj_entry(EntryIdx{ag.label, kk, ag.n});
                    scatter_pair(be, cx(1.0), hf, gf, per_edge[e]);
                } else {
                    // conj F(h^-1, g h): conj(pi_gm,k(g)) conj(pi_k,gn(h))
                    PWFunction hf = h_base.product(cache.conj_entry(EntryIdx{ag.label, kk, ag.n}));
                    const PWFunction &gf = cache.conj_entry(EntryIdx{ag.label, ag.m, kk});
                    scatter_pair(be, cx(1.0), hf, gf, per_edge[e]);
                }
            }
        }
        accumulate(out, std::conj(c), per_edge);
    }
    out.cleanup();
    return out;
}

LieKernel lie_iso_I(const LieKernel &k, bool inverse) {
    const Backend *be = k.backend();
    auto &cache = HarmonicCache::for_backend(be);
    LieKernel out(be, k.n_edges());
    for (const auto &[key, c] : k.entries()) {
        std::vector<std::vector<EdgeContribution>> per_edge(k.n_edges());
        for (int e = 0; e < k.n_edges(); ++e) {
            EntryIdx ah = k.h_entry(key, e), ag = k.g_entry(key, e);
            const int dh = be->irrep_dim(ah.label);
            for (int kk = 0; kk < dh; ++kk)
                for (int kp = 0; kp < dh; ++kp) {
                    // I:   pi_hm,k(g)    pi_k,kp(h^-1) pi_kp,hn(g^-1)
                    // I^-1: pi_hm,k(g^-1) pi_k,kp(h^-1) pi_kp,hn(g)
                    PWFunction gleft =
                        inverse ? cache.inv_entry(EntryIdx{ah.label, ah.m, kk})
                                : PWFunction::basis(be, ah.label, ah.m, kk);
                    PWFunction gright =
                        inverse ? PWFunction::basis(be, ah.label, kp, ah.n)
                                : cache.inv_entry(EntryIdx{ah.label, kp, ah.n});
                    PWFunction gf = gleft.product(gright).product(
                        PWFunction::basis(be, ag.label, ag.m, ag.n));
                    const PWFunction &hf = cache.inv_entry(EntryIdx{ah.label, kk, kp});
                    scatter_pair(be, cx(1.0), hf, gf, per_edge[e]);
                }
        }
        accumulate(out, c, per_edge);
    }
    out.cleanup();
    return out;
}

LieKernel lie_gamma_all(const LieKernel &k) {
    const Backend *be = k.backend();
    auto &cache = HarmonicCache::for_backend(be);
    LieKernel out(be, k.n_edges());
    for (const auto &[key, c] : k.entries()) {
        std::vector<std::vector<EdgeContribution>> per_edge(k.n_edges());
        for (int e = 0; e < k.n_edges(); ++e) {
            EntryIdx ah = k.h_entry(key, e), ag = k.g_entry(key, e);
            const int dh = be->irrep_dim(ah.label);
            for (int kk = 0; kk < dh; ++kk)
                for (int kp = 0; kp < dh; ++kp) {
                    // F(g^-1 h^-1 g, g^-1): pi_hm,k(g^-1) pi_k,kp(h^-1) pi_kp,hn(g),
                    // and the original g-entry evaluated at g^-1.
                    PWFunction gf = cache.inv_entry(EntryIdx{ah.label, ah.m, kk})
                                        .product(PWFunction::basis(be, ah.label, kp, ah.n))
                                        .product(cache.inv_entry(ag));
                    const PWFunction &hf = cache.inv_entry(EntryIdx{ah.label, kk, kp});
                    scatter_pair(be, cx(1.0), hf, gf, per_edge[e]);
                }
        }
        accumulate(out, c, per_edge);
    }
    out.cleanup();
    return out;
}

LieKernel lie_fundamental(FundamentalKind kind, const LieKernel &k, int delta_band) {
    const Backend *be = k.backend();
    if (kind == FundamentalKind::gamma_inv) {
        if (k.n_edges() != 1) throw DomainError("gamma acts on single-edge kernels");
        return lie_gamma_all(k);
    }
    if (k.n_edges() != 1) throw DomainError("fundamental morphisms take single-edge kernels");
    auto &cache = HarmonicCache::for_backend(be);
    LieKernel out(be, 2);
    std::vector<EdgeContribution> deltas = delta_contributions(be, delta_band);
    for (const auto &[key, c] : k.entries()) {
        EntryIdx ah = k.h_entry(key, 0), ag = k.g_entry(key, 0);
        const int dg = be->irrep_dim(ag.label);
        std::vector<std::vector<EdgeContribution>> per_edge(2);
        if (kind == FundamentalKind::eta) {
            per_edge[0] = deltas;
            per_edge[1] = single(ah, ag);
            accumulate(out, c, per_edge);
            continue;
        }
        if (kind == FundamentalKind::alpha_left) {
            // delta(h1) F(h2, g2 g1): pi_gm,k(g2) pi_k,gn(g1)
            for (int kk = 0; kk < dg; ++kk) {
                per_edge[0].clear();
                per_edge[1].clear();
                for (const auto &d : deltas)
                    per_edge[0].push_back(
                        EdgeContribution{d.coeff, d.h, EntryIdx{ag.label, kk, ag.n}});
                per_edge[1] = single(ah, EntryIdx{ag.label, ag.m, kk});
                accumulate(out, c, per_edge);
            }
            continue;
        }
        // alpha_right: delta(h2) F(alpha_g2(h1), g2 g1)
        const int dh = be->irrep_dim(ah.label);
        for (int kk = 0; kk < dh; ++kk)
            for (int kp = 0; kp < dh; ++kp)
                for (int s = 0; s < dg; ++s) {
                    PWFunction g2f = PWFunction::basis(be, ah.label, ah.m, kk)
                                         .product(cache.inv_entry(EntryIdx{ah.label, kp, ah.n}))
                                         .product(PWFunction::basis(be, ag.label, ag.m, s));
                    std::vector<std::vector<EdgeContribution>> pe(2);
                    pe[0] = single(EntryIdx{ah.label, kk, kp}, EntryIdx{ag.label, s, ag.n});
                    for (const auto &d : deltas) {
                        std::vector<EdgeContribution> tmp;
                        PWFunction hdelta = PWFunction::basis(be, d.h.label, d.h.m, d.h.n);
                        scatter_pair(be, d.coeff, hdelta, g2f, tmp);
                        for (auto &t : tmp) pe[1].push_back(t);
                    }
                    accumulate(out, c, pe);
                }
    }
    out.cleanup();
    return out;
}

namespace {

/// Token of a kernel word: a holonomy variable, a momentum-side variable or
/// nothing (constants do not occur in witness-induced morphisms).
struct KToken {
    enum class Kind { gvar, hvar } kind;
    int edge;
    int sign;
};

/// Expands pi^entry(word), where tokens reference the h- or g-variable of a
/// fine edge, into per-edge (h factor, g factor) PW pairs.
struct KernelExpansion {
    struct Term {
        cx coeff{1.0, 0.0};
        std::map<int, PWFunction> hfac;
        std::map<int, PWFunction> gfac;
    };
    std::vector<Term> terms;
};

void merge_pw(std::map<int, PWFunction> &fac, int edge, const PWFunction &f) {
    auto it = fac.find(edge);
    if (it == fac.end())
        fac.emplace(edge, f);
    else
        it->second = it->second.product(f);
}

KernelExpansion expand_kernel_entry(const Backend *be, const EntryIdx &entry,
                                    const std::vector<KToken> &word) {
    auto &cache = HarmonicCache::for_backend(be);
    const int d = be->irrep_dim(entry.label);
    KernelExpansion out;
    std::vector<int> ks(word.empty() ? 0 : word.size() - 1, 0);
    auto advance = [&]() {
        for (std::size_t i = 0; i < ks.size(); ++i) {
            if (++ks[i] < d) return true;
            ks[i] = 0;
        }
        return false;
    };
    if (word.empty()) throw DomainError("empty kernel word");
    do {
        KernelExpansion::Term term;
        int row = entry.m;
        for (std::size_t t = 0; t < word.size(); ++t) {
            const int col = (t + 1 == word.size()) ? entry.n : ks[t];
            const KToken &tok = word[t];
            EntryIdx idx{entry.label, row, col};
            if (tok.kind == KToken::Kind::gvar) {
                if (tok.sign > 0)
                    merge_pw(term.gfac, tok.edge, PWFunction::basis(be, idx.label, idx.m, idx.n));
                else
                    merge_pw(term.gfac, tok.edge, cache.inv_entry(idx));
            } else {
                if (tok.sign > 0)
                    merge_pw(term.hfac, tok.edge, PWFunction::basis(be, idx.label, idx.m, idx.n));
                else
                    merge_pw(term.hfac, tok.edge, cache.inv_entry(idx));
            }
            row = col;
        }
        out.terms.push_back(std::move(term));
    } while (advance());
    return out;
}

} // namespace

LieKernel lie_graph_morphism(const RefinementWitness &w, const StructuredGraph &coarse,
                             const StructuredGraph &fine, const LieKernel &k, int delta_band) {
    if (w.policy != WitnessPolicy::left && w.policy != WitnessPolicy::right)
        throw Unsupported("graph morphisms exist only for the left/right policies");
    auto report = validate_witness(w, coarse, fine);
    if (!report.empty())
        throw ValidationError("graph morphism: invalid witness: " + report.front());
    const Backend *be = k.backend();
    const int n_fine = static_cast<int>(fine.edges.size());
    LieKernel out(be, n_fine);
    std::vector<EdgeContribution> deltas = delta_contributions(be, delta_band);
    auto unused = w.unused_fine_edges(fine);

    for (const auto &[key, c] : k.entries()) {
        // Expand each coarse edge's (h, g) entry pair into fine-edge factors,
        // then take the cartesian product over coarse edges.
        std::vector<KernelExpansion> expansions;
        for (std::size_t ce = 0; ce < coarse.edges.size(); ++ce) {
            const EdgeDecomposition &dec = w.decompositions.at(coarse.edges[ce].id);
            const std::size_t m = dec.factors.size();
            const std::size_t dist = w.policy == WitnessPolicy::left ? m - 1 : 0;
            EntryIdx eh = k.h_entry(key, static_cast<int>(ce));
            EntryIdx eg = k.g_entry(key, static_cast<int>(ce));
            // G word: g_m^(s_m) ... g_1^(s_1)
            std::vector<KToken> gword;
            for (std::size_t j = m; j-- > 0;)
                gword.push_back(KToken{KToken::Kind::gvar,
                                       fine.edge_position(dec.factors[j].first),
                                       dec.factors[j].second});
            KernelExpansion gexp = expand_kernel_entry(be, eg, gword);
            // H word: the distinguished slot, conjugated by the suffix for the
            // right policy; a gamma twist replaces h by g^-1 h^-1 g on
            // inverted factors.
            std::vector<KToken> hword;
            const auto &[fid, sgn] = dec.factors[dist];
            const int fpos = fine.edge_position(fid);
            auto push_twisted = [&](int pos, int sign) {
                if (sign > 0) {
                    hword.push_back(KToken{KToken::Kind::hvar, pos, 1});
                } else {
                    hword.push_back(KToken{KToken::Kind::gvar, pos, -1});
                    hword.push_back(KToken{KToken::Kind::hvar, pos, -1});
                    hword.push_back(KToken{KToken::Kind::gvar, pos, 1});
                }
            };
            if (w.policy == WitnessPolicy::left) {
                push_twisted(fpos, sgn);
            } else {
                // alpha_(S)(h~_1) with S = g_m^(s_m) ... g_2^(s_2)
                for (std::size_t j = m; j-- > 1;)
                    hword.push_back(KToken{KToken::Kind::gvar,
                                           fine.edge_position(dec.factors[j].first),
                                           dec.factors[j].second});
                push_twisted(fpos, sgn);
                for (std::size_t j = 1; j < m; ++j)
                    hword.push_back(KToken{KToken::Kind::gvar,
                                           fine.edge_position(dec.factors[j].first),
                                           -dec.factors[j].second});
            }
            KernelExpansion hexp = expand_kernel_entry(be, eh, hword);
            // combine h- and g-expansions of this coarse edge
            KernelExpansion combined;
            for (const auto &gt : gexp.terms)
                for (const auto &ht : hexp.terms) {
                    KernelExpansion::Term t;
                    t.coeff = gt.coeff * ht.coeff;
                    t.hfac = ht.hfac;
                    t.gfac = gt.gfac;
                    for (const auto &[edge, f] : ht.gfac) merge_pw(t.gfac, edge, f);
                    combined.terms.push_back(std::move(t));
                }
            // delta factors on the non-distinguished slots
            for (std::size_t j = 0; j < m; ++j) {
                if (j == dist) continue;
                const int pos = fine.edge_position(dec.factors[j].first);
                for (auto &t : combined.terms)
                    merge_pw(t.hfac, pos, PWFunction::delta(be, delta_band));
            }
            expansions.push_back(std::move(combined));
        }
        // cartesian product over coarse edges; then scatter per fine edge
        std::vector<std::size_t> pos(expansions.size(), 0);
        bool any_empty = false;
        for (const auto &ex : expansions)
            if (ex.terms.empty()) any_empty = true;
        if (any_empty) continue;
        while (true) {
            cx coeff = c;
            std::map<int, PWFunction> hfac, gfac;
            for (std::size_t ce = 0; ce < expansions.size(); ++ce) {
                const auto &t = expansions[ce].terms[pos[ce]];
                coeff *= t.coeff;
                for (const auto &[edge, f] : t.hfac) merge_pw(hfac, edge, f);
                for (const auto &[edge, f] : t.gfac) merge_pw(gfac, edge, f);
            }
            if (coeff != cx(0.0)) {
                std::vector<std::vector<EdgeContribution>> per_edge(n_fine);
                for (int e = 0; e < n_fine; ++e) {
                    PWFunction hf = PWFunction::constant(be, cx(1.0));
                    PWFunction gf = hf;
                    auto hit = hfac.find(e);
                    if (hit != hfac.end()) hf = hit->second;
                    auto git = gfac.find(e);
                    if (git != gfac.end()) gf = git->second;
                    // every fine edge outside any decomposition carries a
                    // delta factor (the eta embedding)
                    bool is_unused = false;
                    for (const auto &uid : unused)
                        if (fine.edge_position(uid) == e) is_unused = true;
                    if (is_unused) hf = hf.product(PWFunction::delta(be, delta_band));
                    scatter_pair(be, cx(1.0), hf, gf, per_edge[e]);
                }
                accumulate(out, coeff, per_edge);
            }
            std::size_t e = 0;
            for (; e < expansions.size(); ++e) {
                if (++pos[e] < expansions[e].terms.size()) break;
                pos[e] = 0;
            }
            if (e == expansions.size()) break;
        }
    }
    out.cleanup();
    return out;
}

LieKernel lie_gauge_kernel(const std::map<std::string, GroupElem> &lambda,
                           const StructuredGraph &g, const LieKernel &k) {
    const Backend *be = k.backend();
    LieKernel out(be, k.n_edges());
    for (const auto &[key, c] : k.entries()) {
        std::vector<std::vector<EdgeContribution>> per_edge(k.n_edges());
        for (int e = 0; e < k.n_edges(); ++e) {
            EntryIdx ah = k.h_entry(key, e), ag = k.g_entry(key, e);
            const GroupElem &lt = lambda.at(g.edges[e].dst);
            const GroupElem &ls = lambda.at(g.edges[e].src);
            GroupElem lti = be->invert(lt);
            // h -> lt^-1 h lt, g -> lt^-1 g ls, as coefficient transforms
            PWFunction hf = PWFunction::basis(be, ah.label, ah.m, ah.n)
                                .left_translated(lti)
                                .right_translated(lt);
            PWFunction gf = PWFunction::basis(be, ag.label, ag.m, ag.n)
                                .left_translated(lti)
                                .right_translated(ls);
            scatter_pair(be, cx(1.0), hf, gf, per_edge[e]);
        }
        accumulate(out, c, per_edge);
    }
    out.cleanup();
    return out;
}

cx lie_haar_state(const LieKernel &k) {
    const Backend *be = k.backend();
    const int triv = trivial_label(be);
    cx acc(0.0, 0.0);
    for (const auto &[key, c] : k.entries()) {
        bool all_trivial = true;
        for (int e = 0; e < k.n_edges() && all_trivial; ++e)
            all_trivial = key[6 * e] == triv && key[6 * e + 3] == triv;
        if (all_trivial) acc += c;
    }
    return acc;
}

Op lie_refinement_isometry(const RefinementWitness &w, const StructuredGraph &coarse,
                           const StructuredGraph &fine, const ProductSpace &coarse_space,
                           const ProductSpace &fine_space) {
    auto report = validate_witness(w, coarse, fine);
    if (!report.empty())
        throw ValidationError("refinement isometry: invalid witness: " + report.front());
    WordMap map;
    for (const auto &ce : coarse.edges) {
        const EdgeDecomposition &dec = w.decompositions.at(ce.id);
        std::vector<WordToken> word;
        for (std::size_t j = dec.factors.size(); j-- > 0;)
            word.push_back(
                WordToken::var(fine.edge_position(dec.factors[j].first), dec.factors[j].second));
        map.source_words.push_back(std::move(word));
    }
    return pullback_op(coarse_space, fine_space, map);
}

Op lie_unitary_iota(const ProductSpace &from, const ProductSpace &to) {
    WordMap map;
    for (std::size_t e = 0; e < from.edges.size(); ++e)
        map.source_words.push_back({WordToken::var(static_cast<int>(e), -1)});
    return pullback_op(from, to, map);
}

Op lie_unitary_alpha(Side which, const ProductSpace &from, const ProductSpace &to) {
    // tuple order [initial = 0, terminal = 1]
    WordMap map;
    if (which == Side::left) {
        // (U Psi)(g2, g1) = Psi(g2 g1, g1): source initial slot reads g1,
        // source terminal slot reads g2 g1
        map.source_words.push_back({WordToken::var(0, 1)});
        map.source_words.push_back({WordToken::var(1, 1), WordToken::var(0, 1)});
    } else {
        // (U Psi)(g2, g1) = Psi(g2, g2 g1)
        map.source_words.push_back({WordToken::var(1, 1), WordToken::var(0, 1)});
        map.source_words.push_back({WordToken::var(1, 1)});
    }
    return pullback_op(from, to, map);
}

Op lie_gauge_unitary(const std::map<std::string, GroupElem> &lambda, const StructuredGraph &g,
                     const ProductSpace &from, const ProductSpace &to) {
    const Backend *be = from.edges.front().be;
    WordMap map;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        GroupElem lti = be->invert(lambda.at(g.edges[e].dst));
        map.source_words.push_back({WordToken::cst(lti), WordToken::var(static_cast<int>(e), 1),
                                    WordToken::cst(lambda.at(g.edges[e].src))});
    }
    return pullback_op(from, to, map);
}

Op lie_translation_unitary(const std::vector<GroupElem> &tuple, const ProductSpace &from,
                           const ProductSpace &to) {
    const Backend *be = from.edges.front().be;
    WordMap map;
    for (std::size_t e = 0; e < tuple.size(); ++e)
        map.source_words.push_back(
            {WordToken::cst(be->invert(tuple[e])), WordToken::var(static_cast<int>(e), 1)});
    return pullback_op(from, to, map);
}

} // namespace holoflux
