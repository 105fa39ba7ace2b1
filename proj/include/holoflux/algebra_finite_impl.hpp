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

namespace holoflux {

namespace detail {

template <typename T> T inv_int(int k);
template <> inline RatCx inv_int<RatCx>(int k) { return RatCx(Rat(1, k)); }
template <> inline cx inv_int<cx>(int k) { return cx(1.0 / k, 0.0); }

inline std::vector<int> tuple_mul(const FiniteBackend *be, const std::vector<int> &a,
                                  const std::vector<int> &b) {
    std::vector<int> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = be->mul_index(a[i], b[i]);
    return r;
}

inline std::vector<int> tuple_inv(const FiniteBackend *be, const std::vector<int> &a) {
    std::vector<int> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = be->inv_index(a[i]);
    return r;
}

} // namespace detail

template <typename T> FiniteOp<T> finite_rho(Side side, const FiniteKernel<T> &k) {
    const FiniteBackend *be = k.be;
    TupleIndex ti = k.tuples();
    FiniteOp<T> op = FiniteOp<T>::zero(be, k.n_edges, k.n_edges);
    const T w = detail::inv_int<T>(ti.size());
    for (int g = 0; g < ti.size(); ++g) {
        std::vector<int> gt = ti.unflatten(g);
        for (int gp = 0; gp < ti.size(); ++gp) {
            std::vector<int> gpt = ti.unflatten(gp);
            std::vector<int> ht(k.n_edges);
            for (int e = 0; e < k.n_edges; ++e) {
                if (side == Side::left)
                    ht[e] = be->mul_index(gt[e], be->inv_index(gpt[e])); // h = g g'^-1
                else
                    ht[e] = be->mul_index(be->inv_index(gt[e]), gpt[e]); // h = g^-1 g'
            }
            const T &val = k.at(ti.flatten(ht), g);
            if (!is_zero_of(val)) op.at(g, gp) = val * w;
        }
    }
    return op;
}

template <typename T>
FiniteKernel<T> finite_convolve(Side side, const FiniteKernel<T> &a, const FiniteKernel<T> &b) {
    if (a.be != b.be || a.n_edges != b.n_edges)
        throw BackendMismatch("convolution of kernels on different graphs");
    const FiniteBackend *be = a.be;
    TupleIndex ti = a.tuples();
    FiniteKernel<T> out = FiniteKernel<T>::zero(be, a.n_edges);
    const T w = detail::inv_int<T>(ti.size());
    for (int kf = 0; kf < ti.size(); ++kf) {
        std::vector<int> kt = ti.unflatten(kf);
        std::vector<int> kinv = detail::tuple_inv(be, kt);
        for (int g = 0; g < ti.size(); ++g) {
            const T &av = a.at(kf, g);
            if (is_zero_of(av)) continue;
            std::vector<int> gt = ti.unflatten(g);
            // left: B(k^-1 h, k^-1 g); right: B(k^-1 h, g k)
            const int gslot = side == Side::left ? ti.flatten(detail::tuple_mul(be, kinv, gt))
                                                 : ti.flatten(detail::tuple_mul(be, gt, kt));
            for (int hp = 0; hp < ti.size(); ++hp) {
                const T &bv = b.at(hp, gslot);
                if (is_zero_of(bv)) continue;
                std::vector<int> ht = detail::tuple_mul(be, kt, ti.unflatten(hp));
                out.at(ti.flatten(ht), g) += av * bv * w;
            }
        }
    }
    return out;
}

template <typename T> FiniteKernel<T> finite_involute(Side side, const FiniteKernel<T> &k) {
    const FiniteBackend *be = k.be;
    TupleIndex ti = k.tuples();
    FiniteKernel<T> out = FiniteKernel<T>::zero(be, k.n_edges);
    for (int h = 0; h < ti.size(); ++h) {
        std::vector<int> ht = ti.unflatten(h);
        std::vector<int> hinv = detail::tuple_inv(be, ht);
        for (int g = 0; g < ti.size(); ++g) {
            std::vector<int> gt = ti.unflatten(g);
            // *_L: conj F(h^-1, h^-1 g); *_R: conj F(h^-1, g h)
            std::vector<int> garg = side == Side::left ? detail::tuple_mul(be, hinv, gt)
                                                       : detail::tuple_mul(be, gt, ht);
            out.at(h, g) = conj_of(k.at(ti.flatten(hinv), ti.flatten(garg)));
        }
    }
    return out;
}

template <typename T> FiniteKernel<T> finite_iso_I(const FiniteKernel<T> &k, bool inverse) {
    const FiniteBackend *be = k.be;
    TupleIndex ti = k.tuples();
    FiniteKernel<T> out = FiniteKernel<T>::zero(be, k.n_edges);
    for (int h = 0; h < ti.size(); ++h) {
        std::vector<int> ht = ti.unflatten(h);
        for (int g = 0; g < ti.size(); ++g) {
            std::vector<int> gt = ti.unflatten(g);
            std::vector<int> harg(k.n_edges);
            for (int e = 0; e < k.n_edges; ++e) {
                const int hi = be->inv_index(ht[e]);
                // I: h -> g h^-1 g^-1; I^-1: h -> g^-1 h^-1 g
                harg[e] = inverse ? be->mul_index(be->mul_index(be->inv_index(gt[e]), hi), gt[e])
                                  : be->mul_index(be->mul_index(gt[e], hi), be->inv_index(gt[e]));
            }
            out.at(h, g) = k.at(ti.flatten(harg), g);
        }
    }
    return out;
}

template <typename T> FiniteKernel<T> finite_gamma_all(const FiniteKernel<T> &k) {
    const FiniteBackend *be = k.be;
    TupleIndex ti = k.tuples();
    FiniteKernel<T> out = FiniteKernel<T>::zero(be, k.n_edges);
    for (int h = 0; h < ti.size(); ++h) {
        std::vector<int> ht = ti.unflatten(h);
        for (int g = 0; g < ti.size(); ++g) {
            std::vector<int> gt = ti.unflatten(g);
            std::vector<int> harg(k.n_edges), garg(k.n_edges);
            for (int e = 0; e < k.n_edges; ++e) {
                const int gi = be->inv_index(gt[e]);
                harg[e] = be->mul_index(be->mul_index(gi, be->inv_index(ht[e])), gt[e]);
                garg[e] = gi;
            }
            out.at(h, g) = k.at(ti.flatten(harg), ti.flatten(garg));
        }
    }
    return out;
}

template <typename T>
FiniteKernel<T> finite_fundamental(FundamentalKind kind, const FiniteKernel<T> &k) {
    const FiniteBackend *be = k.be;
    if (kind == FundamentalKind::gamma_inv) {
        if (k.n_edges != 1) throw DomainError("gamma acts on single-edge kernels");
        return finite_gamma_all(k);
    }
    if (k.n_edges != 1) throw DomainError("fundamental morphisms take single-edge kernels");
    const int n = be->order();
    const int id = FiniteKernel<T>::identity_index(be);
    FiniteKernel<T> out = FiniteKernel<T>::zero(be, 2);
    TupleIndex ti = out.tuples();
    const T scale(n); // delta_e(h) = |G| [h = e]
    // fine tuple order: position 0 = initial edge (h1, g1), 1 = terminal (h2, g2)
    for (int h1 = 0; h1 < n; ++h1)
        for (int h2 = 0; h2 < n; ++h2)
            for (int g1 = 0; g1 < n; ++g1)
                for (int g2 = 0; g2 < n; ++g2) {
                    T val(0);
                    if (kind == FundamentalKind::eta) {
                        if (h1 == id) val = scale * k.at(h2, g2);
                    } else if (kind == FundamentalKind::alpha_left) {
                        if (h1 == id) val = scale * k.at(h2, be->mul_index(g2, g1));
                    } else { // alpha_right
                        if (h2 == id) {
                            const int conj_h1 =
                                be->mul_index(be->mul_index(g2, h1), be->inv_index(g2));
                            val = scale * k.at(conj_h1, be->mul_index(g2, g1));
                        }
                    }
                    if (!is_zero_of(val))
                        out.at(ti.flatten({h1, h2}), ti.flatten({g1, g2})) = val;
                }
    return out;
}

template <typename T>
FiniteKernel<T> finite_graph_morphism(const RefinementWitness &w, const StructuredGraph &coarse,
                                      const StructuredGraph &fine, const FiniteKernel<T> &k) {
    if (w.policy != WitnessPolicy::left && w.policy != WitnessPolicy::right)
        throw Unsupported("graph morphisms exist only for the left/right policies");
    auto report = validate_witness(w, coarse, fine);
    if (!report.empty())
        throw ValidationError("graph morphism: invalid witness: " + report.front());
    const FiniteBackend *be = k.be;
    const int n = be->order();
    const int id = FiniteKernel<T>::identity_index(be);
    FiniteKernel<T> out = FiniteKernel<T>::zero(be, static_cast<int>(fine.edges.size()));
    TupleIndex fti = out.tuples();
    TupleIndex cti = k.tuples();
    auto unused = w.unused_fine_edges(fine);
    for (int hf = 0; hf < fti.size(); ++hf) {
        std::vector<int> ht = fti.unflatten(hf);
        for (int gf = 0; gf < fti.size(); ++gf) {
            std::vector<int> gt = fti.unflatten(gf);
            T val(1);
            bool dead = false;
            // delta factors on the new fine edges
            for (const auto &fid : unused) {
                if (ht[fine.edge_position(fid)] != id) {
                    dead = true;
                    break;
                }
                val *= T(n);
            }
            if (dead) continue;
            std::vector<int> H(coarse.edges.size()), G(coarse.edges.size());
            for (std::size_t ce = 0; ce < coarse.edges.size() && !dead; ++ce) {
                const EdgeDecomposition &dec = w.decompositions.at(coarse.edges[ce].id);
                const std::size_t m = dec.factors.size();
                // signed per-factor data
                std::vector<int> gh(m), hh(m);
                for (std::size_t j = 0; j < m; ++j) {
                    const int pos = fine.edge_position(dec.factors[j].first);
                    if (dec.factors[j].second > 0) {
                        gh[j] = gt[pos];
                        hh[j] = ht[pos];
                    } else {
                        const int gi = be->inv_index(gt[pos]);
                        gh[j] = gi;
                        hh[j] = be->mul_index(be->mul_index(gi, be->inv_index(ht[pos])), gt[pos]);
                    }
                }
                int gprod = gh[m - 1];
                for (std::size_t j = m - 1; j-- > 0;) gprod = be->mul_index(gprod, gh[j]);
                G[ce] = gprod;
                const std::size_t dist = w.policy == WitnessPolicy::left ? m - 1 : 0;
                for (std::size_t j = 0; j < m; ++j) {
                    if (j == dist) continue;
                    // delta on the non-distinguished slot; the gamma twist
                    // preserves it since delta is a symmetric class function
                    const int pos = fine.edge_position(dec.factors[j].first);
                    if (ht[pos] != id) {
                        dead = true;
                        break;
                    }
                    val *= T(n);
                }
                if (dead) break;
                if (w.policy == WitnessPolicy::left) {
                    H[ce] = hh[m - 1];
                } else {
                    int s = id;
                    for (std::size_t j = m; j-- > 1;) s = be->mul_index(s, gh[j]);
                    H[ce] = be->mul_index(be->mul_index(s, hh[0]), be->inv_index(s));
                }
            }
            if (dead) continue;
            val *= k.at(cti.flatten(H), cti.flatten(G));
            if (!is_zero_of(val)) out.at(hf, gf) = val;
        }
    }
    return out;
}

template <typename T> FiniteOp<T> finite_unitary_alpha(Side which, const FiniteBackend *be) {
    FiniteOp<T> op = FiniteOp<T>::zero(be, 2, 2);
    TupleIndex ti(be->order(), 2);
    for (int g1 = 0; g1 < be->order(); ++g1)
        for (int g2 = 0; g2 < be->order(); ++g2) {
            const int row = ti.flatten({g1, g2});
            const int col = which == Side::left
                                ? ti.flatten({g1, be->mul_index(g2, g1)})  // Psi(g2 g1, g1)
                                : ti.flatten({be->mul_index(g2, g1), g2}); // Psi(g2, g2 g1)
            op.at(row, col) = T(1);
        }
    return op;
}

template <typename T> FiniteOp<T> finite_unitary_iota(const FiniteBackend *be, int n_edges) {
    FiniteOp<T> op = FiniteOp<T>::zero(be, n_edges, n_edges);
    TupleIndex ti(be->order(), n_edges);
    for (int g = 0; g < ti.size(); ++g)
        op.at(g, ti.flatten(detail::tuple_inv(be, ti.unflatten(g)))) = T(1);
    return op;
}

template <typename T>
FiniteOp<T> finite_refinement_isometry(const FiniteBackend *be, const RefinementWitness &w,
                                       const StructuredGraph &coarse, const StructuredGraph &fine) {
    auto report = validate_witness(w, coarse, fine);
    if (!report.empty())
        throw ValidationError("refinement isometry: invalid witness: " + report.front());
    TupleIndex fti(be->order(), static_cast<int>(fine.edges.size()));
    TupleIndex cti(be->order(), static_cast<int>(coarse.edges.size()));
    FiniteOp<T> op{be, static_cast<int>(coarse.edges.size()),
                   static_cast<int>(fine.edges.size()), {}};
    op.a.assign(static_cast<std::size_t>(fti.size()) * cti.size(), T(0));
    for (int gf = 0; gf < fti.size(); ++gf) {
        std::vector<int> gt = fti.unflatten(gf);
        std::vector<int> G(coarse.edges.size());
        for (std::size_t ce = 0; ce < coarse.edges.size(); ++ce) {
            const EdgeDecomposition &dec = w.decompositions.at(coarse.edges[ce].id);
            const std::size_t m = dec.factors.size();
            int acc = -1;
            for (std::size_t j = m; j-- > 0;) {
                const int pos = fine.edge_position(dec.factors[j].first);
                int v = dec.factors[j].second > 0 ? gt[pos] : be->inv_index(gt[pos]);
                acc = acc < 0 ? v : be->mul_index(acc, v);
            }
            G[ce] = acc;
        }
        op.at(gf, cti.flatten(G)) = T(1);
    }
    return op;
}

template <typename T>
FiniteKernel<T> finite_gauge_kernel(const std::map<std::string, int> &lambda,
                                    const StructuredGraph &g, const FiniteKernel<T> &k) {
    const FiniteBackend *be = k.be;
    TupleIndex ti = k.tuples();
    FiniteKernel<T> out = FiniteKernel<T>::zero(be, k.n_edges);
    for (int h = 0; h < ti.size(); ++h) {
        std::vector<int> ht = ti.unflatten(h);
        for (int gg = 0; gg < ti.size(); ++gg) {
            std::vector<int> gt = ti.unflatten(gg);
            std::vector<int> harg(k.n_edges), garg(k.n_edges);
            for (int e = 0; e < k.n_edges; ++e) {
                const int lt = lambda.at(g.edges[e].dst);
                const int ls = lambda.at(g.edges[e].src);
                const int lti = be->inv_index(lt);
                harg[e] = be->mul_index(be->mul_index(lti, ht[e]), lt);
                garg[e] = be->mul_index(be->mul_index(lti, gt[e]), ls);
            }
            out.at(h, gg) = k.at(ti.flatten(harg), ti.flatten(garg));
        }
    }
    return out;
}

template <typename T>
FiniteOp<T> finite_gauge_unitary(const std::map<std::string, int> &lambda,
                                 const StructuredGraph &g, const FiniteBackend *be) {
    const int n_edges = static_cast<int>(g.edges.size());
    TupleIndex ti(be->order(), n_edges);
    FiniteOp<T> op = FiniteOp<T>::zero(be, n_edges, n_edges);
    for (int gg = 0; gg < ti.size(); ++gg) {
        std::vector<int> gt = ti.unflatten(gg);
        std::vector<int> garg(n_edges);
        for (int e = 0; e < n_edges; ++e) {
            const int lt = lambda.at(g.edges[e].dst);
            const int ls = lambda.at(g.edges[e].src);
            garg[e] = be->mul_index(be->mul_index(be->inv_index(lt), gt[e]), ls);
        }
        op.at(gg, ti.flatten(garg)) = T(1);
    }
    return op;
}

template <typename T>
FiniteOp<T> finite_mult_operator(const FiniteBackend *be, int n_edges,
                                 const std::vector<T> &values) {
    FiniteOp<T> op = FiniteOp<T>::zero(be, n_edges, n_edges);
    for (int i = 0; i < op.rows(); ++i) op.at(i, i) = values[i];
    return op;
}

template <typename T>
FiniteOp<T> finite_translation_unitary(const FiniteBackend *be, const std::vector<int> &tuple) {
    const int n_edges = static_cast<int>(tuple.size());
    TupleIndex ti(be->order(), n_edges);
    FiniteOp<T> op = FiniteOp<T>::zero(be, n_edges, n_edges);
    std::vector<int> ainv = detail::tuple_inv(be, tuple);
    for (int g = 0; g < ti.size(); ++g)
        op.at(g, ti.flatten(detail::tuple_mul(be, ainv, ti.unflatten(g)))) = T(1);
    return op;
}

template <typename T> T finite_haar_state(const FiniteKernel<T> &k) {
    T acc(0);
    for (const auto &x : k.v) acc += x;
    return acc * detail::inv_int<T>(static_cast<int>(k.v.size()));
}

} // namespace holoflux
