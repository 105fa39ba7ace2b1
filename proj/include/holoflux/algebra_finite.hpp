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

#include <vector>

#include "holoflux/graph.hpp"
#include "holoflux/group.hpp"
#include "holoflux/rational.hpp"

namespace holoflux {

/// Index arithmetic for tuples over a finite group: tuple -> flat index with
/// edge 0 most significant.
class TupleIndex {
  public:
    TupleIndex(int order, int n_edges) : order_(order), n_(n_edges) {
        size_ = 1;
        for (int i = 0; i < n_edges; ++i) size_ *= order;
    }
    int order() const { return order_; }
    int edges() const { return n_; }
    int size() const { return size_; }
    int flatten(const std::vector<int> &t) const {
        int idx = 0;
        for (int i = 0; i < n_; ++i) idx = idx * order_ + t[i];
        return idx;
    }
    std::vector<int> unflatten(int idx) const {
        std::vector<int> t(n_);
        for (int i = n_; i-- > 0;) {
            t[i] = idx % order_;
            idx /= order_;
        }
        return t;
    }

  private:
    int order_;
    int n_;
    int size_;
};

/// Linear map between C^(|G|^E) value spaces in the delta ("value")
/// coordinates; the L^2 inner product carries the 1/|G|^E Haar weight, which
/// the Haar adjoint accounts for.
template <typename T> struct FiniteOp {
    const FiniteBackend *be = nullptr;
    int edges_from = 0;
    int edges_to = 0;
    std::vector<T> a; // row-major, rows = |G|^edges_to

    int rows() const {
        int r = 1;
        for (int i = 0; i < edges_to; ++i) r *= be->order();
        return r;
    }
    int cols() const {
        int c = 1;
        for (int i = 0; i < edges_from; ++i) c *= be->order();
        return c;
    }
    T &at(int r, int c) { return a[static_cast<std::size_t>(r) * cols() + c]; }
    const T &at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols() + c]; }

    static FiniteOp zero(const FiniteBackend *be, int edges_from, int edges_to) {
        FiniteOp op{be, edges_from, edges_to, {}};
        op.a.assign(static_cast<std::size_t>(op.rows()) * op.cols(), T(0));
        return op;
    }
    static FiniteOp identity(const FiniteBackend *be, int edges) {
        FiniteOp op = zero(be, edges, edges);
        for (int i = 0; i < op.rows(); ++i) op.at(i, i) = T(1);
        return op;
    }

    friend FiniteOp operator*(const FiniteOp &x, const FiniteOp &y) {
        if (x.edges_from != y.edges_to) throw DomainError("finite op composition: shape mismatch");
        FiniteOp out = zero(x.be, y.edges_from, x.edges_to);
        const int n = x.cols();
        for (int r = 0; r < out.rows(); ++r)
            for (int k = 0; k < n; ++k) {
                const T &xv = x.at(r, k);
                if (is_zero_of(xv)) continue;
                for (int c = 0; c < out.cols(); ++c) {
                    const T &yv = y.at(k, c);
                    if (is_zero_of(yv)) continue;
                    out.at(r, c) += xv * yv;
                }
            }
        return out;
    }
    friend FiniteOp operator+(FiniteOp x, const FiniteOp &y) {
        for (std::size_t i = 0; i < x.a.size(); ++i) x.a[i] += y.a[i];
        return x;
    }
    friend FiniteOp operator-(FiniteOp x, const FiniteOp &y) {
        for (std::size_t i = 0; i < x.a.size(); ++i) x.a[i] -= y.a[i];
        return x;
    }

    /// Adjoint with respect to the normalized Haar inner products: the
    /// conjugate transpose scaled by |G|^(edges_from - edges_to).
    FiniteOp haar_adjoint() const {
        FiniteOp out = zero(be, edges_to, edges_from);
        T scale(1);
        const int diff = edges_from - edges_to;
        for (int i = 0; i < (diff > 0 ? diff : -diff); ++i) scale *= T(be->order());
        for (int r = 0; r < rows(); ++r)
            for (int c = 0; c < cols(); ++c) {
                T v = conj_of(at(r, c));
                if (diff > 0)
                    out.at(c, r) = v * scale;
                else if (diff < 0)
                    out.at(c, r) = divide_exactly(v, scale);
                else
                    out.at(c, r) = v;
            }
        return out;
    }

    double max_abs_diff(const FiniteOp &other) const {
        double sup = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            double d = std::sqrt(abs2_of(a[i] - other.a[i]));
            if (d > sup) sup = d;
        }
        return sup;
    }
    bool equals(const FiniteOp &other) const {
        return edges_from == other.edges_from && edges_to == other.edges_to && a == other.a;
    }

    static T divide_exactly(const T &v, const T &s);
};

template <> inline RatCx FiniteOp<RatCx>::divide_exactly(const RatCx &v, const RatCx &s) {
    return RatCx(v.real() / s.real(), v.imag() / s.real());
}
template <> inline cx FiniteOp<cx>::divide_exactly(const cx &v, const cx &s) { return v / s; }

/// Kernel F({h_e}, {g_e}) on a finite-group graph, stored densely with
/// index = flat(h) * |G|^E + flat(g).
template <typename T> struct FiniteKernel {
    const FiniteBackend *be = nullptr;
    int n_edges = 0;
    std::vector<T> v;

    TupleIndex tuples() const { return TupleIndex(be->order(), n_edges); }
    int side() const { return tuples().size(); }
    T &at(int h, int g) { return v[static_cast<std::size_t>(h) * side() + g]; }
    const T &at(int h, int g) const { return v[static_cast<std::size_t>(h) * side() + g]; }

    static FiniteKernel zero(const FiniteBackend *be, int n_edges) {
        FiniteKernel k{be, n_edges, {}};
        const std::size_t s = k.side();
        k.v.assign(s * s, T(0));
        return k;
    }
    /// The convolution unit: product over edges of |G| [h_e = e].
    static FiniteKernel delta_identity(const FiniteBackend *be, int n_edges) {
        FiniteKernel k = zero(be, n_edges);
        TupleIndex ti = k.tuples();
        T scale(1);
        for (int i = 0; i < n_edges; ++i) scale *= T(be->order());
        const int h_id = ti.flatten(std::vector<int>(n_edges, identity_index(be)));
        for (int g = 0; g < ti.size(); ++g) k.at(h_id, g) = scale;
        return k;
    }
    static int identity_index(const FiniteBackend *be) {
        GroupElem e = be->identity();
        return e.index();
    }

    FiniteKernel &operator+=(const FiniteKernel &o) {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
        return *this;
    }
    FiniteKernel &operator-=(const FiniteKernel &o) {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
        return *this;
    }
    double max_abs_diff(const FiniteKernel &o) const {
        double sup = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            double d = std::sqrt(abs2_of(v[i] - o.v[i]));
            if (d > sup) sup = d;
        }
        return sup;
    }
    bool is_zero() const {
        for (const auto &x : v)
            if (!is_zero_of(x)) return false;
        return true;
    }
};

enum class Side { left, right };
enum class FundamentalKind { eta, gamma_inv, alpha_left, alpha_right };

/// Integrated left/right regular representation on the delta value basis:
/// (rho_L(F) Psi)({g}) = mean_h F({h},{g}) Psi({h^-1 g}),
/// (rho_R(F) Psi)({g}) = mean_h F({h},{g}) Psi({g h}).
template <typename T> FiniteOp<T> finite_rho(Side side, const FiniteKernel<T> &k);

/// Convolutions and involutions of the left/right crossed-product algebra.
template <typename T>
FiniteKernel<T> finite_convolve(Side side, const FiniteKernel<T> &a, const FiniteKernel<T> &b);
template <typename T> FiniteKernel<T> finite_involute(Side side, const FiniteKernel<T> &k);

/// The intertwiner I(f)(h, g) = f(g h^-1 g^-1, g) per edge and its inverse.
template <typename T> FiniteKernel<T> finite_iso_I(const FiniteKernel<T> &k, bool inverse = false);

/// Edge-inversion *-isomorphism gamma applied on every edge:
/// F -> F({g_e^-1 h_e^-1 g_e}, {g_e^-1}).
template <typename T> FiniteKernel<T> finite_gamma_all(const FiniteKernel<T> &k);

/// Single-coarse-edge fundamental morphisms into a 2-edge kernel; the fine
/// tuple positions are initial = 0, terminal = 1.
template <typename T>
FiniteKernel<T> finite_fundamental(FundamentalKind kind, const FiniteKernel<T> &k);

/// Witness-induced *-morphism of kernels (left/right policy).
template <typename T>
FiniteKernel<T> finite_graph_morphism(const RefinementWitness &w, const StructuredGraph &coarse,
                                      const StructuredGraph &fine, const FiniteKernel<T> &k);

/// Unitaries implementing the fundamental morphisms on the 2-edge space
/// (value coordinates; tuple order [initial, terminal]):
/// alpha_L: Psi(g2, g1) -> Psi(g2 g1, g1); alpha_R: -> Psi(g2, g2 g1).
template <typename T> FiniteOp<T> finite_unitary_alpha(Side which, const FiniteBackend *be);
/// (U_iota Psi)({g_e}) = Psi({g_e^-1}).
template <typename T> FiniteOp<T> finite_unitary_iota(const FiniteBackend *be, int n_edges);

/// Refinement isometry in value coordinates, (U Psi)({g_f}) = Psi({G_e}).
template <typename T>
FiniteOp<T> finite_refinement_isometry(const FiniteBackend *be, const RefinementWitness &w,
                                       const StructuredGraph &coarse, const StructuredGraph &fine);

/// Vertex gauge action on kernels, its implementing unitary, and the
/// multiplication/translation multiplier embeddings.
template <typename T>
FiniteKernel<T> finite_gauge_kernel(const std::map<std::string, int> &lambda,
                                    const StructuredGraph &g, const FiniteKernel<T> &k);
template <typename T>
FiniteOp<T> finite_gauge_unitary(const std::map<std::string, int> &lambda,
                                 const StructuredGraph &g, const FiniteBackend *be);
template <typename T>
FiniteOp<T> finite_mult_operator(const FiniteBackend *be, int n_edges,
                                 const std::vector<T> &values);
template <typename T>
FiniteOp<T> finite_translation_unitary(const FiniteBackend *be, const std::vector<int> &tuple);

/// Haar state omega(F) = mean over all (h, g) tuples.
template <typename T> T finite_haar_state(const FiniteKernel<T> &k);

} // namespace holoflux

#include "holoflux/algebra_finite_impl.hpp"
