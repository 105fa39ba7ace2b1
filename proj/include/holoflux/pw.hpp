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

#include <map>
#include <mutex>
#include <vector>

#include "holoflux/group.hpp"

namespace holoflux {

/// Function on a single copy of G with a finite Peter-Weyl expansion,
/// f(g) = sum_l sum_mn coef[l](m,n) pi^l_mn(g). Closed under sums, pointwise
/// products, translations and argument inversion; all expansions are exact
/// for band-limited data (quadrature rules are chosen from the band budget).
class PWFunction {
  public:
    PWFunction() = default;
    explicit PWFunction(const Backend *be) : be_(be) {}

    static PWFunction constant(const Backend *be, cx value);
    static PWFunction basis(const Backend *be, int label, int m, int n, cx scale = cx(1.0));
    /// Truncated convolution unit: sum over labels of band <= band of
    /// d_l * character_l.
    static PWFunction delta(const Backend *be, int band);
    /// Projection of an arbitrary function onto the PW basis up to band.
    static PWFunction project(const Backend *be, const std::function<cx(const GroupElem &)> &f,
                              int band);

    const Backend *backend() const { return be_; }
    bool empty() const { return coef_.empty(); }
    int band() const;
    const std::map<int, Eigen::MatrixXcd> &coef() const { return coef_; }

    cx eval(const GroupElem &g) const;
    void add(int label, int m, int n, cx value);

    PWFunction &operator+=(const PWFunction &other);
    PWFunction &operator*=(cx scale);
    friend PWFunction operator+(PWFunction a, const PWFunction &b) { return a += b; }
    friend PWFunction operator*(cx s, PWFunction f) { return f *= s; }

    /// Pointwise product, exact (band adds).
    PWFunction product(const PWFunction &other) const;
    /// Complex conjugate as a PW expansion.
    PWFunction conjugated() const;
    /// g -> f(g^-1).
    PWFunction arg_inverted() const;
    /// g -> f(a g).
    PWFunction left_translated(const GroupElem &a) const;
    /// g -> f(g a).
    PWFunction right_translated(const GroupElem &a) const;
    /// g -> (R_a f)(g) = d/dt f(exp(t tau_a) g) |_0, via generator matrices.
    PWFunction right_invariant_derivative(int a) const;

    /// L2 inner product <f, h> = integral of conj(f) h (normalized Haar).
    cx inner(const PWFunction &other) const;
    double norm2() const;
    /// Haar integral (the trivial-mode coefficient).
    cx integral() const;
    void prune(double tol = 0.0);

  private:
    const Backend *be_ = nullptr;
    std::map<int, Eigen::MatrixXcd> coef_;
};

/// Basis-entry index into the PW expansion of functions on one copy of G.
struct EntryIdx {
    int label = 0;
    int m = 0;
    int n = 0;
    friend auto operator<=>(const EntryIdx &, const EntryIdx &) = default;
};

/// Ordered orthonormal basis sqrt(d_l) pi^l_mn of the truncated L^2(G):
/// labels of band <= cutoff in ascending label order, entries row-major.
/// Finite backends enumerate their complete irrep table.
std::vector<EntryIdx> pw_basis(const Backend *be, int cutoff);

/// Per-backend cache of the small harmonic-analysis primitives used by the
/// kernel algebra: inverted/conjugated basis entries, entry products and
/// integrals of entry products. All results are exact band-limited
/// expansions; the cache only avoids recomputation.
class HarmonicCache {
  public:
    explicit HarmonicCache(const Backend *be) : be_(be) {}

    const Backend *backend() const { return be_; }

    /// pi^label_mn(g^-1) as a PW expansion.
    const PWFunction &inv_entry(const EntryIdx &e);
    /// conj(pi^label_mn(g)) as a PW expansion.
    const PWFunction &conj_entry(const EntryIdx &e);
    /// pi^a(g) * pi^b(g) expanded in the PW basis.
    const PWFunction &prod_entry(const EntryIdx &a, const EntryIdx &b);
    /// Same expansion as a sparse entry list (the hot path of products).
    const std::vector<std::pair<EntryIdx, cx>> &prod_entry_sparse(const EntryIdx &a,
                                                                  const EntryIdx &b);
    /// Entry (i, j) of the adjoint matrix R(g) (or R(g^-1)) as a PW
    /// expansion; Lie backends only.
    const PWFunction &adjoint_entry(int i, int j, bool inverted);
    /// Integral over G of a product of basis entries, each optionally with
    /// inverted argument.
    cx entry_product_integral(const std::vector<std::pair<EntryIdx, bool>> &factors);
    /// Matrix of multiplication by pi^e between truncated spaces, in the
    /// orthonormal pw_basis bases of the two cutoffs.
    const Eigen::MatrixXcd &mult_entry_matrix(const EntryIdx &e, int from_cutoff, int to_cutoff);

    static HarmonicCache &for_backend(const Backend *be);

  private:
    cx entry_product_integral_unlocked(const std::vector<std::pair<EntryIdx, bool>> &factors);

    /// Quadrature nodes for one exactness band together with every irrep
    /// matrix evaluated there; built once per band.
    struct NodeTable {
        HaarRule rule;
        std::map<int, std::vector<Eigen::MatrixXcd>> by_label;
    };
    NodeTable &table_unlocked(int rule_band);
    void ensure_labels_unlocked(NodeTable &t, int max_label_band);
    PWFunction project_unlocked(const std::vector<cx> &values, NodeTable &t, int out_band);

    /// SU(2): unitary mapping the coupled basis (J, M) blocks onto the
    /// product basis of labels l1 (x) l2, built from the generator matrices;
    /// entry products decompose through it exactly.
    struct Coupling {
        std::vector<std::pair<int, int>> col_block; // per column: (J label, index in block)
        Eigen::MatrixXcd c; // rows: product basis (m1, m2); cols: coupled (J, M)
    };
    const Coupling &coupling_unlocked(int l1, int l2);
    PWFunction product_entry_unlocked(const EntryIdx &a, const EntryIdx &b);

    const Backend *be_;
    std::mutex mu_;
    std::map<int, NodeTable> tables_;
    std::map<EntryIdx, PWFunction> inv_;
    std::map<EntryIdx, PWFunction> conj_;
    std::map<std::pair<EntryIdx, EntryIdx>, PWFunction> prod_;
    std::map<std::pair<EntryIdx, EntryIdx>, std::vector<std::pair<EntryIdx, cx>>> prod_sparse_;
    std::map<std::pair<int, int>, Coupling> couplings_;
    std::map<std::tuple<int, int, bool>, PWFunction> adj_;
    std::map<std::vector<std::pair<EntryIdx, bool>>, cx> integrals_;
    std::map<std::tuple<EntryIdx, int, int>, Eigen::MatrixXcd> mult_;
};

} // namespace holoflux
