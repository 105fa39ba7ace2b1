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

#include "holoflux/pw.hpp"

namespace holoflux {

/// Truncated L^2(G) of a single edge in the orthonormal Peter-Weyl basis
/// sqrt(d_l) pi^l_mn, labels of band <= cutoff.
struct EdgeSpace {
    const Backend *be = nullptr;
    int cutoff = 0;

    std::vector<EntryIdx> basis() const { return pw_basis(be, cutoff); }
    int dim() const { return static_cast<int>(basis().size()); }
    friend bool operator==(const EdgeSpace &a, const EdgeSpace &b) {
        return a.be == b.be && a.cutoff == b.cutoff;
    }
};

/// Tensor product over the edges of a graph, edge 0 most significant in the
/// flat index. The basis manifest is the per-edge (label, row, column) list.
struct ProductSpace {
    std::vector<EdgeSpace> edges;

    int dim() const;
    std::vector<int> edge_dims() const;
    int flatten(const std::vector<int> &per_edge) const;
    std::vector<int> unflatten(int idx) const;
    friend bool operator==(const ProductSpace &a, const ProductSpace &b) {
        return a.edges == b.edges;
    }

    static ProductSpace uniform(const Backend *be, int n_edges, int cutoff);
};

/// Dense operator between truncated spaces.
struct Op {
    ProductSpace from;
    ProductSpace to;
    Eigen::MatrixXcd m;

    static Op identity(const ProductSpace &s);
    static Op zero(const ProductSpace &from, const ProductSpace &to);
    Op adjoint() const;
    friend Op operator*(const Op &a, const Op &b);
    friend Op operator+(const Op &a, const Op &b);
    friend Op operator-(const Op &a, const Op &b);
    friend Op operator*(cx s, Op a);
    double max_abs() const { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
};

/// Residual between two operators on identical spaces (max abs entry).
double op_distance(const Op &a, const Op &b);

Eigen::MatrixXcd kron_all(const std::vector<Eigen::MatrixXcd> &factors);

/// Per-edge single-variable building blocks.
Eigen::MatrixXcd conv_entry_matrix(const EdgeSpace &space, const EntryIdx &h_entry);
Eigen::MatrixXcd mult_matrix(const EdgeSpace &from, const EdgeSpace &to, const PWFunction &f);
/// Right-invariant derivative generator on the truncated edge space.
Eigen::MatrixXcd generator_matrix(const EdgeSpace &space, int axis);
/// Isometric inclusion between cutoffs (from.cutoff <= to.cutoff).
Op embed_op(const ProductSpace &from, const ProductSpace &to);

/// A token of a group word: either a fixed group element or an oriented
/// reference to a target-space edge variable.
struct WordToken {
    bool is_const = false;
    GroupElem constant;
    int target_edge = -1;
    int sign = 1;

    static WordToken cst(GroupElem g) { return WordToken{true, std::move(g), -1, 1}; }
    static WordToken var(int edge, int sign) { return WordToken{false, GroupElem{}, edge, sign}; }
};

/// Smooth map C_target -> C_source given per source edge as a word in the
/// target edge variables. pullback_op builds the matrix of Psi -> Psi o map
/// in the orthonormal bases; with allow_truncation = false it throws
/// CutoffOverflow when the image does not fit the target cutoffs.
struct WordMap {
    std::vector<std::vector<WordToken>> source_words;
};

/// Expansion of pi^entry(word) as a sum of scalar coefficients times
/// per-target-edge PW factors (repeated edges already multiplied out).
struct WordExpansion {
    struct Term {
        cx coeff{1.0, 0.0};
        std::map<int, PWFunction> factors;
    };
    std::vector<Term> terms;
};

WordExpansion expand_entry_word(const Backend *be, const EntryIdx &entry,
                                const std::vector<WordToken> &word);

Op pullback_op(const ProductSpace &source, const ProductSpace &target, const WordMap &map,
               bool allow_truncation = false);

/// Multi-edge multiplication operator for a product function given as a sum
/// of per-edge PW factors.
struct ProductFunction {
    struct Term {
        cx coeff{1.0, 0.0};
        std::map<int, PWFunction> factors; // edge index -> factor
    };
    std::vector<Term> terms;
};

Op mult_op(const ProductSpace &from, const ProductSpace &to, const ProductFunction &f);

} // namespace holoflux
