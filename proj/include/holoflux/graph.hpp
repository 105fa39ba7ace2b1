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
#include <optional>
#include <string>
#include <vector>

#include "holoflux/common.hpp"

namespace holoflux {

/// Oriented edge over the shared segment pool. The chain lists signed
/// segment ids in traversal order from source to target.
struct GraphEdge {
    std::string id;
    std::string src;
    std::string dst;
    std::vector<std::pair<std::string, int>> chain;
};

/// Purely combinatorial structured graph. Two graphs describe the same
/// non-oriented graph exactly when their segment multisets coincide.
struct StructuredGraph {
    std::string id;
    std::vector<std::string> vertices;
    std::vector<GraphEdge> edges;
    /// Optional segment endpoints (segment id -> {end0, end1}); when present,
    /// chain walks and edge endpoints are validated against them.
    std::map<std::string, std::pair<std::string, std::string>> segments;

    const GraphEdge &edge(const std::string &id) const;
    const GraphEdge *find_edge(const std::string &id) const;
    bool has_vertex(const std::string &v) const;
    int edge_position(const std::string &id) const;
    /// Sorted multiset of segment ids over all edges.
    std::vector<std::string> segment_multiset() const;
    /// Structural validity: unique ids, non-empty chains, endpoint walks.
    std::vector<std::string> validate() const;
};

enum class WitnessPolicy { left, right, custom };

std::string to_string(WitnessPolicy p);
WitnessPolicy witness_policy_from_string(const std::string &s);

/// Decomposition of one coarse edge, factors in traversal order: the coarse
/// edge equals factor_m^sign_m o ... o factor_1^sign_1 with factor_1 traversed
/// first. Weights align with the factors (weights[k-1] belongs to factor k).
struct EdgeDecomposition {
    std::vector<std::pair<std::string, int>> factors;
    std::vector<double> weights;
};

/// Witness for a refinement l <= l' (in any of the compared orders): explicit
/// decomposition data for every coarse edge plus the convex weight vectors.
struct RefinementWitness {
    std::string id;
    std::string coarse_id;
    std::string fine_id;
    WitnessPolicy policy = WitnessPolicy::custom;
    std::map<std::string, EdgeDecomposition> decompositions;

    /// Fills the weight vectors implied by a left/right policy.
    void apply_policy();
    /// Fine edges not referenced by any decomposition (the "new" edges).
    std::vector<std::string> unused_fine_edges(const StructuredGraph &fine) const;
};

/// Cumulative order classification of a valid witness: leq implies both
/// lessdot classes, which imply lesssim.
struct OrderClass {
    bool leq = false;
    bool lessdot_left = false;
    bool lessdot_right = false;
    bool lesssim = true;
    std::string label() const;
};

/// Checks every witness invariant and returns the list of violations
/// (empty report == valid refinement witness).
std::vector<std::string> validate_witness(const RefinementWitness &w, const StructuredGraph &coarse,
                                          const StructuredGraph &fine);

OrderClass order_class(const RefinementWitness &w);

/// Graph with all edge orientations reversed (segment chains reversed with
/// flipped signs). Involutive.
StructuredGraph invert_graph(const StructuredGraph &g);

/// Witness between the inverted graphs induced by a witness between the
/// originals: decompositions reverse and flip, weights reverse, the
/// left/right policy stamps swap.
RefinementWitness invert_witness(const RefinementWitness &w);

/// Composes witnesses along l <= l' <= l'': substitutes each intermediate
/// edge's decomposition and multiplies the weights. Requires matching policy
/// stamps (left/left, right/right, or custom/custom).
RefinementWitness compose_witnesses(const RefinementWitness &w1, const RefinementWitness &w2,
                                    const StructuredGraph &coarse, const StructuredGraph &mid,
                                    const StructuredGraph &fine);

/// Identity witness for l <= l.
RefinementWitness identity_witness(const StructuredGraph &g, WitnessPolicy policy);

} // namespace holoflux
