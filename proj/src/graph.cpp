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

#include "holoflux/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace holoflux {

const GraphEdge &StructuredGraph::edge(const std::string &eid) const {
    const GraphEdge *e = find_edge(eid);
    if (e == nullptr) throw ValidationError("graph " + id + " has no edge '" + eid + "'");
    return *e;
}

const GraphEdge *StructuredGraph::find_edge(const std::string &eid) const {
    for (const auto &e : edges)
        if (e.id == eid) return &e;
    return nullptr;
}

bool StructuredGraph::has_vertex(const std::string &v) const {
    return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
}

int StructuredGraph::edge_position(const std::string &eid) const {
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].id == eid) return static_cast<int>(i);
    throw ValidationError("graph " + id + " has no edge '" + eid + "'");
}

std::vector<std::string> StructuredGraph::segment_multiset() const {
    std::vector<std::string> segs;
    for (const auto &e : edges)
        for (const auto &[sid, sign] : e.chain) segs.push_back(sid);
    std::sort(segs.begin(), segs.end());
    return segs;
}

std::vector<std::string> StructuredGraph::validate() const {
    std::vector<std::string> report;
    std::set<std::string> ids;
    for (const auto &e : edges) {
        if (!ids.insert(e.id).second) report.push_back("duplicate edge id '" + e.id + "'");
        if (e.chain.empty()) report.push_back("edge '" + e.id + "' has an empty segment chain");
        if (!has_vertex(e.src) || !has_vertex(e.dst))
            report.push_back("edge '" + e.id + "' references unknown vertices");
        for (const auto &[sid, sign] : e.chain)
            if (sign != 1 && sign != -1)
                report.push_back("edge '" + e.id + "' has a segment sign outside {+1,-1}");
        if (!segments.empty()) {
            // Walk the chain through the segment endpoint table.
            std::string at = e.src;
            bool ok = true;
            for (const auto &[sid, sign] : e.chain) {
                auto it = segments.find(sid);
                if (it == segments.end()) {
                    report.push_back("edge '" + e.id + "' references unknown segment '" + sid + "'");
                    ok = false;
                    break;
                }
                const auto &[a, b] = it->second;
                const std::string &from = sign > 0 ? a : b;
                const std::string &to = sign > 0 ? b : a;
                if (from != at) {
                    report.push_back("edge '" + e.id + "': chain breaks at segment '" + sid + "'");
                    ok = false;
                    break;
                }
                at = to;
            }
            if (ok && at != e.dst)
                report.push_back("edge '" + e.id + "': chain does not end at the target vertex");
        }
    }
    return report;
}

std::string to_string(WitnessPolicy p) {
    switch (p) {
    case WitnessPolicy::left: return "left";
    case WitnessPolicy::right: return "right";
    default: return "custom";
    }
}

WitnessPolicy witness_policy_from_string(const std::string &s) {
    if (s == "left") return WitnessPolicy::left;
    if (s == "right") return WitnessPolicy::right;
    if (s == "custom") return WitnessPolicy::custom;
    throw ValidationError("unknown witness policy '" + s + "'");
}

void RefinementWitness::apply_policy() {
    if (policy == WitnessPolicy::custom) return;
    for (auto &[eid, dec] : decompositions) {
        dec.weights.assign(dec.factors.size(), 0.0);
        if (dec.weights.empty()) continue;
        if (policy == WitnessPolicy::left)
            dec.weights.back() = 1.0;
        else
            dec.weights.front() = 1.0;
    }
}

std::vector<std::string> RefinementWitness::unused_fine_edges(const StructuredGraph &fine) const {
    std::set<std::string> used;
    for (const auto &[eid, dec] : decompositions)
        for (const auto &[fid, sign] : dec.factors) used.insert(fid);
    std::vector<std::string> out;
    for (const auto &e : fine.edges)
        if (used.count(e.id) == 0) out.push_back(e.id);
    return out;
}

std::vector<std::string> validate_witness(const RefinementWitness &w, const StructuredGraph &coarse,
                                          const StructuredGraph &fine) {
    std::vector<std::string> report;
    if (w.coarse_id != coarse.id || w.fine_id != fine.id)
        report.push_back("witness graph ids do not match the supplied graphs");
    std::map<std::string, int> fine_usage;
    for (const auto &ce : coarse.edges) {
        auto it = w.decompositions.find(ce.id);
        if (it == w.decompositions.end()) {
            report.push_back("coarse edge '" + ce.id + "' has no decomposition");
            continue;
        }
        const EdgeDecomposition &dec = it->second;
        if (dec.factors.empty()) {
            report.push_back("decomposition of '" + ce.id + "' is empty");
            continue;
        }
        // Chain concatenation must reproduce the coarse chain.
        std::vector<std::pair<std::string, int>> concat;
        bool resolved = true;
        for (const auto &[fid, sign] : dec.factors) {
            const GraphEdge *fe = fine.find_edge(fid);
            if (fe == nullptr) {
                report.push_back("decomposition of '" + ce.id + "' references unknown fine edge '" +
                                 fid + "'");
                resolved = false;
                break;
            }
            fine_usage[fid] += 1;
            if (sign > 0) {
                for (const auto &seg : fe->chain) concat.push_back(seg);
            } else {
                for (auto rit = fe->chain.rbegin(); rit != fe->chain.rend(); ++rit)
                    concat.emplace_back(rit->first, -rit->second);
            }
        }
        if (resolved && concat != ce.chain)
            report.push_back("chain mismatch: decomposition of '" + ce.id +
                             "' does not reproduce its segment chain");
        if (dec.weights.size() != dec.factors.size()) {
            report.push_back("decomposition of '" + ce.id + "' has " +
                             std::to_string(dec.weights.size()) + " weights for " +
                             std::to_string(dec.factors.size()) + " factors");
        } else {
            double sum = 0.0;
            for (double c : dec.weights) sum += c;
            if (std::abs(sum - 1.0) > 1e-12)
                report.push_back("weights sum != 1 on edge '" + ce.id + "'");
        }
    }
    for (const auto &[eid, dec] : w.decompositions)
        if (coarse.find_edge(eid) == nullptr)
            report.push_back("decomposition references unknown coarse edge '" + eid + "'");
    for (const auto &[fid, uses] : fine_usage)
        if (uses > 1)
            report.push_back("fine edge '" + fid + "' appears in more than one decomposition");
    return report;
}

OrderClass order_class(const RefinementWitness &w) {
    OrderClass cls;
    cls.leq = true;
    cls.lessdot_left = true;
    cls.lessdot_right = true;
    for (const auto &[eid, dec] : w.decompositions) {
        for (const auto &[fid, sign] : dec.factors)
            if (sign != 1) cls.leq = false;
        if (dec.factors.back().second != 1) cls.lessdot_left = false;
        if (dec.factors.front().second != 1) cls.lessdot_right = false;
    }
    cls.lessdot_left = cls.lessdot_left || cls.leq;
    cls.lessdot_right = cls.lessdot_right || cls.leq;
    return cls;
}

std::string OrderClass::label() const {
    if (leq) return "leq";
    if (lessdot_left && lessdot_right) return "lessdot_LR";
    if (lessdot_left) return "lessdot_L";
    if (lessdot_right) return "lessdot_R";
    return "lesssim";
}

namespace {

std::string toggle_inverse_suffix(const std::string &id) {
    if (id.size() > 3 && id.substr(id.size() - 3) == "^-1") return id.substr(0, id.size() - 3);
    return id + "^-1";
}

} // namespace

StructuredGraph invert_graph(const StructuredGraph &g) {
    StructuredGraph out;
    out.id = toggle_inverse_suffix(g.id);
    out.vertices = g.vertices;
    out.segments = g.segments;
    for (const auto &e : g.edges) {
        GraphEdge r;
        r.id = e.id;
        r.src = e.dst;
        r.dst = e.src;
        for (auto it = e.chain.rbegin(); it != e.chain.rend(); ++it)
            r.chain.emplace_back(it->first, -it->second);
        out.edges.push_back(std::move(r));
    }
    return out;
}

RefinementWitness invert_witness(const RefinementWitness &w) {
    RefinementWitness out;
    out.id = toggle_inverse_suffix(w.id);
    out.coarse_id = toggle_inverse_suffix(w.coarse_id);
    out.fine_id = toggle_inverse_suffix(w.fine_id);
    if (w.policy == WitnessPolicy::left)
        out.policy = WitnessPolicy::right;
    else if (w.policy == WitnessPolicy::right)
        out.policy = WitnessPolicy::left;
    else
        out.policy = WitnessPolicy::custom;
    for (const auto &[eid, dec] : w.decompositions) {
        // Inverting the coarse edge reverses the factor order and flips each
        // factor's orientation, but the fine edges are themselves inverted in
        // the new graph, so the stored signs survive unchanged.
        EdgeDecomposition r;
        for (auto it = dec.factors.rbegin(); it != dec.factors.rend(); ++it)
            r.factors.emplace_back(it->first, it->second);
        r.weights.assign(dec.weights.rbegin(), dec.weights.rend());
        out.decompositions[eid] = std::move(r);
    }
    return out;
}

RefinementWitness compose_witnesses(const RefinementWitness &w1, const RefinementWitness &w2,
                                    const StructuredGraph &coarse, const StructuredGraph &mid,
                                    const StructuredGraph &fine) {
    if (w1.fine_id != w2.coarse_id)
        throw ValidationError("witness composition: middle graph ids do not match");
    if (w1.policy != w2.policy)
        throw ValidationError("witness composition requires matching policies");
    if (!validate_witness(w1, coarse, mid).empty() || !validate_witness(w2, mid, fine).empty())
        throw ValidationError("witness composition requires valid witnesses");
    RefinementWitness out;
    out.id = w1.id + "*" + w2.id;
    out.coarse_id = w1.coarse_id;
    out.fine_id = w2.fine_id;
    out.policy = w1.policy;
    for (const auto &[eid, dec] : w1.decompositions) {
        EdgeDecomposition r;
        for (std::size_t k = 0; k < dec.factors.size(); ++k) {
            const auto &[mid_edge, sign] = dec.factors[k];
            const double ck = dec.weights[k];
            auto mit = w2.decompositions.find(mid_edge);
            if (mit == w2.decompositions.end())
                throw ValidationError("witness composition: middle edge '" + mid_edge +
                                      "' has no decomposition");
            const EdgeDecomposition &sub = mit->second;
            if (sign > 0) {
                for (std::size_t j = 0; j < sub.factors.size(); ++j) {
                    r.factors.push_back(sub.factors[j]);
                    r.weights.push_back(ck * sub.weights[j]);
                }
            } else {
                // An inverted intermediate edge contributes its decomposition
                // reversed with flipped signs and reversed weights.
                for (std::size_t j = sub.factors.size(); j-- > 0;) {
                    r.factors.emplace_back(sub.factors[j].first, -sub.factors[j].second);
                    r.weights.push_back(ck * sub.weights[j]);
                }
            }
        }
        out.decompositions[eid] = std::move(r);
    }
    return out;
}

RefinementWitness identity_witness(const StructuredGraph &g, WitnessPolicy policy) {
    RefinementWitness w;
    w.id = "id:" + g.id;
    w.coarse_id = g.id;
    w.fine_id = g.id;
    w.policy = policy;
    for (const auto &e : g.edges) {
        EdgeDecomposition dec;
        dec.factors.emplace_back(e.id, 1);
        dec.weights.push_back(1.0);
        w.decompositions[e.id] = dec;
    }
    return w;
}

} // namespace holoflux
