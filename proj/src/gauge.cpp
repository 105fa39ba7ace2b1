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

#include "holoflux/gauge.hpp"

namespace holoflux {

GaugeAssignment GaugeAssignment::identity(const Backend *be, const StructuredGraph &g) {
    GaugeAssignment l{be, {}};
    for (const auto &v : g.vertices) l.values[v] = be->identity();
    return l;
}

GaugeAssignment GaugeAssignment::random(const Backend *be, const StructuredGraph &g, Rng &rng) {
    GaugeAssignment l{be, {}};
    for (const auto &v : g.vertices) l.values[v] = be->random_element(rng);
    return l;
}

GaugeAssignment GaugeAssignment::compose(const GaugeAssignment &other) const {
    GaugeAssignment out{be, {}};
    for (const auto &[v, g] : values) out.values[v] = be->multiply(g, other.values.at(v));
    return out;
}

PhasePoint gauge_act_point(const GaugeAssignment &lambda, const StructuredGraph &g,
                           const PhasePoint &p) {
    const Backend *be = p.be;
    PhasePoint out;
    out.be = be;
    for (const auto &e : g.edges) {
        auto it = lambda.values.find(e.src);
        auto jt = lambda.values.find(e.dst);
        if (it == lambda.values.end() || jt == lambda.values.end())
            throw ValidationError("gauge assignment is missing a vertex of edge '" + e.id + "'");
        const auto &[theta, hol] = p.at(e.id);
        GroupElem moved = be->multiply(be->multiply(jt->second, hol), be->invert(it->second));
        CoAlgElem rotated = be->alg_dim() > 0 ? be->coad(jt->second, theta) : theta;
        out.data[e.id] = {rotated, moved};
    }
    return out;
}

GaugeAssignment gauge_project(const GaugeAssignment &fine_lambda, const StructuredGraph &coarse) {
    GaugeAssignment out{fine_lambda.be, {}};
    for (const auto &v : coarse.vertices) {
        auto it = fine_lambda.values.find(v);
        if (it == fine_lambda.values.end())
            throw ValidationError("coarse vertex '" + v + "' is missing from the fine gauge data");
        out.values[v] = it->second;
    }
    return out;
}

CylFunction pullback_gauge(const GaugeAssignment &lambda, const StructuredGraph &g,
                           const CylFunction &f) {
    const Backend *be = f.backend();
    CylFunction out(be, f.edge_ids());
    const int n = be->alg_dim();
    for (const auto &term : f.terms()) {
        CylFunction acc(be, f.edge_ids());
        CylTerm unit;
        unit.coeff = term.coeff;
        acc.push_term(std::move(unit));
        for (const auto &[key, power] : term.mono) {
            const GraphEdge &e = g.edge(key.first);
            const Eigen::MatrixXd r = be->ad_matrix(lambda.values.at(e.dst));
            CylFunction th(be, f.edge_ids());
            for (int c = 0; c < n; ++c) {
                if (r(key.second, c) == 0.0) continue;
                CylTerm t;
                t.coeff = r(key.second, c);
                t.mono[{key.first, c}] = 1;
                th.push_term(std::move(t));
            }
            for (int p = 0; p < power; ++p) acc = acc.product(th);
        }
        for (const auto &[eid, pw] : term.gfac) {
            const GraphEdge &e = g.edge(eid);
            CylFunction gf(be, f.edge_ids());
            CylTerm t;
            t.gfac[eid] = pw.left_translated(lambda.values.at(e.dst))
                              .right_translated(be->invert(lambda.values.at(e.src)));
            gf.push_term(std::move(t));
            acc = acc.product(gf);
        }
        out += acc;
    }
    out.canonicalize();
    return out;
}

} // namespace holoflux
