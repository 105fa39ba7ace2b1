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

#include "holoflux/phase.hpp"

namespace holoflux {

/// Vertex-indexed gauge data, an element of G^|V|.
struct GaugeAssignment {
    const Backend *be = nullptr;
    std::map<std::string, GroupElem> values;

    static GaugeAssignment identity(const Backend *be, const StructuredGraph &g);
    static GaugeAssignment random(const Backend *be, const StructuredGraph &g, Rng &rng);
    GaugeAssignment compose(const GaugeAssignment &other) const; // pointwise product
};

/// The sandwich action on phase points:
/// (theta_e, g_e) -> (CoAd(lambda_tgt) theta_e, lambda_tgt g_e lambda_src^-1).
PhasePoint gauge_act_point(const GaugeAssignment &lambda, const StructuredGraph &g,
                           const PhasePoint &p);

/// Restriction of fine gauge data to the coarse vertex set.
GaugeAssignment gauge_project(const GaugeAssignment &fine_lambda, const StructuredGraph &coarse);

/// Pullback of a cylindrical function along the gauge action,
/// (lambda* f)(x) = f(lambda . x). Stays in the cylindrical class.
CylFunction pullback_gauge(const GaugeAssignment &lambda, const StructuredGraph &g,
                           const CylFunction &f);

} // namespace holoflux
