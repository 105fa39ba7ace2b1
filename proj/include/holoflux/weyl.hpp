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

#include "holoflux/hilbert.hpp"
#include "holoflux/phase.hpp"

namespace holoflux {

/// Phase-space symbol: a cylindrical function together with the deformation
/// parameter epsilon > 0.
struct Symbol {
    CylFunction sigma;
    double epsilon = 1.0;
};

enum class Ordering { weyl, kohn_nirenberg };

/// Quantization at harmonic cutoff.
///
/// U(1): closed midpoint form. A term theta^m e^(iN phi) maps mode k to mode
/// k+N with coefficient (eps (k + N/2))^m for Weyl ordering and (eps k)^m for
/// Kohn-Nirenberg.
///
/// SU(2): theta-degree <= 1 only, via symmetric ordering
/// Q(theta_a f) = (-i eps / 2)(R_a M_f + M_f R_a), Q(f) = M_f; higher degree
/// raises Unsupported.
Op weyl_quantize(const Symbol &symbol, Ordering ordering, const StructuredGraph &graph,
                 const ProductSpace &from, const ProductSpace &to);

/// Independent U(1) oracle evaluating the kernel formula directly: the
/// theta integral produces a derivative of a delta acting on the test mode,
/// computed here by symbolic differentiation of exponential products.
Op weyl_oracle_u1(const Symbol &symbol, Ordering ordering, const StructuredGraph &graph,
                  const ProductSpace &from, const ProductSpace &to);

} // namespace holoflux
