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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace holoflux {

using cx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Error hierarchy used across the library. All preconditions raise one of
/// these; numerical checks never throw, they report residuals.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BackendMismatch : Error {
    using Error::Error;
};
struct Unsupported : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct CutoffOverflow : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};

/// Deterministic splitmix64/xoshiro256** generator. The standard library
/// engines are portable but its distributions are not, so sampling is done
/// by hand on top of raw 64-bit draws.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto &word : state_) {
            x += 0x9e3779b97f4a7c15ull;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next() {
        auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next() % n; }
    /// Standard normal via Box-Muller.
    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

  private:
    std::uint64_t state_[4];
};

/// FNV-1a, used to derive per-check seeds from (seed, check name) so that
/// parallel scheduling never changes random draws.
inline std::uint64_t fnv1a(const std::string &s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline Rng check_rng(std::uint64_t scenario_seed, const std::string &check_name) {
    return Rng(scenario_seed ^ fnv1a(check_name));
}

} // namespace holoflux
