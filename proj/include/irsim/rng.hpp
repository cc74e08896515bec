// SPDX-License-Identifier: Apache-2.0
//
// irsim - phase-dependent reflecting-surface modelling and beamforming simulation
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

// Self-contained random number generation. The standard library distributions
// are not bit-reproducible across implementations, so everything downstream of
// a seed uses the fixed algorithms below (xoshiro256++ for the raw stream,
// Box-Muller for normals). Same seed => same realizations on every platform.

namespace irsim::rng {

// splitmix64 step; used to expand seeds and to derive sub-stream keys.
inline std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256++ (Blackman & Vigna), state seeded through splitmix64.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto &w : s_)
            w = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    struct NormalPair {
        double z0;
        double z1;
    };

    // Two independent standard normals via Box-Muller. Consumes exactly two
    // uniforms, so the draw count per entry is fixed and documented.
    NormalPair normal_pair() {
        const double u1 = 1.0 - uniform01(); // (0, 1], keeps the log finite
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

// Derives the generator for one (seed, trial, tag) triple. Trials and links
// get independent streams so trials can run in parallel and any single link
// realization can be reproduced in isolation. The key schedule is fixed:
// three chained splitmix64 steps folding in trial and tag.
inline Xoshiro256pp derive_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t tag) {
    std::uint64_t st = seed;
    std::uint64_t k = splitmix64(st);
    st = k ^ trial;
    k = splitmix64(st);
    st = k ^ tag;
    k = splitmix64(st);
    return Xoshiro256pp(k);
}

} // namespace irsim::rng
