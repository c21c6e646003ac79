// SPDX-License-Identifier: Apache-2.0
//
// gensm-mimo: hybrid precoding for GenSM-aided mmWave MIMO
// Copyright (C) 2026 gensm-mimo contributors
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

#ifndef GENSM_RNG_HPP
#define GENSM_RNG_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>

namespace gensm {

/// Deterministic random stream (xoshiro256++ state, splitmix64 seeding).
///
/// All samplers are self-contained so that a given seed produces the same
/// sequence on every platform and build; none of the std:: distribution
/// machinery is used. Substreams are derived by hashing (master seed, path
/// words), never by splitting engine state, so a cell indexed by a counter
/// always sees the same stream regardless of how work is partitioned
/// across threads.
class Rng {
  public:
    explicit Rng(std::uint64_t seed)
    {
        std::uint64_t x = seed;
        for (auto &w : state_)
            w = splitmix64(x);
    }

    /// Derive the stream for a (master seed, index path) cell.
    static Rng substream(std::uint64_t master, std::initializer_list<std::uint64_t> path)
    {
        std::uint64_t x = master;
        std::uint64_t h = splitmix64(x);
        for (std::uint64_t w : path)
        {
            x = h ^ (w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
            h = splitmix64(x);
        }
        return Rng(h);
    }

    std::uint64_t next_u64()
    {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n) via multiply-shift.
    std::uint64_t uniform_index(std::uint64_t n)
    {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Standard normal, Box-Muller (second variate cached).
    double normal()
    {
        if (has_cached_)
        {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        cached_ = r * std::sin(2.0 * pi_ * u2);
        has_cached_ = true;
        return r * std::cos(2.0 * pi_ * u2);
    }

    /// Circularly symmetric complex normal CN(0, 1), E|z|^2 = 1.
    std::complex<double> cnormal()
    {
        const double u1 = uniform_open();
        const double u2 = uniform();
        const double r = std::sqrt(-std::log(u1));
        return {r * std::cos(2.0 * pi_ * u2), r * std::sin(2.0 * pi_ * u2)};
    }

    /// Laplacian with given mean and scale b (std = b*sqrt(2)).
    double laplacian(double mean, double scale)
    {
        const double u = uniform() - 0.5;
        const double mag = -std::log1p(-2.0 * std::abs(u));
        return u >= 0.0 ? mean + scale * mag : mean - scale * mag;
    }

  private:
    static constexpr double pi_ = 3.14159265358979323846;

    static std::uint64_t splitmix64(std::uint64_t &x)
    {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    // Uniform in (0, 1]; keeps log() finite.
    double uniform_open() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    std::array<std::uint64_t, 4> state_{};
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace gensm

#endif
