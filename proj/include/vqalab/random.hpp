// Copyright 2026 The vqalab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VQALAB_RANDOM_HPP
#define VQALAB_RANDOM_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace vqalab {

/// Generator: std::mt19937_64 (algorithm fixed by the C++ standard, so
/// sequences are identical across conforming toolchains). Uniform and
/// normal variates are derived here rather than through <random>
/// distributions, whose output is implementation-defined.
inline constexpr const char *kRngAlgorithm = "mt19937_64/v1";

class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream for one Monte-Carlo sample. Both inputs pass
    /// through a bijective 64-bit finalizer, so neighbouring base seeds do
    /// not share sample streams.
    static Rng substream(std::uint64_t base_seed, std::uint64_t sample_index) {
        return Rng(mix64(mix64(base_seed) ^ sample_index));
    }

    /// SplitMix64 finalizer.
    static constexpr std::uint64_t mix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

    /// Complex normal with E|z|^2 = 1.
    std::complex<double> complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }

    /// +1 or -1 with equal probability.
    int rademacher() { return (engine_() >> 63) ? 1 : -1; }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(bound)) % bound;
    }

   private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Packs structured coordinates into a sample index for Rng::substream.
inline std::uint64_t sample_key(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return (a << 48) ^ (b << 32) ^ c;
}

}  // namespace vqalab

#endif  // VQALAB_RANDOM_HPP
