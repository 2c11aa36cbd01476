// SPDX-License-Identifier: Apache-2.0
//
// gusim - clustered stochastic channel simulator and user-scheduling benchmark
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

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "gusim/geometry.hpp"

namespace gusim {

/// Counter-based pseudo-random stream (splitmix64 core).
///
/// A stream is identified by an immutable 64-bit seed; the n-th output is a
/// pure function of (seed, n). Child streams are derived by hashing the seed
/// with a tag, independent of how many draws the parent has consumed, so
/// entities (drops, users, clusters, trials) can be generated in any order
/// or concurrently and still produce identical results.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : seed_(seed) {}

    /// Derive an independent child stream. Same (seed, tag) always yields
    /// the same child; callers must use distinct tags per purpose.
    RandomStream substream(std::uint64_t tag) const {
        return RandomStream(mix(mix(seed_ ^ 0x5851F42D4C957F2Dull) + tag));
    }

    RandomStream substream(std::uint64_t tag_a, std::uint64_t tag_b) const {
        return substream(tag_a).substream(tag_b);
    }

    std::uint64_t next_u64() {
        counter_ += 0x9E3779B97F4A7C15ull;
        return mix(seed_ ^ counter_);
    }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    /// Unbiased uniform integer in [0, n).
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_below: n == 0");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    /// Standard normal via Box-Muller (two uniforms per call).
    double gaussian() {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    /// Exponential with the given mean.
    double exponential(double mean) {
        return -mean * std::log(1.0 - uniform());
    }

    /// Zero-mean Gaussian with std sigma, rejected outside [-bound, bound].
    double truncated_gaussian(double sigma, double bound) {
        if (sigma <= 0.0) return 0.0;
        double x;
        do {
            x = sigma * gaussian();
        } while (std::abs(x) > bound);
        return x;
    }

    /// Exact Poisson draw; large means are split into exact Poisson chunks
    /// (sums of independent Poissons) to avoid exp() underflow.
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        std::uint64_t total = 0;
        while (mean > 30.0) {
            total += poisson_small(30.0);
            mean -= 30.0;
        }
        return total + poisson_small(mean);
    }

  private:
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t poisson_small(double mean) {
        const double threshold = std::exp(-mean);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > threshold);
        return k - 1;
    }

    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

// Substream tags. Each purpose gets a fixed tag so results never depend on
// generation order.
namespace stream_tag {
inline constexpr std::uint64_t kUsers = 1;
inline constexpr std::uint64_t kClusters = 2;
inline constexpr std::uint64_t kMpcGeometry = 3;
inline constexpr std::uint64_t kFading = 4;
inline constexpr std::uint64_t kRandomSelect = 5;
inline constexpr std::uint64_t kPerturb = 6;
inline constexpr std::uint64_t kTrial = 7;
} // namespace stream_tag

} // namespace gusim
