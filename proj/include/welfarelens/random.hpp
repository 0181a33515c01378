/*
 * Copyright 2026 The WelfareLens Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef WELFARELENS_RANDOM_HPP_
#define WELFARELENS_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace welfarelens {

// Independent random streams. Each consumer draws from its own stream so that
// adding draws in one place never shifts another.
enum class Stream : std::uint64_t {
  kDgp = 1,
  kNuisanceFolds = 2,
  kSolverInit = 3,
  kMonteCarlo = 4,
};

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// All randomness in the library is derived from one master seed.
struct SeedSpec {
  std::uint64_t master_seed = 0;

  // Seed for `stream`, further keyed by up to two integers (replication,
  // substream, ...). Pure function of its arguments.
  std::uint64_t Derive(Stream stream, std::uint64_t a = 0,
                       std::uint64_t b = 0) const {
    std::uint64_t h = SplitMix64(master_seed);
    h = SplitMix64(h ^ static_cast<std::uint64_t>(stream));
    h = SplitMix64(h ^ (a * 0xd6e8feb86659fd93ULL));
    h = SplitMix64(h ^ (b * 0xa0761d6478bd642fULL));
    return h;
  }

  // A SeedSpec whose master seed is keyed by `index`; used to give each
  // replication its own independent set of streams.
  SeedSpec ForReplication(std::uint64_t index) const {
    return SeedSpec{SplitMix64(master_seed ^ SplitMix64(index + 0x51ed27ULL))};
  }
};

// Portable generator: mt19937_64 output is fixed by the standard, and the
// real-valued transforms below avoid implementation-defined <random>
// distributions, so draws are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1).
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1).
  double UniformOpen() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double Uniform(double low, double high) {
    return low + (high - low) * Uniform();
  }

  // Box-Muller; the second variate of each pair is cached.
  double Normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = UniformOpen();
    const double u2 = Uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
  }

  bool Bernoulli(double p) { return Uniform() < p; }

  // Uniform on {0, ..., bound - 1}, by rejection.
  std::uint64_t UniformIndex(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace welfarelens

#endif  // WELFARELENS_RANDOM_HPP_
