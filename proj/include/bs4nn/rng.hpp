// Copyright 2026 The bs4nn Authors
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

#ifndef BS4NN_RNG_HPP_
#define BS4NN_RNG_HPP_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace bs4nn {

// Seeded random source. The engine is std::mt19937_64 (its output sequence is
// fixed by the standard); the distributions are hand-rolled so that results
// are identical across standard-library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

  // Uniform integer in [0, bound), bound >= 1. Rejection sampling, unbiased.
  int uniform_below(int bound) {
    const std::uint64_t b = static_cast<std::uint64_t>(bound);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return static_cast<int>(x % b);
  }

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[uniform_below(static_cast<int>(i))]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent stream seed from a master seed. Used so that model
// initialization, epoch shuffling, and per-image noise draws never share a
// stream. splitmix64 finalizer.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Fixed stream tags for derive_seed.
enum : std::uint64_t {
  kSeedStreamInit = 1,
  kSeedStreamFit = 2,
  kSeedStreamNoise = 3,
  kSeedStreamMaps = 4,
  kSeedStreamSplit = 5,
};

}  // namespace bs4nn

#endif  // BS4NN_RNG_HPP_
