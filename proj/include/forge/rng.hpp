// Copyright 2026 The forgesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FORGE_RNG_HPP
#define FORGE_RNG_HPP

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

#include "forge/errors.hpp"

namespace forge {

// Deterministic random source.  All randomized operations in the library draw
// through this wrapper rather than std::*_distribution, so that a given seed
// produces identical streams on every standard-conforming platform
// (std::mt19937_64 output is fully specified; the distribution adaptors in
// libstdc++/libc++ are not).
class RandomSource {
 public:
  explicit RandomSource(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n).
  int uniform_int(int n) {
    if (n <= 0) throw ContractError("uniform_int requires n > 0");
    // Rejection sampling to avoid modulo bias.
    uint64_t bound = static_cast<uint64_t>(n);
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return static_cast<int>(x % bound);
  }

  // +1 or -1 with equal probability.
  int rademacher() { return (next_u64() & 1u) ? 1 : -1; }

  // Index i such that cumulative[i-1] <= u < cumulative[i], where cumulative
  // is a nondecreasing prefix-sum table ending at the total weight.
  int weighted_index(std::span<const double> cumulative) {
    if (cumulative.empty()) throw ContractError("weighted_index on empty table");
    double total = cumulative.back();
    double u = uniform() * total;
    int lo = 0;
    int hi = static_cast<int>(cumulative.size()) - 1;
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      if (cumulative[static_cast<size_t>(mid)] <= u) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return lo;
  }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; used to derive independent child seeds.
inline uint64_t mix_seed(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t base, uint64_t stream) {
  return mix_seed(base ^ mix_seed(stream));
}

// FNV-1a 64-bit hash, used for tagging named streams and file checksums.
inline uint64_t fnv1a64(std::string_view text) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace forge

#endif  // FORGE_RNG_HPP
