// Copyright 2026 The seqcl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace seqcl {

// All randomness in the project flows through these helpers on top of
// std::mt19937_64, whose output sequence is fixed by the standard. The
// std <random> distributions are implementation-defined, so we roll our
// own to keep results byte-identical across toolchains.
using Rng = std::mt19937_64;

// Stable seed mixing for derived streams (SplitMix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform integer in [0, n) without modulo bias.
inline std::uint64_t rng_below(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % n;
}

// Uniform real in [0, 1) with 53 bits of entropy.
inline double rng_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform real in [lo, hi).
inline double rng_uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * rng_unit(rng);
}

// Fisher-Yates shuffle driven by rng_below.
template <typename T>
void rng_shuffle(Rng& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace seqcl
