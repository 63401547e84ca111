// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace relialign {

using Rng = std::mt19937_64;

// Stable across platforms, unlike std::hash.
constexpr std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a run seed and a sequence of keys.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) noexcept {
  return splitmix64(seed ^ splitmix64(key));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view key,
                                 std::uint64_t salt = 0) noexcept {
  return derive_seed(derive_seed(seed, fnv1a64(key)), salt);
}

/// Uniform integer in [0, bound) by rejection; identical output on every
/// standard library, which std::uniform_int_distribution does not promise.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = Rng::max() - (Rng::max() % bound);
  std::uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return draw % bound;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Beta(alpha, beta) via two gamma draws.
inline double sample_beta(Rng& rng, double alpha, double beta) {
  std::gamma_distribution<double> ga(alpha, 1.0);
  std::gamma_distribution<double> gb(beta, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return x / (x + y);
}

}  // namespace relialign
