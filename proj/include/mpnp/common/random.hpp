#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mpnp {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent sub-seeds from a master seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  return mix_seed(mix_seed(master) ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

/// Uniform integer in [lo, hi] inclusive.
inline std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double standard_normal(Rng& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

/// `count` distinct indices drawn uniformly from [0, n), in draw order.
std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t count);

}  // namespace mpnp
