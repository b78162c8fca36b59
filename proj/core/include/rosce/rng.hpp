#pragma once

#include <cstdint>
#include <random>

namespace rosce {

/// Engine used for every random draw in the library.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stream-splitting rule: the seed of child `index` (and redraw `attempt`) is
///   splitmix64(splitmix64(splitmix64(seed) ^ index) ^ attempt).
/// Children are independent of the order or thread in which they are drawn.
constexpr std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index,
                                   std::uint64_t attempt = 0) noexcept {
  return splitmix64(splitmix64(splitmix64(seed) ^ index) ^ attempt);
}

}  // namespace rosce
