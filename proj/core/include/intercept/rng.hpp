#pragma once

#include <cstdint>
#include <random>

namespace intercept {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to derive independent per-run / per-purpose
/// streams from a base seed so that results never depend on scheduling.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  return mix_seed(mix_seed(base) ^ mix_seed(stream + 0x632BE59BD9B4E019ULL));
}

}  // namespace intercept
