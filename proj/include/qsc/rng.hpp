#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qsc {

using Engine = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stable sub-seed: folds each key into the running hash with mix64. The
/// result depends only on (base, keys...), so adding sizes or trials to a
/// sweep never perturbs the streams of existing ones.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = mix64(base);
  for (auto k : keys) h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

// Stream tags keep logically different consumers of one seed apart.
namespace stream {
inline constexpr std::uint64_t entries = 0x454e5452;      // matrix entries
inline constexpr std::uint64_t replacement = 0x5245504c;  // low-variance replacement draws
inline constexpr std::uint64_t moments = 0x4d4f4d54;      // Monte Carlo moment estimates
inline constexpr std::uint64_t trial = 0x54524941;        // harness trials
inline constexpr std::uint64_t structure = 0x53545255;    // Type-II sampler
}  // namespace stream

}  // namespace qsc
