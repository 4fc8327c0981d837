#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace pcar {

/// All samplers take an explicit engine; there is no global generator.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer, used as the mixing step for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Derives a stream seed from a master seed and an index path
/// (e.g. {case, replication}).  The result depends only on the values,
/// never on scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t part : parts) h = splitmix64(h ^ part);
  return h;
}

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

}  // namespace pcar
