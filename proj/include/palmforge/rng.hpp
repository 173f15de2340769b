#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace palmforge {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based substream seed: folds each counter of `path` into the master
/// seed. derive_seed(s, {a, b}) depends only on (s, a, b), never on call order.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t s = mix64(master);
  for (auto c : path) s = mix64(s ^ mix64(c + 0x632be59bd9b4e019ULL));
  return s;
}

/// Stream domains used by the pipeline.
enum class SeedDomain : std::uint64_t {
  identity = 1,
  sample = 2,
  corpus = 3,
};

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace palmforge
