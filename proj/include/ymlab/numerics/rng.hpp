#pragma once

#include <cstdint>
#include <random>

namespace ymlab::numerics {

// SplitMix64 finaliser; maps (seed, stream) to an independent engine seed.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Engine for sample `index` of a run seeded with `seed`.  Sample k draws the
// same numbers whatever the batch size or thread layout.
inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL)));
}

}  // namespace ymlab::numerics
