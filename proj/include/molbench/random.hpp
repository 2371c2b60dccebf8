#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include "molbench/hash.hpp"

namespace molbench {

using Rng = std::mt19937_64;

/// Independent stream for (seed, stream) so parallel workers never share state.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) { return Rng(hash_words({seed, stream})); }

/// Uniform integer in [0, n) by rejection; same sequence on every standard library.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  for (;;) {
    const std::uint64_t r = rng();
    if (r < limit) return r % n;
  }
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace molbench
