#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>

namespace molbench {

/// Seedless 64-bit hash over a sequence of integer words.
///
/// Each word is consumed as its little-endian 64-bit value, so results are
/// identical on every platform and compiler. Used for every identifier that
/// ends up in an output file (fingerprint bits, scaffold keys, cache keys).
class StableHasher {
public:
  StableHasher() = default;

  StableHasher& add(std::uint64_t word);
  StableHasher& add_signed(std::int64_t word) { return add(static_cast<std::uint64_t>(word)); }
  StableHasher& add(std::span<const std::uint64_t> words);
  StableHasher& add_bytes(std::string_view bytes);

  std::uint64_t finish() const;

private:
  std::uint64_t state_ = 0x6a09e667f3bcc909ULL;
  std::uint64_t length_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

inline std::uint64_t hash_words(std::initializer_list<std::uint64_t> words) {
  StableHasher h;
  for (auto w : words) h.add(w);
  return h.finish();
}

}  // namespace molbench
