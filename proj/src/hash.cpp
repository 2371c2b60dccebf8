#include "molbench/hash.hpp"

namespace molbench {

namespace {
constexpr std::uint64_t kMul = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t rotl(std::uint64_t x, int r) { return (x << r) | (x >> (64 - r)); }
}  // namespace

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

StableHasher& StableHasher::add(std::uint64_t word) {
  state_ = rotl(state_ ^ mix64(word + kMul * (length_ + 1)), 23) * kMul;
  ++length_;
  return *this;
}

StableHasher& StableHasher::add(std::span<const std::uint64_t> words) {
  for (auto w : words) add(w);
  return *this;
}

StableHasher& StableHasher::add_bytes(std::string_view bytes) {
  std::uint64_t word = 0;
  int filled = 0;
  for (unsigned char c : bytes) {
    word |= static_cast<std::uint64_t>(c) << (8 * filled);
    if (++filled == 8) {
      add(word);
      word = 0;
      filled = 0;
    }
  }
  if (filled > 0) add(word);
  return add(static_cast<std::uint64_t>(bytes.size()));
}

std::uint64_t StableHasher::finish() const { return mix64(state_ ^ length_); }

}  // namespace molbench
