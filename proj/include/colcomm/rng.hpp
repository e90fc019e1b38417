#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace colcomm {

// All randomness in the library flows through std::mt19937_64, whose output
// sequence is fixed by the standard. The standard distributions are not
// (their algorithms are implementation-defined), so sampling helpers below
// are written out to keep every seeded result identical across toolchains.
using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t v) noexcept {
  v += 0x9e3779b97f4a7c15ULL;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  return v ^ (v >> 31);
}

/// Seed for the `index`-th independent sub-stream of `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

/// Uniform integer in [0, bound) by rejection; bound must be positive.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  // Largest multiple of bound that fits, minus one.
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound + 1) % bound;
  std::uint64_t v = rng();
  while (v > limit) v = rng();
  return v % bound;
}

/// Fisher-Yates shuffle, descending from the last position.
template <class T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

/// Moves a uniformly random `count`-subset into the first `count` slots
/// (partial Fisher-Yates from the front).
template <class T>
void partial_shuffle(std::span<T> items, std::size_t count, Rng& rng) {
  for (std::size_t i = 0; i < count && i + 1 < items.size(); ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, items.size() - i));
    using std::swap;
    swap(items[i], items[j]);
  }
}

}  // namespace colcomm
