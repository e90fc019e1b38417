#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "colcomm/rng.hpp"

namespace colcomm {

using Value = std::uint64_t;

inline constexpr unsigned kMaxBits = 62;

inline bool is_power_of_two(std::uint64_t v) noexcept { return std::has_single_bit(v); }

/// log2 of a power of two; throws otherwise.
inline unsigned exact_log2(std::uint64_t v) {
  if (!is_power_of_two(v)) {
    throw std::invalid_argument(std::to_string(v) + " is not a power of two");
  }
  return static_cast<unsigned>(std::countr_zero(v));
}

enum class PromiseClass { OneToOne, TwoToOne, Neither };

inline std::string_view to_string(PromiseClass c) noexcept {
  switch (c) {
    case PromiseClass::OneToOne: return "OneToOne";
    case PromiseClass::TwoToOne: return "TwoToOne";
    case PromiseClass::Neither: return "Neither";
  }
  return "Neither";
}

inline bool satisfies_promise(PromiseClass c) noexcept { return c != PromiseClass::Neither; }

/// A list z of M numbers, each an n-bit value.
class NumberList {
 public:
  NumberList(unsigned bits, std::vector<Value> entries) : bits_(bits), entries_(std::move(entries)) {
    if (bits_ == 0 || bits_ > kMaxBits) {
      throw std::invalid_argument("bit-width must be in [1, " + std::to_string(kMaxBits) + "]");
    }
    if (entries_.empty()) throw std::invalid_argument("number list must be non-empty");
    for (Value v : entries_) {
      if (v >> bits_) {
        throw std::invalid_argument("entry " + std::to_string(v) + " does not fit in " +
                                    std::to_string(bits_) + " bits");
      }
    }
  }

  unsigned bits() const noexcept { return bits_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<Value>& entries() const noexcept { return entries_; }
  Value operator[](std::size_t i) const { return entries_[i]; }

  friend bool operator==(const NumberList&, const NumberList&) = default;

 private:
  unsigned bits_;
  std::vector<Value> entries_;
};

/// Alice's and Bob's half-number lists. Alice holds the high-order half.
class BipartitePair {
 public:
  BipartitePair(unsigned half_bits, std::vector<Value> x, std::vector<Value> y)
      : half_bits_(half_bits), x_(std::move(x)), y_(std::move(y)) {
    if (half_bits_ == 0 || 2 * half_bits_ > kMaxBits) {
      throw std::invalid_argument("half bit-width out of range");
    }
    if (x_.size() != y_.size()) throw std::invalid_argument("Alice and Bob lists differ in length");
    if (x_.empty()) throw std::invalid_argument("bipartite lists must be non-empty");
    for (const auto* side : {&x_, &y_}) {
      for (Value v : *side) {
        if (v >> half_bits_) throw std::invalid_argument("half-number does not fit in half_bits");
      }
    }
  }

  unsigned half_bits() const noexcept { return half_bits_; }
  unsigned bits() const noexcept { return 2 * half_bits_; }
  std::size_t size() const noexcept { return x_.size(); }
  const std::vector<Value>& x() const noexcept { return x_; }
  const std::vector<Value>& y() const noexcept { return y_; }

  /// Full number x_i y_i.
  Value full(std::size_t i) const { return (x_[i] << half_bits_) | y_[i]; }

  friend bool operator==(const BipartitePair&, const BipartitePair&) = default;

 private:
  unsigned half_bits_;
  std::vector<Value> x_;
  std::vector<Value> y_;
};

/// Unordered index pair {i, j}, stored 0-based with i < j.
struct CollisionPair {
  std::size_t i;
  std::size_t j;

  static CollisionPair of(std::size_t a, std::size_t b) {
    if (a == b) throw std::invalid_argument("collision indices must be distinct");
    return a < b ? CollisionPair{a, b} : CollisionPair{b, a};
  }

  friend auto operator<=>(const CollisionPair&, const CollisionPair&) = default;
};

namespace detail {

inline std::unordered_map<Value, std::size_t> value_counts(const std::vector<Value>& values) {
  std::unordered_map<Value, std::size_t> counts;
  counts.reserve(values.size());
  for (Value v : values) ++counts[v];
  return counts;
}

}  // namespace detail

inline PromiseClass classify(const std::vector<Value>& z) {
  const auto counts = detail::value_counts(z);
  if (counts.size() == z.size()) return PromiseClass::OneToOne;
  const bool all_twice = std::all_of(counts.begin(), counts.end(),
                                     [](const auto& kv) { return kv.second == 2; });
  return all_twice ? PromiseClass::TwoToOne : PromiseClass::Neither;
}

inline PromiseClass classify(const NumberList& z) { return classify(z.entries()); }

inline NumberList concat(const BipartitePair& p) {
  std::vector<Value> z(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) z[i] = p.full(i);
  return NumberList(p.bits(), std::move(z));
}

inline BipartitePair split(const NumberList& z) {
  if (z.bits() % 2 != 0) {
    throw std::invalid_argument("cannot split odd bit-width " + std::to_string(z.bits()));
  }
  const unsigned h = z.bits() / 2;
  const Value low_mask = (Value{1} << h) - 1;
  std::vector<Value> x(z.size());
  std::vector<Value> y(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    x[i] = z[i] >> h;
    y[i] = z[i] & low_mask;
  }
  return BipartitePair(h, std::move(x), std::move(y));
}

/// All pairs (i, j), i < j, with z_i = z_j, in lexicographic order.
inline std::vector<CollisionPair> find_collisions(const std::vector<Value>& z) {
  std::vector<std::size_t> order(z.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });
  std::vector<CollisionPair> out;
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo + 1;
    while (hi < order.size() && z[order[hi]] == z[order[lo]]) ++hi;
    for (std::size_t a = lo; a < hi; ++a) {
      for (std::size_t b = a + 1; b < hi; ++b) out.push_back(CollisionPair::of(order[a], order[b]));
    }
    lo = hi;
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<CollisionPair> find_collisions(const NumberList& z) {
  return find_collisions(z.entries());
}

/// Seeded promise instance of length N over [N].
///
/// OneToOne: Fisher-Yates shuffle of (0, ..., N-1).
/// TwoToOne: partial Fisher-Yates picks N/2 values from [N], each is written
/// twice in increasing pick order, then the list is Fisher-Yates shuffled.
/// Both draw from mt19937_64 seeded with `seed` via `uniform_below`.
inline NumberList gen_promise(std::uint64_t N, PromiseClass cls, std::uint64_t seed) {
  if (!is_power_of_two(N) || N < 2) {
    throw std::invalid_argument("N = " + std::to_string(N) + " is not a power of two >= 2");
  }
  if (cls == PromiseClass::Neither) throw std::invalid_argument("cannot generate a Neither instance");
  const unsigned bits = exact_log2(N);
  Rng rng = make_rng(seed);
  std::vector<Value> values(N);
  std::iota(values.begin(), values.end(), Value{0});
  if (cls == PromiseClass::OneToOne) {
    shuffle(std::span<Value>(values), rng);
    return NumberList(bits, std::move(values));
  }
  partial_shuffle(std::span<Value>(values), N / 2, rng);
  std::vector<Value> z;
  z.reserve(N);
  for (std::size_t i = 0; i < N / 2; ++i) {
    z.push_back(values[i]);
    z.push_back(values[i]);
  }
  shuffle(std::span<Value>(z), rng);
  return NumberList(bits, std::move(z));
}

/// Promise instance for the bipartite problem in which every Alice
/// half-number occurs exactly sqrt(N) times, i.e. the inputs that survive
/// the half-count pre-check of the upper-bound protocols.
///
/// For each Alice half-number u the Bob halves are: all of [sqrt N]
/// (OneToOne), or sqrt(N)/2 picked values each written twice (TwoToOne).
/// The resulting N full numbers are then shuffled.
inline BipartitePair gen_balanced_promise(std::uint64_t N, PromiseClass cls, std::uint64_t seed) {
  if (!is_power_of_two(N) || exact_log2(N) % 2 != 0) {
    throw std::invalid_argument("N = " + std::to_string(N) + " is not an even power of two");
  }
  if (cls == PromiseClass::Neither) throw std::invalid_argument("cannot generate a Neither instance");
  const unsigned half = exact_log2(N) / 2;
  const std::uint64_t root = std::uint64_t{1} << half;
  if (cls == PromiseClass::TwoToOne && root < 2) {
    throw std::invalid_argument("balanced TwoToOne needs N >= 4");
  }
  Rng rng = make_rng(seed);
  std::vector<Value> z;
  z.reserve(N);
  std::vector<Value> lows(root);
  for (Value u = 0; u < root; ++u) {
    std::iota(lows.begin(), lows.end(), Value{0});
    if (cls == PromiseClass::OneToOne) {
      for (Value v : lows) z.push_back((u << half) | v);
    } else {
      partial_shuffle(std::span<Value>(lows), root / 2, rng);
      for (std::size_t i = 0; i < root / 2; ++i) {
        z.push_back((u << half) | lows[i]);
        z.push_back((u << half) | lows[i]);
      }
    }
  }
  shuffle(std::span<Value>(z), rng);
  return split(NumberList(2 * half, std::move(z)));
}

}  // namespace colcomm
