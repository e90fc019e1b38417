#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "colcomm/gadgets.hpp"
#include "colcomm/instances.hpp"
#include "colcomm/rng.hpp"

namespace colcomm {

/// One party's block: n gadget inputs, each a k-bit value.
using Block = std::vector<std::uint32_t>;

/// Input to Col_N o g: N = 2^n blocks per party, n gadget inputs per block.
class ComposedInput {
 public:
  ComposedInput(unsigned k, std::vector<Block> alice, std::vector<Block> bob)
      : k_(k), alice_(std::move(alice)), bob_(std::move(bob)) {
    if (k_ == 0 || k_ > 12) throw std::invalid_argument("gadget width k out of range");
    if (alice_.size() != bob_.size()) throw std::invalid_argument("Alice and Bob block counts differ");
    if (!is_power_of_two(alice_.size()) || alice_.size() < 2) {
      throw std::invalid_argument("block count must be a power of two >= 2");
    }
    n_ = exact_log2(alice_.size());
    for (const auto* side : {&alice_, &bob_}) {
      for (const auto& block : *side) {
        if (block.size() != n_) {
          throw std::invalid_argument("every block must hold n = log2(N) = " + std::to_string(n_) +
                                      " gadget inputs");
        }
        for (auto v : block) {
          if (v >> k_) throw std::invalid_argument("gadget input does not fit in k bits");
        }
      }
    }
  }

  unsigned k() const noexcept { return k_; }
  unsigned n() const noexcept { return n_; }
  std::size_t blocks() const noexcept { return alice_.size(); }
  const std::vector<Block>& alice() const noexcept { return alice_; }
  const std::vector<Block>& bob() const noexcept { return bob_; }

  friend bool operator==(const ComposedInput&, const ComposedInput&) = default;

 private:
  unsigned k_;
  unsigned n_ = 0;
  std::vector<Block> alice_;
  std::vector<Block> bob_;
};

/// g^n(a, b) as an n-bit number; coordinate 1 is the most significant bit.
inline Value eval_gn(const Gadget& g, const Block& a, const Block& b) {
  if (a.size() != b.size()) throw std::invalid_argument("blocks differ in length");
  if (a.empty() || a.size() > kMaxBits) throw std::invalid_argument("block length out of range");
  Value z = 0;
  for (std::size_t i = 0; i < a.size(); ++i) z = (z << 1) | Value(g.eval(a[i], b[i]));
  return z;
}

/// The list (z^(1), ..., z^(N)) encoded by a composed input.
inline NumberList decode_composed(const Gadget& g, const ComposedInput& c) {
  if (c.k() != g.k()) throw std::invalid_argument("composed input width differs from gadget width");
  std::vector<Value> z(c.blocks());
  for (std::size_t j = 0; j < c.blocks(); ++j) z[j] = eval_gn(g, c.alice()[j], c.bob()[j]);
  return NumberList(c.n(), std::move(z));
}

inline PromiseClass eval_composed(const Gadget& g, const ComposedInput& c) {
  return classify(decode_composed(g, c));
}

/// Unfold(a, b): entry I = (i_1, ..., i_n) holds, for s_j = S(i_j), Alice's
/// half s_1^A(a_1) ... s_n^A(a_n) and Bob's half s_1^B(b_1) ... s_n^B(b_n),
/// each coordinate k bits with coordinate 1 most significant. Entries are
/// in lexicographic order of I with i_1 most significant.
struct UnfoldList {
  unsigned half_bits = 0;  // k * n
  std::vector<Value> alice;
  std::vector<Value> bob;

  std::size_t size() const noexcept { return alice.size(); }
  std::pair<Value, Value> operator[](std::size_t idx) const { return {alice[idx], bob[idx]}; }
};

namespace detail {

enum class Side { Alice, Bob };

// One side of Unfold, computed without looking at the other party's block.
inline std::vector<Value> unfold_side(const RegularGadget& rg, const Block& block, Side side) {
  const auto& S = rg.group();
  const unsigned k = rg.k();
  const std::size_t n = block.size();
  if (n == 0) throw std::invalid_argument("block length must be at least 1");
  if (std::uint64_t(k) * n > kMaxBits / 2) throw std::invalid_argument("k * n too large for 64-bit halves");
  for (auto v : block) {
    if (v >= rg.gadget().side()) throw std::invalid_argument("gadget input out of range");
  }

  // images[j][s] = s^A(block_j) or s^B(block_j).
  std::vector<std::vector<Value>> images(n, std::vector<Value>(S.order()));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t s = 0; s < S.order(); ++s) {
      const auto& e = S.elements()[s];
      images[j][s] = side == Side::Alice ? e.row(block[j]) : e.col(block[j]);
    }
  }

  std::size_t total = 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (total > (std::size_t{1} << 40) / S.order()) throw std::length_error("unfold list too large");
    total *= S.order();
  }

  std::vector<Value> out;
  out.reserve(total);
  std::vector<std::size_t> idx(n, 0);  // mixed-radix counter over I
  for (std::size_t count = 0; count < total; ++count) {
    Value h = 0;
    for (std::size_t j = 0; j < n; ++j) h = (h << k) | images[j][idx[j]];
    out.push_back(h);
    for (std::size_t j = n; j-- > 0;) {
      if (++idx[j] < S.order()) break;
      idx[j] = 0;
    }
  }
  return out;
}

}  // namespace detail

inline std::vector<Value> unfold_alice(const RegularGadget& rg, const Block& a) {
  return detail::unfold_side(rg, a, detail::Side::Alice);
}

inline std::vector<Value> unfold_bob(const RegularGadget& rg, const Block& b) {
  return detail::unfold_side(rg, b, detail::Side::Bob);
}

inline UnfoldList unfold(const RegularGadget& rg, const Block& a, const Block& b) {
  if (a.size() != b.size()) throw std::invalid_argument("blocks differ in length");
  return {static_cast<unsigned>(rg.k() * a.size()), unfold_alice(rg, a), unfold_bob(rg, b)};
}

inline std::set<std::pair<Value, Value>> set_unfold(const RegularGadget& rg, const Block& a, const Block& b) {
  const auto list = unfold(rg, a, b);
  std::set<std::pair<Value, Value>> out;
  for (std::size_t i = 0; i < list.size(); ++i) out.insert(list[i]);
  return out;
}

/// Alice's half of the reduction: her blocks' unfolds, concatenated in block order.
inline std::vector<Value> alice_map(const RegularGadget& rg, const std::vector<Block>& alice_blocks) {
  std::vector<Value> out;
  for (const auto& a : alice_blocks) {
    auto part = unfold_alice(rg, a);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

inline std::vector<Value> bob_map(const RegularGadget& rg, const std::vector<Block>& bob_blocks) {
  std::vector<Value> out;
  for (const auto& b : bob_blocks) {
    auto part = unfold_bob(rg, b);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

/// Rectangular reduction Col_N o g  ->  BiCol_{N^{2k}}.
///
/// Total on well-shaped inputs; the output is a faithful BiCol instance
/// (same promise class) only when the decoded list satisfies the promise.
inline BipartitePair reduce_to_bicol(const RegularGadget& rg, const ComposedInput& c) {
  if (c.k() != rg.k()) throw std::invalid_argument("composed input width differs from gadget width");
  return BipartitePair(rg.k() * c.n(), alice_map(rg, c.alice()), bob_map(rg, c.bob()));
}

/// Seeded composed input whose decoded list is gen_promise(N, cls, seed'),
/// with each gadget input drawn uniformly from the preimage of its bit.
inline ComposedInput gen_composed(const Gadget& g, std::uint64_t N, PromiseClass cls, std::uint64_t seed) {
  const NumberList z = gen_promise(N, cls, derive_seed(seed, 0));
  Rng rng = make_rng(derive_seed(seed, 1));
  const std::vector<Point> pre[2] = {g.preimage(0), g.preimage(1)};
  if (pre[0].empty() || pre[1].empty()) throw std::invalid_argument("gadget is constant");
  const unsigned n = z.bits();
  std::vector<Block> alice(N, Block(n));
  std::vector<Block> bob(N, Block(n));
  for (std::size_t j = 0; j < N; ++j) {
    for (unsigned i = 0; i < n; ++i) {
      const int bit = int((z[j] >> (n - 1 - i)) & 1);
      const auto& p = pre[bit][uniform_below(rng, pre[bit].size())];
      alice[j][i] = p.first;
      bob[j][i] = p.second;
    }
  }
  return ComposedInput(g.k(), std::move(alice), std::move(bob));
}

// ---------------------------------------------------------------------------
// Verification of the four Unfold properties.

enum class VerifyMode { Exhaustive, Sampled };

enum class ClaimPart { ProductOfPreimages = 1, Distinct = 2, DisjointWhenDifferent = 3, EqualWhenSame = 4 };

struct ClaimViolation {
  ClaimPart part;
  Block a, b;
  std::optional<Block> a2, b2;  // second input for parts 3 and 4
};

struct ClaimReport {
  std::size_t inputs_checked = 0;
  std::size_t pairs_checked = 0;
  std::size_t violations[5] = {0, 0, 0, 0, 0};  // indexed by ClaimPart
  std::optional<ClaimViolation> first_violation;

  std::size_t total_violations() const noexcept {
    return violations[1] + violations[2] + violations[3] + violations[4];
  }
  bool passed() const noexcept { return total_violations() == 0; }
};

struct ClaimOptions {
  VerifyMode mode = VerifyMode::Exhaustive;
  std::size_t trials = 10'000;
  std::uint64_t seed = 1;
  std::uint64_t exhaustive_cap = std::uint64_t{1} << 12;  // max number of (a, b) inputs
};

namespace detail {

using PairSet = std::set<std::pair<Value, Value>>;

// g^{-1}(z_1) x ... x g^{-1}(z_n), packed the same way as Unfold entries.
inline PairSet preimage_product(const Gadget& g, Value z, unsigned n) {
  const std::vector<Point> pre[2] = {g.preimage(0), g.preimage(1)};
  std::vector<std::pair<Value, Value>> acc{{0, 0}};
  for (unsigned i = 0; i < n; ++i) {
    const int bit = int((z >> (n - 1 - i)) & 1);
    std::vector<std::pair<Value, Value>> next;
    next.reserve(acc.size() * pre[bit].size());
    for (const auto& [ha, hb] : acc) {
      for (const auto& [x, y] : pre[bit]) next.emplace_back((ha << g.k()) | x, (hb << g.k()) | y);
    }
    acc = std::move(next);
  }
  return {acc.begin(), acc.end()};
}

inline std::pair<Block, Block> decode_point(std::uint64_t code, unsigned k, unsigned n) {
  Block a(n), b(n);
  const std::uint64_t mask = (std::uint64_t{1} << k) - 1;
  for (unsigned i = 0; i < n; ++i) {
    a[i] = std::uint32_t((code >> (k * i)) & mask);
    b[i] = std::uint32_t((code >> (k * (n + i))) & mask);
  }
  return {a, b};
}

struct Checked {
  Block a, b;
  Value z;
  PairSet set;
};

}  // namespace detail

/// Checks, over single inputs (a, b) and ordered pairs of inputs:
///   1. SetUnfold(a, b) equals the product of per-coordinate preimages;
///   2. Unfold(a, b) has no repeated entries;
///   3. different g^n values give disjoint sets;
///   4. equal g^n values give equal sets.
/// Exhaustive mode walks all 2^{2kn} inputs and all ordered pairs of them.
inline ClaimReport verify_claim(const RegularGadget& rg, unsigned n, const ClaimOptions& opt = {}) {
  const Gadget& g = rg.gadget();
  const unsigned k = rg.k();
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  if (std::uint64_t(2) * k * n >= 63) throw std::invalid_argument("2kn too large");
  const std::uint64_t points = std::uint64_t{1} << (2 * k * n);

  ClaimReport report;
  auto record = [&](ClaimPart part, const detail::Checked& p, const detail::Checked* q) {
    ++report.violations[static_cast<int>(part)];
    if (!report.first_violation) {
      report.first_violation = ClaimViolation{part, p.a, p.b, std::nullopt, std::nullopt};
      if (q) {
        report.first_violation->a2 = q->a;
        report.first_violation->b2 = q->b;
      }
    }
  };

  auto check_single = [&](const Block& a, const Block& b) {
    detail::Checked c{a, b, eval_gn(g, a, b), {}};
    const auto list = unfold(rg, a, b);
    for (std::size_t i = 0; i < list.size(); ++i) c.set.insert(list[i]);
    ++report.inputs_checked;
    if (c.set.size() != list.size()) record(ClaimPart::Distinct, c, nullptr);
    if (c.set != detail::preimage_product(g, c.z, n)) record(ClaimPart::ProductOfPreimages, c, nullptr);
    return c;
  };

  auto check_pair = [&](const detail::Checked& p, const detail::Checked& q) {
    ++report.pairs_checked;
    if (p.z != q.z) {
      for (const auto& e : p.set) {
        if (q.set.contains(e)) {
          record(ClaimPart::DisjointWhenDifferent, p, &q);
          break;
        }
      }
    } else if (p.set != q.set) {
      record(ClaimPart::EqualWhenSame, p, &q);
    }
  };

  if (opt.mode == VerifyMode::Exhaustive) {
    if (points > opt.exhaustive_cap) {
      throw std::invalid_argument("exhaustive verification over " + std::to_string(points) +
                                  " inputs exceeds the cap of " + std::to_string(opt.exhaustive_cap));
    }
    std::vector<detail::Checked> all;
    all.reserve(points);
    for (std::uint64_t code = 0; code < points; ++code) {
      auto [a, b] = detail::decode_point(code, k, n);
      all.push_back(check_single(a, b));
    }
    for (const auto& p : all) {
      for (const auto& q : all) check_pair(p, q);
    }
  } else {
    Rng rng = make_rng(opt.seed);
    for (std::size_t t = 0; t < opt.trials; ++t) {
      auto [a1, b1] = detail::decode_point(uniform_below(rng, points), k, n);
      auto [a2, b2] = detail::decode_point(uniform_below(rng, points), k, n);
      const auto p = check_single(a1, b1);
      const auto q = check_single(a2, b2);
      check_pair(p, q);
    }
  }
  return report;
}

}  // namespace colcomm
