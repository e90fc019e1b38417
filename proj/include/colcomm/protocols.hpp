#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <exception>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "colcomm/instances.hpp"
#include "colcomm/rng.hpp"

namespace colcomm {

enum class Party { Alice, Bob };

struct Message {
  Party speaker;
  std::vector<bool> payload;
};

/// Messages exchanged in a simulated run. Cost is one unit per payload bit.
class Transcript {
 public:
  void send(Party who, std::vector<bool> bits) { messages_.push_back({who, std::move(bits)}); }

  /// Appends `width` bits of `v`, most significant first, to a new message.
  void send_value(Party who, Value v, unsigned width) { send(who, encode(v, width)); }

  void send_values(Party who, const std::vector<Value>& vs, unsigned width) {
    std::vector<bool> bits;
    bits.reserve(vs.size() * width);
    for (Value v : vs) {
      auto enc = encode(v, width);
      bits.insert(bits.end(), enc.begin(), enc.end());
    }
    send(who, std::move(bits));
  }

  std::uint64_t cost() const noexcept {
    std::uint64_t c = 0;
    for (const auto& m : messages_) c += m.payload.size();
    return c;
  }

  const std::vector<Message>& messages() const noexcept { return messages_; }

  static std::vector<bool> encode(Value v, unsigned width) {
    if (width < 64 && (v >> width)) throw std::invalid_argument("value does not fit in message width");
    std::vector<bool> bits(width);
    for (unsigned i = 0; i < width; ++i) bits[i] = (v >> (width - 1 - i)) & 1;
    return bits;
  }

  static Value decode(const std::vector<bool>& bits, std::size_t offset, unsigned width) {
    Value v = 0;
    for (unsigned i = 0; i < width; ++i) v = (v << 1) | Value(bits.at(offset + i));
    return v;
  }

 private:
  std::vector<Message> messages_;
};

struct ProtocolOutcome {
  PromiseClass answer = PromiseClass::Neither;
  Transcript transcript;
  std::uint64_t oracle_charge = 0;   // declared cost of black-box subprotocols
  std::vector<std::uint64_t> seeds;  // seeds consumed, in order of use

  std::uint64_t cost() const noexcept { return transcript.cost() + oracle_charge; }
};

namespace detail {

// N = 2^n with n even, and the numbers are n bits wide.
inline unsigned bicol_bits(const BipartitePair& p) {
  if (!is_power_of_two(p.size()) || exact_log2(p.size()) != p.bits()) {
    throw std::invalid_argument("bipartite collision input of length " + std::to_string(p.size()) +
                                " must have length 2^n for n = " + std::to_string(p.bits()) +
                                " bits per number");
  }
  return p.bits();
}

inline bool half_counts_balanced(const BipartitePair& p) {
  const std::size_t root = std::size_t{1} << p.half_bits();
  std::vector<std::size_t> counts(root, 0);
  for (Value u : p.x()) ++counts[u];
  return std::all_of(counts.begin(), counts.end(), [&](std::size_t c) { return c == root; });
}

inline bool has_duplicate(std::vector<Value> vs) {
  std::sort(vs.begin(), vs.end());
  return std::adjacent_find(vs.begin(), vs.end()) != vs.end();
}

inline std::vector<std::size_t> zero_half_indices(const BipartitePair& p) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.x()[i] == 0) idx.push_back(i);
  }
  return idx;
}

// Bob's side: receives indices, answers TwoToOne iff his halves repeat.
inline PromiseClass bob_restricted_check(const BipartitePair& p, const std::vector<std::size_t>& sent,
                                         Transcript& tr) {
  std::vector<Value> ys;
  ys.reserve(sent.size());
  for (auto i : sent) ys.push_back(p.y()[i]);
  const bool dup = has_duplicate(std::move(ys));
  tr.send_value(Party::Bob, dup ? 1 : 0, 1);
  return dup ? PromiseClass::TwoToOne : PromiseClass::OneToOne;
}

}  // namespace detail

/// Deterministic protocol for BiCol_N.
///
/// Alice first checks that each of her sqrt(N) half-numbers occurs exactly
/// sqrt(N) times. If not, the input cannot be 1-to-1 and she announces
/// TwoToOne with a single bit. Otherwise she sends, as n-bit indices, the
/// sqrt(N) positions I where her half is 0, and Bob answers with one bit:
/// TwoToOne iff his halves on I repeat. Messages are framed, so the two
/// branches are told apart by length. Cost is at most sqrt(N) * n + 1.
inline ProtocolOutcome run_deterministic_bicol(const BipartitePair& p) {
  const unsigned n = detail::bicol_bits(p);
  ProtocolOutcome out;
  if (!detail::half_counts_balanced(p)) {
    out.transcript.send_value(Party::Alice, 1, 1);
    out.answer = PromiseClass::TwoToOne;
    return out;
  }
  const auto I = detail::zero_half_indices(p);
  out.transcript.send_values(Party::Alice, {I.begin(), I.end()}, n);
  out.answer = detail::bob_restricted_check(p, I, out.transcript);
  return out;
}

/// |I'| = min(ceil(c * N^{1/4}), sqrt(N)).
inline std::size_t randomized_sample_size(std::uint64_t N, double c) {
  if (!(c > 0)) throw std::invalid_argument("sampling constant must be positive");
  const unsigned n = exact_log2(N);
  const double quarter = std::pow(2.0, n / 4.0);
  const auto want = static_cast<std::size_t>(std::ceil(c * quarter - 1e-9));
  const std::size_t root = std::size_t{1} << (n / 2);
  return std::clamp<std::size_t>(want, 1, root);
}

/// Randomized protocol for BiCol_N: as the deterministic one, except Alice
/// sends only a uniformly random subset I' of I. One-sided: a 1-to-1 input
/// is never reported as TwoToOne.
inline ProtocolOutcome run_randomized_bicol(const BipartitePair& p, double c, std::uint64_t seed) {
  const unsigned n = detail::bicol_bits(p);
  ProtocolOutcome out;
  out.seeds.push_back(seed);
  if (!detail::half_counts_balanced(p)) {
    out.transcript.send_value(Party::Alice, 1, 1);
    out.answer = PromiseClass::TwoToOne;
    return out;
  }
  auto I = detail::zero_half_indices(p);
  const std::size_t m = randomized_sample_size(p.size(), c);
  Rng rng = make_rng(seed);
  partial_shuffle(std::span<std::size_t>(I), m, rng);
  I.resize(m);
  out.transcript.send_values(Party::Alice, {I.begin(), I.end()}, n);
  out.answer = detail::bob_restricted_check(p, I, out.transcript);
  return out;
}

// ---------------------------------------------------------------------------
// Decision-to-search reduction.

/// Input of length N extended by the planted numbers 0, ..., N-1 and then
/// permuted: position permutation[i] holds entry i of the extended list.
struct PlantedInstance {
  BipartitePair pair;
  std::vector<std::size_t> permutation;  // size 2N, 0-based
  std::vector<bool> planted;             // planted[pos] iff pos = permutation[i] for some i >= N

  std::vector<std::size_t> planted_positions() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < planted.size(); ++i) {
      if (planted[i]) out.push_back(i);
    }
    return out;
  }
};

/// Planting with an explicit permutation of the 2N positions.
inline PlantedInstance plant_with_permutation(const BipartitePair& p, std::vector<std::size_t> permutation) {
  const std::size_t N = p.size();
  if (!is_power_of_two(N) || exact_log2(N) != p.bits()) {
    throw std::invalid_argument("planting needs length N = 2^n for n-bit numbers");
  }
  if (permutation.size() != 2 * N) throw std::invalid_argument("permutation must act on 2N positions");
  std::vector<bool> seen(2 * N, false);
  for (auto v : permutation) {
    if (v >= 2 * N || seen[v]) throw std::invalid_argument("not a permutation of 2N positions");
    seen[v] = true;
  }
  const unsigned h = p.half_bits();
  const Value low_mask = (Value{1} << h) - 1;
  std::vector<Value> x(2 * N), y(2 * N);
  std::vector<bool> planted(2 * N, false);
  for (std::size_t i = 0; i < 2 * N; ++i) {
    const std::size_t pos = permutation[i];
    if (i < N) {
      x[pos] = p.x()[i];
      y[pos] = p.y()[i];
    } else {
      const Value v = i - N;
      x[pos] = v >> h;
      y[pos] = v & low_mask;
      planted[pos] = true;
    }
  }
  return {BipartitePair(h, std::move(x), std::move(y)), std::move(permutation), std::move(planted)};
}

/// Planting with a uniformly random permutation drawn from `seed`.
inline PlantedInstance plant_and_shuffle(const BipartitePair& p, std::uint64_t seed) {
  std::vector<std::size_t> perm(2 * p.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng = make_rng(seed);
  shuffle(std::span<std::size_t>(perm), rng);
  return plant_with_permutation(p, std::move(perm));
}

enum class OracleStrategy { LexFirst, UniformRandom, MinIndexAdversary };

inline std::string_view to_string(OracleStrategy s) noexcept {
  switch (s) {
    case OracleStrategy::LexFirst: return "lex";
    case OracleStrategy::UniformRandom: return "rand";
    case OracleStrategy::MinIndexAdversary: return "adv";
  }
  return "lex";
}

/// Perfect solver for the bipartite pigeonhole search problem, run as a
/// referee with full view of both halves. It is charged `cost` bits.
///
///   LexFirst           lexicographically smallest (i, j)
///   UniformRandom      uniform over all colliding pairs
///   MinIndexAdversary  first pair closed by a left-to-right scan: smallest j,
///                      then smallest i
struct PhpOracle {
  OracleStrategy strategy = OracleStrategy::LexFirst;
  std::uint64_t cost = 0;

  std::uint64_t symbolic_cost() const noexcept { return cost; }

  CollisionPair solve(const BipartitePair& p, Rng& rng) const {
    switch (strategy) {
      case OracleStrategy::LexFirst: {
        std::unordered_map<Value, std::size_t> first;
        std::optional<CollisionPair> best;
        for (std::size_t j = 0; j < p.size(); ++j) {
          auto [it, fresh] = first.try_emplace(p.full(j), j);
          if (!fresh && (!best || it->second < best->i)) best = CollisionPair{it->second, j};
        }
        if (best) return *best;
        break;
      }
      case OracleStrategy::MinIndexAdversary: {
        std::unordered_map<Value, std::size_t> first;
        for (std::size_t j = 0; j < p.size(); ++j) {
          auto [it, fresh] = first.try_emplace(p.full(j), j);
          if (!fresh) return CollisionPair{it->second, j};
        }
        break;
      }
      case OracleStrategy::UniformRandom: {
        const auto all = find_collisions(concat(p));
        if (!all.empty()) return all[uniform_below(rng, all.size())];
        break;
      }
    }
    throw std::invalid_argument("pigeonhole instance has no collision");
  }
};

template <class T>
concept PigeonholeSolver = requires(const T& o, const BipartitePair& p, Rng& rng) {
  { o.solve(p, rng) } -> std::same_as<CollisionPair>;
  { o.symbolic_cost() } -> std::convertible_to<std::uint64_t>;
};

/// Bits exchanged per round after the oracle returns: Alice reports whether
/// position i is planted, Bob whether j is.
inline constexpr std::uint64_t kRoundVerdictBits = 2;

/// Decides BiCol_N with t calls to a BiPHP^{2N}_N solver.
///
/// Each round plants the lexicographic block 0..N-1, shuffles with public
/// randomness, and asks the solver for a collision. The answer is TwoToOne
/// iff some round's collision avoids every planted position. All t rounds
/// are always run, so the cost is exactly t * (d + 2).
template <PigeonholeSolver Solver>
ProtocolOutcome decision_from_search(const BipartitePair& p, const Solver& oracle, std::size_t t,
                                     std::uint64_t seed) {
  if (t == 0) throw std::invalid_argument("at least one round is required");
  ProtocolOutcome out;
  out.answer = PromiseClass::OneToOne;
  for (std::size_t r = 0; r < t; ++r) {
    const std::uint64_t round_seed = derive_seed(seed, r);
    const std::uint64_t shuffle_seed = derive_seed(round_seed, 0);
    const std::uint64_t oracle_seed = derive_seed(round_seed, 1);
    out.seeds.push_back(shuffle_seed);
    out.seeds.push_back(oracle_seed);

    const PlantedInstance inst = plant_and_shuffle(p, shuffle_seed);
    Rng rng = make_rng(oracle_seed);
    const CollisionPair c = oracle.solve(inst.pair, rng);
    if (c.i >= c.j || c.j >= inst.pair.size() || inst.pair.full(c.i) != inst.pair.full(c.j)) {
      throw std::logic_error("pigeonhole oracle returned an invalid collision (" + std::to_string(c.i) +
                             ", " + std::to_string(c.j) + ")");
    }
    out.oracle_charge += oracle.symbolic_cost();
    out.transcript.send_value(Party::Alice, inst.planted[c.i] ? 1 : 0, 1);
    out.transcript.send_value(Party::Bob, inst.planted[c.j] ? 1 : 0, 1);
    if (!inst.planted[c.i] && !inst.planted[c.j]) out.answer = PromiseClass::TwoToOne;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monte-Carlo harness.

struct SuccessStats {
  std::size_t trials = 0;
  std::size_t correct = 0;
  std::uint64_t total_cost = 0;

  double rate() const noexcept { return trials ? double(correct) / double(trials) : 0.0; }
  double mean_cost() const noexcept { return trials ? double(total_cost) / double(trials) : 0.0; }

  /// Wilson score interval at 95%.
  std::pair<double, double> wilson95() const noexcept {
    if (trials == 0) return {0.0, 1.0};
    constexpr double z = 1.959963984540054;
    const double nt = double(trials);
    const double ph = rate();
    const double denom = 1 + z * z / nt;
    const double centre = (ph + z * z / (2 * nt)) / denom;
    const double half = z / denom * std::sqrt(ph * (1 - ph) / nt + z * z / (4 * nt * nt));
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
  }
};

/// Runs `trials` independent trials; trial i uses seed derive_seed(seed, i),
/// split further into an instance seed and a protocol seed. A trial is
/// correct when the protocol's answer equals the instance's true class.
/// Results do not depend on `workers`.
template <class MakeInstance, class Protocol>
SuccessStats run_trials(std::size_t trials, std::uint64_t seed, MakeInstance make_instance,
                        Protocol protocol, unsigned workers = 1) {
  workers = std::max(1u, std::min<unsigned>(workers, unsigned(std::max<std::size_t>(trials, 1))));
  std::vector<SuccessStats> partial(workers);
  std::vector<std::exception_ptr> errors(workers);
  auto body = [&](unsigned w) {
    try {
      for (std::size_t i = w; i < trials; i += workers) {
        const std::uint64_t ts = derive_seed(seed, i);
        const BipartitePair inst = make_instance(derive_seed(ts, 0));
        const PromiseClass truth = classify(concat(inst));
        const ProtocolOutcome o = protocol(inst, derive_seed(ts, 1));
        ++partial[w].trials;
        partial[w].correct += (o.answer == truth) ? 1 : 0;
        partial[w].total_cost += o.cost();
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  SuccessStats total;
  for (const auto& s : partial) {
    total.trials += s.trials;
    total.correct += s.correct;
    total.total_cost += s.total_cost;
  }
  return total;
}

/// How to draw a fresh promise instance for the bipartite problem.
struct InstanceRecipe {
  std::uint64_t N = 16;
  PromiseClass cls = PromiseClass::TwoToOne;
  bool balanced = false;  // every Alice half-number occurs sqrt(N) times

  BipartitePair make(std::uint64_t seed) const {
    if (balanced) return gen_balanced_promise(N, cls, seed);
    return split(gen_promise(N, cls, seed));
  }
};

template <PigeonholeSolver Solver>
SuccessStats estimate_success(const InstanceRecipe& recipe, const Solver& oracle, std::size_t t,
                              std::size_t trials, std::uint64_t seed, unsigned workers = 1) {
  return run_trials(
      trials, seed, [&](std::uint64_t s) { return recipe.make(s); },
      [&](const BipartitePair& p, std::uint64_t s) { return decision_from_search(p, oracle, t, s); },
      workers);
}

/// estimate_success for each oracle strategy on the same trial seeds.
inline std::vector<std::pair<OracleStrategy, SuccessStats>> estimate_success_by_strategy(
    const InstanceRecipe& recipe, std::uint64_t oracle_cost, std::size_t t, std::size_t trials,
    std::uint64_t seed, unsigned workers = 1) {
  std::vector<std::pair<OracleStrategy, SuccessStats>> out;
  for (auto s : {OracleStrategy::LexFirst, OracleStrategy::UniformRandom, OracleStrategy::MinIndexAdversary}) {
    out.emplace_back(s, estimate_success(recipe, PhpOracle{s, oracle_cost}, t, trials, seed, workers));
  }
  return out;
}

}  // namespace colcomm
