#include "colcomm/instances.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "oracles.hpp"

namespace colcomm {
namespace {

NumberList L(unsigned n, std::vector<Value> z) { return NumberList(n, std::move(z)); }

TEST(Classify, Examples) {
  EXPECT_EQ(classify(L(2, {0, 1, 2, 3})), PromiseClass::OneToOne);
  EXPECT_EQ(classify(L(2, {0, 0, 1, 1})), PromiseClass::TwoToOne);
  EXPECT_EQ(classify(L(2, {0, 0, 0, 1})), PromiseClass::Neither);
}

TEST(Classify, AgreesWithBruteForceOnAllListsOverFour) {
  // Every z in [4]^4.
  for (Value code = 0; code < 256; ++code) {
    std::vector<Value> z{code & 3, (code >> 2) & 3, (code >> 4) & 3, (code >> 6) & 3};
    EXPECT_EQ(classify(z), oracle::brute_classify(z)) << code;
  }
}

TEST(NumberListTest, RejectsBadShapes) {
  EXPECT_THROW(L(2, {4}), std::invalid_argument);
  EXPECT_THROW(L(2, {}), std::invalid_argument);
  EXPECT_THROW(L(0, {0}), std::invalid_argument);
  EXPECT_THROW(BipartitePair(1, {0, 1}, {0}), std::invalid_argument);
  EXPECT_THROW(BipartitePair(1, {2}, {0}), std::invalid_argument);
}

TEST(Concat, Examples) {
  auto z = concat(BipartitePair(1, {0, 1}, {1, 0}));
  EXPECT_EQ(z.bits(), 2u);
  EXPECT_EQ(z.entries(), (std::vector<Value>{1, 2}));

  EXPECT_EQ(concat(BipartitePair(2, {3}, {3})).entries(), std::vector<Value>{15});

  auto zeros = concat(BipartitePair(1, {0, 0}, {0, 0}));
  EXPECT_EQ(zeros.entries(), (std::vector<Value>{0, 0}));
  EXPECT_EQ(classify(zeros), PromiseClass::TwoToOne);
}

TEST(Split, Examples) {
  auto p = split(L(2, {1, 2}));
  EXPECT_EQ(p.half_bits(), 1u);
  EXPECT_EQ(p.x(), (std::vector<Value>{0, 1}));
  EXPECT_EQ(p.y(), (std::vector<Value>{1, 0}));

  auto q = split(L(4, {15}));
  EXPECT_EQ(q.x(), std::vector<Value>{3});
  EXPECT_EQ(q.y(), std::vector<Value>{3});

  EXPECT_THROW(split(L(3, {5, 1})), std::invalid_argument);
}

TEST(Split, ConcatInverseAndClassPreservedOnRandomLists) {
  Rng rng = make_rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const unsigned n = 2 * unsigned(1 + uniform_below(rng, 8));
    const std::size_t M = 1 + uniform_below(rng, 40);
    std::vector<Value> z(M);
    // Small value range to make collisions common.
    const Value range = std::min<Value>(Value{1} << n, 1 + uniform_below(rng, 2 * M));
    for (auto& v : z) v = uniform_below(rng, range);
    const NumberList list(n, z);
    EXPECT_EQ(concat(split(list)), list);
    EXPECT_EQ(classify(concat(split(list))), classify(list));
  }
}

TEST(FindCollisions, Examples) {
  EXPECT_TRUE(find_collisions(L(2, {0, 1, 2, 3})).empty());
  // 0-based internally: (1,3) 1-based is (0,2).
  EXPECT_EQ(find_collisions(L(3, {5, 3, 5})), (std::vector<CollisionPair>{{0, 2}}));
  EXPECT_EQ(find_collisions(L(3, {7, 7, 7})), (std::vector<CollisionPair>{{0, 1}, {0, 2}, {1, 2}}));
}

TEST(FindCollisions, MatchesQuadraticScanAndClassification) {
  Rng rng = make_rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t M = 1 + uniform_below(rng, 30);
    std::vector<Value> z(M);
    for (auto& v : z) v = uniform_below(rng, 1 + M);
    std::vector<CollisionPair> expect;
    for (std::size_t i = 0; i < M; ++i) {
      for (std::size_t j = i + 1; j < M; ++j) {
        if (z[i] == z[j]) expect.push_back({i, j});
      }
    }
    const auto got = find_collisions(z);
    EXPECT_EQ(got, expect);
    const auto c = classify(z);
    EXPECT_EQ(c == PromiseClass::OneToOne, got.empty());
    if (c == PromiseClass::TwoToOne) {
      // Perfect matching: M/2 pairs covering every index once.
      EXPECT_EQ(got.size(), M / 2);
      std::set<std::size_t> covered;
      for (const auto& p : got) {
        covered.insert(p.i);
        covered.insert(p.j);
      }
      EXPECT_EQ(covered.size(), M);
    }
  }
}

TEST(FindCollisions, PigeonholeTotalityExhaustive) {
  // Every z in [2]^3 has a collision.
  for (Value code = 0; code < 8; ++code) {
    std::vector<Value> z{code & 1, (code >> 1) & 1, (code >> 2) & 1};
    EXPECT_FALSE(find_collisions(z).empty()) << code;
  }
}

TEST(GenPromise, ClassMatchesForManySeeds) {
  for (std::uint64_t N : {4, 16, 256}) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      const auto one = gen_promise(N, PromiseClass::OneToOne, seed);
      ASSERT_EQ(one.size(), N);
      ASSERT_EQ(classify(one), PromiseClass::OneToOne);
      const auto two = gen_promise(N, PromiseClass::TwoToOne, seed);
      ASSERT_EQ(two.size(), N);
      ASSERT_EQ(classify(two), PromiseClass::TwoToOne);
    }
  }
}

TEST(GenPromise, SmallExamplesAndErrors) {
  auto p = gen_promise(4, PromiseClass::OneToOne, 3).entries();
  std::sort(p.begin(), p.end());
  EXPECT_EQ(p, (std::vector<Value>{0, 1, 2, 3}));

  auto t = gen_promise(4, PromiseClass::TwoToOne, 3).entries();
  EXPECT_EQ(std::set<Value>(t.begin(), t.end()).size(), 2u);

  EXPECT_THROW(gen_promise(3, PromiseClass::OneToOne, 0), std::invalid_argument);
  EXPECT_THROW(gen_promise(4, PromiseClass::Neither, 0), std::invalid_argument);
  EXPECT_THROW(gen_promise(1, PromiseClass::TwoToOne, 0), std::invalid_argument);
}

TEST(GenPromise, DeterministicInSeed) {
  EXPECT_EQ(gen_promise(64, PromiseClass::TwoToOne, 42), gen_promise(64, PromiseClass::TwoToOne, 42));
  EXPECT_NE(gen_promise(64, PromiseClass::TwoToOne, 42), gen_promise(64, PromiseClass::TwoToOne, 43));
}

TEST(GenPromise, OneToOneLooksUniform) {
  // All 24 permutations of [4] should show up about equally often.
  std::map<std::vector<Value>, int> freq;
  const int trials = 24'000;
  for (int s = 0; s < trials; ++s) ++freq[gen_promise(4, PromiseClass::OneToOne, s).entries()];
  ASSERT_EQ(freq.size(), 24u);
  for (const auto& [perm, count] : freq) {
    EXPECT_NEAR(count, 1000, 5 * std::sqrt(1000.0)) << "permutation seen " << count << " times";
  }
}

TEST(GenBalancedPromise, HalfCountsAreBalanced) {
  for (std::uint64_t N : {4, 16, 256}) {
    for (auto cls : {PromiseClass::OneToOne, PromiseClass::TwoToOne}) {
      for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto p = gen_balanced_promise(N, cls, seed);
        ASSERT_EQ(classify(concat(p)), cls);
        std::map<Value, std::size_t> counts;
        for (Value u : p.x()) ++counts[u];
        const std::size_t root = std::size_t{1} << p.half_bits();
        ASSERT_EQ(counts.size(), root);
        for (const auto& [u, c] : counts) ASSERT_EQ(c, root);
      }
    }
  }
  EXPECT_THROW(gen_balanced_promise(8, PromiseClass::OneToOne, 0), std::invalid_argument);
}

}  // namespace
}  // namespace colcomm
