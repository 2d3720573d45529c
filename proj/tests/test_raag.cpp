#include <gtest/gtest.h>

#include <random>

#include "gbraid/raag.hpp"
#include "support/oracles.hpp"

using namespace gbraid;

namespace {

CommutationGraph tripod_delta() { return build_delta(tripod_subdivided()); }

Word w(CommutationGraph const& d, char const* s) { return parse_word(d, s); }

}  // namespace

TEST(Delta, TripodAdjacency) {
  auto d = tripod_delta();
  EXPECT_EQ(d.size(), 6u);
  EXPECT_EQ(d.edge_count(), 9u);
  auto adj = [&](char const* x, char const* y) { return d.adjacent(*d.find(x), *d.find(y)); };
  for (auto [x, y] : {std::pair{"a", "b"}, {"a", "c"}, {"b", "c"}, {"a", "e"}, {"a", "f"}, {"b", "d"}, {"b", "f"},
                      {"c", "d"}, {"c", "e"}})
    EXPECT_TRUE(adj(x, y)) << x << y;
  for (auto [x, y] : {std::pair{"d", "e"}, {"d", "f"}, {"e", "f"}, {"a", "d"}, {"b", "e"}, {"c", "f"}})
    EXPECT_FALSE(adj(x, y)) << x << y;
}

TEST(Delta, StarIsFree) {
  auto d = build_delta(star_graph(5));
  EXPECT_EQ(d.edge_count(), 0u);
  EXPECT_EQ(join_components(d).size(), 1u);  // a free group is not a join
}

TEST(Delta, RejectsBadAdjacency) {
  EXPECT_THROW(CommutationGraph({"x", "y"}, {0, 1, 0, 0}), DomainError);
  EXPECT_THROW(CommutationGraph({"x"}, {1}), DomainError);
  EXPECT_THROW(CommutationGraph({"x"}, {0, 0}), DomainError);
}

TEST(WordSyntax, ParseAndFormat) {
  auto d = tripod_delta();
  auto x = w(d, "a  d^-1\tf");
  ASSERT_EQ(x.size(), 3u);
  EXPECT_EQ(x[1], (Letter{3, true}));
  EXPECT_EQ(format_word(d, x), "a d^-1 f");
  EXPECT_TRUE(w(d, "1").empty());
  EXPECT_TRUE(w(d, "").empty());
  EXPECT_EQ(format_word(d, {}), "1");
  EXPECT_THROW(w(d, "q"), Error);
  EXPECT_THROW(w(d, "a^2"), Error);
  EXPECT_THROW(w(d, "a^-"), Error);
}

TEST(WordAlgebra, Basics) {
  auto d = tripod_delta();
  auto x = w(d, "a d");
  EXPECT_EQ(inverse(x), w(d, "d^-1 a^-1"));
  EXPECT_EQ(power(x, 2), w(d, "a d a d"));
  EXPECT_EQ(power(x, -1), inverse(x));
  EXPECT_TRUE(power(x, 0).empty());
  EXPECT_EQ(commutator(w(d, "a"), w(d, "b")), w(d, "a b a^-1 b^-1"));
  EXPECT_EQ(support(w(d, "f a f^-1")), (std::vector<Gen>{0, 5}));
}

TEST(NormalForm, Examples) {
  auto d = tripod_delta();
  EXPECT_EQ(normal_form(d, w(d, "a e a^-1")).word, w(d, "e"));
  EXPECT_EQ(normal_form(d, w(d, "b a")).word, w(d, "a b"));
  EXPECT_EQ(normal_form(d, w(d, "d a")).word, w(d, "d a"));
  EXPECT_TRUE(is_trivial(d, w(d, "a b a^-1 b^-1")));
  EXPECT_FALSE(is_trivial(d, w(d, "a d a^-1 d^-1")));
  EXPECT_TRUE(is_equal(d, w(d, "c e"), w(d, "e c")));
}

TEST(NormalForm, AgreesWithRewritingClosureOnSmallCases) {
  std::mt19937 rng(1);
  for (int t = 0; t < 500; ++t) {
    auto d = oracle::random_commutation_graph(rng, 4, 0.5);
    auto x = oracle::random_word(rng, 4, 6);
    ASSERT_EQ(normal_form(d, x).word, oracle::closure_normal_form(d, x));
  }
}

TEST(CyclicReduction, CoreAndConjugator) {
  auto d = tripod_delta();
  auto x = w(d, "d a e b a^-1 d^-1");
  auto cr = cyclically_reduce(d, x);
  EXPECT_TRUE(is_cyclically_reduced(d, cr.core));
  EXPECT_TRUE(is_equal(d, x, concat(concat(cr.conjugator, cr.core), inverse(cr.conjugator))));
  EXPECT_EQ(cr.core.size(), 2u);
}

TEST(Conjugacy, Examples) {
  auto d = tripod_delta();
  EXPECT_TRUE(is_conjugate(d, w(d, "d e"), w(d, "e d")));
  EXPECT_FALSE(is_conjugate(d, w(d, "d e"), w(d, "d e^-1")));
  EXPECT_FALSE(is_conjugate(d, w(d, "a"), w(d, "b")));
  EXPECT_TRUE(is_conjugate(d, w(d, "1"), w(d, "a a^-1")));
  auto f = build_delta(star_graph(3));
  EXPECT_TRUE(is_conjugate(f, parse_word(f, "a1 a2 a3"), parse_word(f, "a3 a1 a2")));
  EXPECT_FALSE(is_conjugate(f, parse_word(f, "a1 a2 a3"), parse_word(f, "a1 a3 a2")));
}

TEST(Conjugacy, TripodWordsAgainstStatedTarget) {
  auto d = tripod_delta();
  auto target = w(d, "e^-1 f d^-1 e f^-1 d");
  for (auto const* s : {"a^-1 d^-1 f b^-1 e^-1 d a f^-1 e b", "b^-1 e^-1 d c^-1 f^-1 e b d^-1 f c",
                        "c^-1 f^-1 e a^-1 d^-1 f c e^-1 d a"}) {
    EXPECT_FALSE(is_conjugate(d, w(d, s), target)) << s;
    EXPECT_TRUE(is_conjugate(d, w(d, s), inverse(target))) << s;
    EXPECT_EQ(cyclically_reduce(d, w(d, s)).core.size(), 6u);
  }
}

TEST(Conjugacy, RandomConjugatesAreDetected) {
  std::mt19937 rng(2);
  for (int t = 0; t < 300; ++t) {
    auto d = oracle::random_commutation_graph(rng, 5, 0.4);
    auto x = oracle::random_word(rng, 5, 7);
    auto g = oracle::random_word(rng, 5, 5);
    auto y = concat(concat(g, x), inverse(g));
    ASSERT_TRUE(is_conjugate(d, x, y));
    ASSERT_EQ(cyclic_normal_form(d, x), cyclic_normal_form(d, y));
    // Abelianization is a conjugacy invariant.
    auto z = oracle::random_word(rng, 5, 7);
    std::vector<int> ax(5, 0), az(5, 0);
    for (auto const& l : x) ax[l.gen] += l.sign();
    for (auto const& l : z) az[l.gen] += l.sign();
    if (ax != az) {
      ASSERT_FALSE(is_conjugate(d, x, z));
    }
  }
}

TEST(PrimitiveRoot, Examples) {
  auto d = tripod_delta();
  auto r = primitive_root(d, w(d, "a b a b a b"));
  EXPECT_EQ(r.exponent, 3);
  EXPECT_EQ(r.root, w(d, "a b"));
  // a, b commute: a^2 b^2 = (ab)^2, a^2 b^3 is primitive.
  EXPECT_EQ(primitive_root(d, w(d, "a a b b")).exponent, 2);
  EXPECT_EQ(primitive_root(d, w(d, "a a b b b")).exponent, 1);
  EXPECT_EQ(primitive_root(d, w(d, "d e d e")).exponent, 2);
  EXPECT_EQ(primitive_root(d, w(d, "f d e d e f^-1")).exponent, 2);
  EXPECT_THROW(primitive_root(d, w(d, "a a^-1")), DomainError);
}

TEST(PrimitiveRoot, PowersOfRandomWords) {
  std::mt19937 rng(4);
  for (int t = 0; t < 200; ++t) {
    auto d = oracle::random_commutation_graph(rng, 4, 0.4);
    auto x = oracle::random_word(rng, 4, 5);
    if (is_trivial(d, x)) continue;
    auto r = primitive_root(d, x);
    // x is conjugate to r^k, and r^k for k >= 2 has root r with exponent scaled.
    ASSERT_TRUE(is_conjugate(d, x, power(r.root, r.exponent)));
    auto p = primitive_root(d, power(x, 3));
    ASSERT_EQ(p.exponent, 3 * r.exponent);
    ASSERT_TRUE(is_conjugate(d, p.root, r.root));
  }
}

TEST(Retraction, DeletesGeneratorsOutsideKeep) {
  auto d = tripod_delta();
  auto x = w(d, "a d b e");
  EXPECT_EQ(retract_to(d, x, {0, 1}), w(d, "a b"));
  EXPECT_EQ(retract_to(d, x, {0, 1, 2, 3, 4, 5}), normal_form(d, x).word);
}

TEST(Special, InducedLocalizeGlobalize) {
  auto d = tripod_delta();
  std::vector<Gen> keep{3, 4, 5};
  auto local = d.induced(keep);
  EXPECT_EQ(local.size(), 3u);
  EXPECT_EQ(local.edge_count(), 0u);
  auto x = w(d, "d e^-1 f");
  auto lx = localize(x, keep);
  EXPECT_EQ(format_word(local, lx), "d e^-1 f");
  EXPECT_EQ(globalize(lx, keep), x);
  EXPECT_TRUE(supports_commute(d, {0}, {1, 2}));
  EXPECT_FALSE(supports_commute(d, {0}, {3}));
  EXPECT_FALSE(supports_commute(d, {0}, {0, 1}));
}
