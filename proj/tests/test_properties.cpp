#include <gtest/gtest.h>

#include <random>

#include "gbraid/gbraid.hpp"
#include "support/oracles.hpp"

using namespace gbraid;

// Normal forms against the rewriting closure: words up to length 8 over up
// to 6 generators.
TEST(NormalFormProperty, MatchesRewritingClosure) {
  std::mt19937 rng(8);
  std::uniform_int_distribution<std::size_t> gens(1, 6);
  std::uniform_real_distribution<double> density(0.0, 1.0);
  for (int t = 0; t < 10000; ++t) {
    auto k = gens(rng);
    auto d = oracle::random_commutation_graph(rng, k, density(rng));
    auto x = oracle::random_word(rng, k, 8);
    ASSERT_EQ(normal_form(d, x).word, oracle::closure_normal_form(d, x)) << t;
  }
}

TEST(NormalFormProperty, IdempotentAndInverseCancels) {
  std::mt19937 rng(9);
  for (int t = 0; t < 2000; ++t) {
    auto d = oracle::random_commutation_graph(rng, 6, 0.4);
    auto x = oracle::random_word(rng, 6, 12);
    auto nf = normal_form(d, x).word;
    ASSERT_EQ(normal_form(d, nf).word, nf);
    ASSERT_TRUE(is_trivial(d, concat(x, inverse(x))));
  }
}

TEST(NpcProperty, SubdividedRandomGraphs) {
  std::mt19937 rng(12);
  for (int t = 0; t < 30; ++t) {
    auto g = oracle::random_graph(rng, 6, 0.35);
    std::size_t n = 1 + t % 3;
    if (g.edge_count() == 0 && g.vertex_count() < n) continue;
    auto s = subdivide_for(g, n);
    auto c = build_config_complex(s.graph, n, {true});
    ASSERT_TRUE(npc_check(c).ok) << format_graph(s.graph);
    ASSERT_FALSE(find_nonzero_double_boundary(c));
    auto d = build_delta(s.graph);
    ASSERT_TRUE(check_local_isometry(build_cw_map(c, d)).ok);
  }
}
