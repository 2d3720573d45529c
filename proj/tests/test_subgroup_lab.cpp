#include <gtest/gtest.h>

#include "gbraid/subgroup_lab.hpp"
#include "support/oracles.hpp"

using namespace gbraid;

TEST(Placement, TripodUsesLeaves) {
  auto p = place_basepoint(tripod_subdivided(), 3);
  EXPECT_EQ(p.parked(), (std::vector<VertexId>{4, 5, 6}));
  for (auto const& t : p.tokens) {
    EXPECT_EQ(t.role, TokenRole::serving);
    EXPECT_EQ(t.near_vertex, VertexId{0});
  }
}

TEST(Placement, StarUsesTwoLeaves) {
  auto p = place_basepoint(star_graph(4), 2);
  EXPECT_EQ(p.parked(), (std::vector<VertexId>{1, 2}));
}

TEST(Placement, FillersGoFarthestFromEssentialVertices) {
  // Star with a long tail: fillers land at the end of the tail.
  auto g = star_graph(4);
  auto s = apply_subdivision(g, {{3, 3, 3, 6}, 4});
  auto p = place_basepoint(s.graph, 4);
  std::vector<VertexId> fillers;
  for (auto const& t : p.tokens)
    if (t.role == TokenRole::filler) fillers.push_back(t.vertex);
  ASSERT_EQ(fillers.size(), 2u);
  auto dist = bfs_distances(s.graph, 0);
  for (auto f : fillers) EXPECT_GE(dist[f], 4u);
}

TEST(Placement, TwoTripodsThreeTokensEach) {
  auto prep = prepare_configuration(two_tripods(), 6);
  auto const& g = prep.graph();
  auto prof = degree_profile(g);
  ASSERT_EQ(prof.m, 2u);
  for (auto v : prof.essential_vertices) {
    auto served = prep.placement.serving(v);
    ASSERT_EQ(served.size(), 3u);
    for (auto x : served) EXPECT_EQ(edge_distance(g, v, x), 2u);
  }
}

TEST(Placement, Errors) {
  EXPECT_THROW(place_basepoint(tripod_subdivided(), 2), DomainError);  // below threshold
  EXPECT_THROW(place_basepoint(star_graph(3), 3), DomainError);        // not subdivided
}

TEST(LocalFactors, TripodWordsAsPrinted) {
  auto g = tripod_subdivided();
  auto d = build_delta(g);
  auto f = local_factors(g, 3, place_basepoint(g, 3));
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].rank, 3u);
  ASSERT_EQ(f[0].free_words.size(), 3u);
  EXPECT_EQ(format_word(d, f[0].free_words[0]), "a^-1 d^-1 f b^-1 e^-1 d a f^-1 e b");
  EXPECT_EQ(format_word(d, f[0].free_words[1]), "b^-1 e^-1 d c^-1 f^-1 e b d^-1 f c");
  EXPECT_EQ(format_word(d, f[0].free_words[2]), "c^-1 f^-1 e a^-1 d^-1 f c e^-1 d a");
  EXPECT_EQ(f[0].support, (std::vector<Gen>{0, 1, 2, 3, 4, 5}));
}

TEST(LocalFactors, StarWords) {
  for (int k = 4; k <= 6; ++k) {
    auto g = star_graph(k);
    auto d = build_delta(g);
    auto f = local_factors(g, 2, place_basepoint(g, 2));
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(f[0].rank, static_cast<std::size_t>(k - 2));
    ASSERT_EQ(f[0].free_words.size(), static_cast<std::size_t>(k - 2));
    EXPECT_EQ(format_word(d, f[0].free_words[0]), "a1^-1 a3 a2^-1 a1 a3^-1 a2");
    EXPECT_EQ(oracle::stallings_fold(f[0].free_words).rank(), static_cast<std::size_t>(k - 2));
  }
}

TEST(LocalFactors, WordsLiftToLoops) {
  auto prep = prepare_configuration(two_tripods(), 6);
  auto const& g = prep.graph();
  for (auto const& f : local_factors(g, 6, prep.placement))
    for (auto const& w : f.free_words) EXPECT_TRUE(is_loop_word(g, prep.placement.parked(), w));
}

TEST(LocalFactors, PlacementMustServeVertex) {
  auto g = tripod_subdivided();
  TokenPlacement p;
  for (VertexId v : {1, 5, 6}) p.tokens.push_back({v, TokenRole::serving, VertexId{0}});
  EXPECT_THROW(local_factors(g, 3, p), DomainError);
}

TEST(ProductWitness, TwoTripods) {
  auto prep = prepare_configuration(two_tripods(), 6);
  auto const& g = prep.graph();
  auto d = build_delta(g);
  auto f = local_factors(g, 6, prep.placement);
  auto pw = product_witness(d, f);
  ASSERT_EQ(pw.words.size(), 2u);
  for (auto const& x : pw.words[0])
    for (auto const& y : pw.words[1]) EXPECT_TRUE(is_trivial(d, commutator(x, y)));
  for (auto const& pr : pw.words) EXPECT_FALSE(is_trivial(d, commutator(pr[0], pr[1])));
}

TEST(ProductWitness, OverlappingSupportsRejected) {
  auto g = star_graph(4);
  auto d = build_delta(g);
  auto f = local_factors(g, 2, place_basepoint(g, 2));
  f.push_back(f[0]);
  EXPECT_THROW(product_witness(d, f), DomainError);
  EXPECT_THROW(product_witness(d, {}), DomainError);
}

TEST(Leaves, TripodFirstWordAgainstProductOfOthers) {
  auto g = tripod_subdivided();
  auto d = build_delta(g);
  auto f = local_factors(g, 3, place_basepoint(g, 3))[0];
  auto lc = leaf_check(d, f.free_words[0], concat(f.free_words[1], f.free_words[2]), f.support);
  EXPECT_EQ(lc.verdict, LeafVerdict::disjoint);
  EXPECT_EQ(lc.root_w.exponent, 1);
  EXPECT_FALSE(lc.roots_conjugate);
  EXPECT_FALSE(lc.roots_inverse_conjugate);
}

TEST(Leaves, SameElementIsEntangled) {
  auto g = tripod_subdivided();
  auto d = build_delta(g);
  auto x = local_factors(g, 3, place_basepoint(g, 3))[0].free_words[0];
  EXPECT_EQ(leaf_check(d, x, x, {0, 1, 2, 3, 4, 5}).verdict, LeafVerdict::entangled);
  EXPECT_EQ(leaf_check(d, x, power(inverse(x), 2), {0, 1, 2, 3, 4, 5}).verdict, LeafVerdict::entangled);
  EXPECT_THROW(leaf_check(d, x, {}, {0, 1, 2, 3, 4, 5}), DomainError);
}

TEST(Leaves, StarGeneratorsNotConjugate) {
  auto g = star_graph(4);
  auto d = build_delta(g);
  auto f = local_factors(g, 2, place_basepoint(g, 2))[0];
  EXPECT_FALSE(is_conjugate(d, f.free_words[0], f.free_words[1]));
  EXPECT_EQ(leaf_check(d, f.free_words[0], f.free_words[1], f.support).verdict, LeafVerdict::disjoint);
}

TEST(CyclicPairs, SearchOrderAndChoice) {
  auto g = tripod_subdivided();
  auto d = build_delta(g);
  auto f = local_factors(g, 3, place_basepoint(g, 3))[0];
  auto cands = cyclic_candidates(f.free_words[0], f.free_words[1], 2);
  // Two commutators, then 4 + 12 freely reduced words.
  EXPECT_EQ(cands.size(), 2u + 4u + 12u);
  EXPECT_EQ(cands[0], commutator(f.free_words[0], f.free_words[1]));
  auto p = choose_disjoint_cyclics(d, f);
  EXPECT_EQ(p.c0, f.free_words[0]);
  EXPECT_EQ(p.c1, cands[0]);
  EXPECT_EQ(p.candidates_tried, 1u);
  EXPECT_EQ(p.leaf.verdict, LeafVerdict::disjoint);
}

TEST(Assemble, TwoTripodsCommuteAcrossFactors) {
  auto ev = certify_tc(two_tripods(), 6);
  auto d = build_delta(ev.prepared.graph());
  ASSERT_EQ(ev.subgroups.h0.size(), 2u);
  ASSERT_EQ(ev.subgroups.h1.size(), 2u);
  EXPECT_TRUE(is_trivial(d, commutator(ev.subgroups.h0[0], ev.subgroups.h0[1])));
  EXPECT_TRUE(is_trivial(d, commutator(ev.subgroups.h1[0], ev.subgroups.h1[1])));
}

TEST(Assemble, ChainOfThreeTripods) {
  auto ev = certify_tc(tripod_chain(3), 9);
  EXPECT_EQ(ev.subgroups.h0.size(), 3u);
  EXPECT_EQ(ev.certificate.leaf_count(), 3u);
}

TEST(Certificate, TwoTripodsValidates) {
  auto ev = certify_tc(two_tripods(), 6);
  EXPECT_EQ(ev.certificate.leaf_count(), 2u);
  EXPECT_EQ(ev.certificate.rule_count(), 3u);
  EXPECT_EQ(ev.certificate.nodes[0].rule, Rule::subgroup);
  EXPECT_EQ(ev.certificate.nodes[1].rule, Rule::retraction);
  EXPECT_EQ(ev.certificate.nodes[2].rule, Rule::product);
}

TEST(Certificate, SingleStar) {
  auto ev = certify_tc(star_graph(4), 2);
  EXPECT_EQ(ev.certificate.leaf_count(), 1u);
}

TEST(Certificate, CorruptLeafIsRefused) {
  auto ev = certify_tc(two_tripods(), 6);
  auto sp = ev.subgroups;
  sp.h1[1] = sp.h0[1];
  try {
    certify_disjoint_conjugates(ev.prepared.graph(), 6, ev.prepared.placement.parked(), sp);
    FAIL() << "corrupt certificate accepted";
  } catch (CertificateRefused const& e) {
    EXPECT_EQ(e.node(), "leaf 1");
  }
}

TEST(Certificate, NonLoopIsRefusedAtSubgroupRule) {
  auto ev = certify_tc(two_tripods(), 6);
  auto sp = ev.subgroups;
  sp.h0[0].pop_back();
  try {
    certify_disjoint_conjugates(ev.prepared.graph(), 6, ev.prepared.placement.parked(), sp);
    FAIL() << "accepted";
  } catch (CertificateRefused const& e) {
    EXPECT_EQ(e.node(), "rule subgroup");
  }
}

TEST(CertificateText, RoundTripAndVerify) {
  auto ev = certify_tc(two_tripods(), 6);
  auto text = serialize_certificate(ev.certificate);
  EXPECT_EQ(text.rfind("gbraid-certificate 1\n", 0), 0u);
  EXPECT_NE(text.find("rule retraction side_conditions=checked"), std::string::npos);
  EXPECT_NE(text.find("leaf root_conj u=["), std::string::npos);
  auto cl = parse_certificate(text);
  auto cert = verify_certificate(cl);
  EXPECT_EQ(serialize_certificate(cert), text);
}

TEST(CertificateText, TamperingFails) {
  auto text = serialize_certificate(certify_tc(star_graph(4), 2).certificate);
  auto swap = [&](std::string const& from, std::string const& to) {
    auto t = text;
    auto pos = t.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    t.replace(pos, from.size(), to);
    return t;
  };
  EXPECT_THROW(verify_certificate(parse_certificate(swap("verdict=disjoint", "verdict=entangled"))), Error);
  EXPECT_THROW(verify_certificate(parse_certificate(swap("exp_u=1", "exp_u=2"))), Error);
  EXPECT_THROW(verify_certificate(parse_certificate(swap("rule product", "rule homomorphism"))), Error);
  EXPECT_THROW(verify_certificate(parse_certificate(swap("basepoint 1,2", "basepoint 1,3"))), Error);
  EXPECT_THROW(verify_certificate(parse_certificate(swap("factors=1", "factors=2"))), Error);
  EXPECT_THROW(parse_certificate(swap("side_conditions=checked", "side_conditions=pending")), ParseError);
  EXPECT_THROW(parse_certificate(swap("gbraid-certificate 1", "certificate")), ParseError);
  // Replace C1 by C0.
  auto u0 = text.find("u=[") + 3;
  auto u = text.substr(u0, text.find(']', u0) - u0);
  auto w0 = text.find("w=[") + 3;
  auto t = text;
  t.replace(w0, t.find(']', w0) - w0, u);
  EXPECT_THROW(verify_certificate(parse_certificate(t)), CertificateRefused);
}

TEST(Abelianization, RuleChecker) {
  auto d = build_delta(star_graph(4));
  auto x = parse_word(d, "a1^-1 a3 a2^-1 a1 a3^-1 a2");
  EXPECT_TRUE(check_abelianization_rule(d, {x}, {parse_word(d, "a1"), parse_word(d, "a2 a3")}));
  EXPECT_FALSE(check_abelianization_rule(d, {parse_word(d, "a1")}, {parse_word(d, "a2")}));
  EXPECT_FALSE(check_abelianization_rule(d, {x}, {parse_word(d, "a1 a2"), parse_word(d, "a2 a1")}));
}

// Exhaustive search over short conjugators for star and tripod leaves.
TEST(Soundness, NoCoincidenceForValidLeaves) {
  auto ev = certify_tc(star_graph(4), 2);
  auto const& leaf = *ev.certificate.nodes.back().leaf;
  auto d = build_delta(star_graph(4));
  EXPECT_FALSE(oracle::search_coincidence(d, leaf.u, leaf.w, 4, 4));
}

TEST(Soundness, SearchFindsPlantedConjugate) {
  auto d = build_delta(star_graph(4));
  auto u = parse_word(d, "a1 a2^-1");
  auto g = parse_word(d, "a3 a4");
  auto w = power(concat(concat(g, u), inverse(g)), -2);
  auto hit = oracle::search_coincidence(d, u, w, 2, 4);
  ASSERT_TRUE(hit);
  EXPECT_TRUE(is_equal(d, concat(concat(hit->g, power(u, hit->i)), inverse(hit->g)), power(w, hit->j)));
}
