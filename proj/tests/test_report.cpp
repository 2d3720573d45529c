#include <gtest/gtest.h>

#include <random>

#include "gbraid/report.hpp"
#include "support/oracles.hpp"

using namespace gbraid;

TEST(Report, TwoTripodsWithCertificate) {
  auto g = two_tripods();
  auto ev = certify_tc(g, 6);
  ReportArtifacts art;
  art.certificate = &ev.certificate;
  auto r = compute_report(g, 6, art);
  EXPECT_EQ(r.m, 2u);
  EXPECT_EQ(r.m3, 2u);
  EXPECT_EQ(r.threshold, 6u);
  EXPECT_EQ(r.tc_value, 4);
  EXPECT_EQ(r.action_dimension, 4);
  EXPECT_EQ(r.l2_nonvanishing_degree, 2);
  EXPECT_EQ(r.swiatkowski_dim_bound, 2u);
  EXPECT_EQ(r.swiatkowski_abelian_rank, 2u);
  EXPECT_EQ(r.complex_dimension, 6);
  auto text = render_report(r);
  EXPECT_NE(text.find("\ntc: 4\n"), std::string::npos);
}

TEST(Report, NoCertificateMeansUnknownTc) {
  auto r = compute_report(two_tripods(), 6);
  EXPECT_FALSE(r.tc_value);
  auto text = render_report(r);
  EXPECT_NE(text.find("tc: unknown\n"), std::string::npos);
  EXPECT_NE(text.find("  - tc unknown: no certificate supplied\n"), std::string::npos);
}

TEST(Report, TrustFlagFillsWithCaveat) {
  ReportArtifacts art;
  art.trust_paper = true;
  auto r = compute_report(two_tripods(), 6, art);
  EXPECT_EQ(r.tc_value, 4);
  EXPECT_EQ(r.tc_lower_source, "cited");
  bool cited = false;
  for (auto const& c : r.caveats) cited |= c.find("cited, not certified") != std::string::npos;
  EXPECT_TRUE(cited);
}

TEST(Report, BelowThreshold) {
  auto r = compute_report(tripod_subdivided(), 2);
  EXPECT_FALSE(r.tc_value);
  EXPECT_FALSE(r.action_dimension);
  EXPECT_FALSE(r.l2_nonvanishing_degree);
  ASSERT_FALSE(r.caveats.empty());
  EXPECT_EQ(r.caveats.back().rfind("n below 2m+m3", 0), 0u);
}

TEST(Report, SegmentHasNoEssentialVertex) {
  Graph seg(2);
  seg.add_edge(0, 1);
  auto r = compute_report(seg, 3);
  EXPECT_EQ(r.m, 0u);
  EXPECT_FALSE(r.tc_value);
  EXPECT_EQ(r.swiatkowski_dim_bound, 0u);
}

TEST(Report, CertificateForOtherNIsNotAccepted) {
  auto ev = certify_tc(star_graph(4), 2);
  ReportArtifacts art;
  art.certificate = &ev.certificate;
  auto r = compute_report(star_graph(4), 3, art);
  EXPECT_FALSE(r.tc_value);
}

TEST(Report, KeyOrder) {
  auto text = render_report(compute_report(star_graph(3), 2));
  std::vector<std::string> keys;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (line.rfind("  - ", 0) != 0) keys.push_back(line.substr(0, line.find(':')));
  EXPECT_EQ(keys, (std::vector<std::string>{"m", "m3", "threshold", "n", "dim_complex", "dim_bound_swiatkowski",
                                            "abelian_rank_swiatkowski", "tc", "tc_lower_certificate", "actdim",
                                            "l2_degree", "caveats[]"}));
}

TEST(Report, JsonKeysInOrder) {
  auto j = report_json(compute_report(star_graph(4), 2));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys.front(), "m");
  EXPECT_EQ(keys[7], "tc");
  EXPECT_TRUE(j["tc"].is_null());
  EXPECT_THROW(parse_report_format("xml"), DomainError);
}

TEST(Report, RoundTripIsExact) {
  std::vector<InvariantReport> reports{compute_report(star_graph(3), 2), compute_report(star_graph(4), 2),
                                       compute_report(two_tripods(), 6)};
  auto ev = certify_tc(star_graph(4), 2);
  ReportArtifacts art;
  art.certificate = &ev.certificate;
  reports.push_back(compute_report(star_graph(4), 2, art));
  for (auto const& r : reports) {
    auto text = render_report(r);
    auto back = parse_report(text);
    EXPECT_EQ(back, r);
    EXPECT_EQ(render_report(back), text);
  }
  EXPECT_THROW(parse_report("m: 1\n"), ParseError);
}

TEST(Report, GatingIsMonotoneInN) {
  for (auto const& g : {star_graph(4), tripod_subdivided()}) {
    bool seen = false;
    ReportArtifacts art;
    art.trust_paper = true;
    for (std::size_t n = 1; n <= 5; ++n) {
      auto r = compute_report(g, n, art);
      if (seen) {
        EXPECT_TRUE(r.tc_value);
        EXPECT_TRUE(r.action_dimension);
        EXPECT_TRUE(r.l2_nonvanishing_degree);
      }
      seen |= r.tc_value.has_value();
    }
    EXPECT_TRUE(seen);
  }
}

TEST(Report, HomologyNeverExceedsDimension) {
  for (auto const& [g, n] : std::vector<std::pair<Graph, std::size_t>>{{tripod_subdivided(), 3}, {star_graph(4), 2}}) {
    auto c = build_config_complex(g, n, {true});
    ReportArtifacts art;
    art.homology = homology(c);
    auto r = compute_report(g, n, art);
    for (auto const& cv : r.caveats) EXPECT_EQ(cv.find("exceeds dim_complex"), std::string::npos);
  }
}

// dim_complex from matchings agrees with the top grade of built complexes.
TEST(ComplexDimension, MatchesBuiltComplex) {
  std::mt19937 rng(23);
  for (int t = 0; t < 60; ++t) {
    auto g = oracle::random_graph(rng, 7, 0.35);
    std::size_t n = 1 + t % 4;
    EXPECT_EQ(matching_number(g), oracle::brute_matching(g));
    auto c = build_config_complex(g, n, {true});
    EXPECT_EQ(complex_dimension(g, n), dimension(c)) << format_graph(g) << "n=" << n;
  }
}
