#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "gbraid/cube_complex.hpp"
#include "support/oracles.hpp"

using namespace gbraid;

namespace {

std::vector<std::size_t> counts(std::vector<std::set<Cell>> const& cells) {
  std::vector<std::size_t> f;
  for (auto const& s : cells) f.push_back(s.size());
  return f;
}

void expect_matches_oracle(Graph const& g, std::size_t n) {
  auto c = build_config_complex(g, n, {true});
  auto ref = oracle::brute_force_cells(g, n);
  ASSERT_EQ(f_vector(c), counts(ref)) << format_graph(g) << "n=" << n;
  for (std::size_t k = 0; k <= n; ++k) {
    std::vector<Cell> got;
    for (std::size_t i = 0; i < c.count(k); ++i) got.push_back(c.cell(k, i));
    ASSERT_EQ(got, std::vector<Cell>(ref[k].begin(), ref[k].end())) << "dimension " << k;
  }
}

}  // namespace

TEST(CubeComplex, HexagonCounts) {
  auto c = build_config_complex(star_graph(3), 2, {true});
  EXPECT_EQ(f_vector(c), (std::vector<std::size_t>{6, 6, 0}));
  EXPECT_EQ(euler_characteristic(c), 0);
  EXPECT_EQ(dimension(c), 1);
  EXPECT_EQ(components(c), 1u);
  EXPECT_TRUE(c.models_configuration_space());
}

TEST(CubeComplex, OnceSubdividedTripodCounts) {
  auto c = build_config_complex(tripod_subdivided(), 3);
  EXPECT_EQ(f_vector(c), (std::vector<std::size_t>{35, 60, 27, 4}));
  EXPECT_EQ(euler_characteristic(c), -2);
  EXPECT_EQ(dimension(c), 3);
}

TEST(CubeComplex, Star4TwoTokens) {
  auto c = build_config_complex(star_graph(4), 2, {true});
  EXPECT_EQ(f_vector(c), (std::vector<std::size_t>{10, 12, 0}));
}

TEST(CubeComplex, RefusesUnsubdividedWithoutOverride) {
  EXPECT_THROW(build_config_complex(star_graph(3), 3), DomainError);
  auto c = build_config_complex(star_graph(3), 3, {true});
  EXPECT_FALSE(c.models_configuration_space());
}

TEST(CubeComplex, MoreTokensThanVerticesIsEmpty) {
  auto c = build_config_complex(star_graph(3), 5, {true});
  EXPECT_EQ(c.total_cells(), 0u);
  EXPECT_EQ(dimension(c), -1);
}

TEST(CubeComplex, CellsMatchTupleEnumeration) {
  expect_matches_oracle(star_graph(3), 2);
  expect_matches_oracle(star_graph(4), 2);
  expect_matches_oracle(star_graph(3), 3);
  expect_matches_oracle(tripod_subdivided(), 3);
  expect_matches_oracle(two_tripods(), 3);
  std::mt19937 rng(11);
  for (int i = 0; i < 25; ++i) expect_matches_oracle(oracle::random_graph(rng, 6, 0.4), 1 + i % 3);
}

TEST(CubeComplex, CellsAreValidAndSorted) {
  auto g = tripod_subdivided();
  auto c = build_config_complex(g, 3);
  for (std::size_t k = 0; k < c.grades(); ++k)
    for (std::size_t i = 0; i < c.count(k); ++i) {
      auto cell = c.cell(k, i);
      EXPECT_TRUE(is_valid_cell(g, 3, cell));
      EXPECT_EQ(c.find(cell), i);
      if (i) {
        EXPECT_LT(c.cell(k, i - 1), cell);
      }
      for (std::size_t j = 0; j < k; ++j)
        for (bool head : {false, true}) EXPECT_TRUE(c.find(facet(g, cell, j, head)));
    }
}

TEST(CubeComplex, FacetReplacesEdgeByEndpoint) {
  auto g = star_graph(3);
  Cell c{{0}, {2}};
  EXPECT_EQ(facet(g, c, 0, false), (Cell{{}, {0, 2}}));
  EXPECT_EQ(facet(g, c, 0, true), (Cell{{}, {1, 2}}));
}

TEST(CubeComplex, ValidityChecks) {
  auto g = star_graph(3);
  EXPECT_TRUE(is_valid_cell(g, 2, {{0}, {2}}));
  EXPECT_FALSE(is_valid_cell(g, 2, {{0}, {0}}));     // parked on a moving edge
  EXPECT_FALSE(is_valid_cell(g, 2, {{0, 1}, {}}));   // edges share the center
  EXPECT_FALSE(is_valid_cell(g, 3, {{0}, {2}}));     // wrong token count
  EXPECT_FALSE(is_valid_cell(g, 2, {{}, {3, 1}}));   // unsorted
}

TEST(CubeComplex, DumpFormat) {
  auto c = build_config_complex(star_graph(3), 2, {true});
  std::ostringstream out;
  dump_complex(out, c);
  auto s = out.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "cell 0 edges= verts=0,1");
  EXPECT_NE(s.find("cell 1 edges=0 verts=2\n"), std::string::npos);
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 12);
}

TEST(CubeComplex, AddValidatesAndRemoveKeepsOrder) {
  auto g = star_graph(3);
  CubeComplex c(g, 2);
  EXPECT_THROW(c.add({{0}, {0}}), DomainError);
  c.add({{}, {2, 3}});
  c.add({{}, {0, 1}});
  c.add({{0}, {2}});
  c.finalize();
  EXPECT_EQ(c.cell(0, 0), (Cell{{}, {0, 1}}));
  c.remove_cell(0, 0);
  EXPECT_EQ(c.count(0), 1u);
  EXPECT_EQ(c.cell(0, 0), (Cell{{}, {2, 3}}));
}

TEST(Links, HexagonVertexHasTwoGerms) {
  auto c = build_config_complex(star_graph(3), 2, {true});
  for (std::size_t v = 0; v < c.count(0); ++v) {
    auto link = vertex_link(c, v);
    EXPECT_EQ(link.germs.size(), 2u);
    EXPECT_EQ(link.simplices.size(), 2u);
  }
}

TEST(Links, TripodCornerOfTopCube) {
  auto g = tripod_subdivided();
  auto c = build_config_complex(g, 3);
  // Tokens at the three mids can each move outward: a 3-cube at that corner.
  auto v = c.find(Cell{{}, {1, 2, 3}});
  ASSERT_TRUE(v);
  auto link = vertex_link(c, *v);
  EXPECT_TRUE(link.simplices.count({0, 1, 2}));
}

TEST(Npc, PassesOnSubdividedBuilds) {
  EXPECT_TRUE(npc_check(build_config_complex(tripod_subdivided(), 3)).ok);
  EXPECT_TRUE(npc_check(build_config_complex(star_graph(4), 2)).ok);
  std::mt19937 rng(3);
  for (int i = 0; i < 20; ++i) {
    auto g = oracle::random_graph(rng, 6, 0.4);
    std::size_t n = 1 + i % 3;
    if (g.edge_count() == 0 && g.vertex_count() < n) continue;
    auto s = subdivide_for(g, n);
    auto c = build_config_complex(s.graph, n, {true});
    EXPECT_TRUE(npc_check(c).ok) << format_graph(s.graph);
  }
}

TEST(Npc, DetectsMissingSquare) {
  auto g = tripod_subdivided();
  auto c = build_config_complex(g, 3);
  // Removing a 2-cube leaves its corner link with an empty edge-triangle or
  // a hollow pair inside a 3-cube's link.
  auto top = c.cell(3, 0);
  auto square = facet(g, top, 0, false);
  auto idx = c.find(square);
  ASSERT_TRUE(idx);
  c.remove_cell(2, *idx);
  c.remove_cell(3, 0);
  auto r = npc_check(c);
  EXPECT_FALSE(r.ok);
  EXPECT_TRUE(r.failing_vertex.has_value());
}
