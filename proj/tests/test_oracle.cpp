#include <gtest/gtest.h>

#include "best2cop/oracle.hpp"
#include "support.hpp"

using namespace best2cop;

namespace {

SrGraph complete_graph(std::size_t n, unsigned parallel, DelayUnits w1) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("v" + std::to_string(i));
  std::vector<SrEdge> edges;
  for (NodeIndex u = 0; u < n; ++u)
    for (NodeIndex v = 0; v < n; ++v) {
      if (u == v) continue;
      edges.push_back({u, v, SegmentKind::Node, 0, w1, 1});
      for (unsigned k = 1; k < parallel; ++k) edges.push_back({u, v, SegmentKind::Adjacency, k, w1, 1 + k});
    }
  return SrGraph::from_edges(labels, edges, AccuracyGrain(10));
}

}  // namespace

TEST(OracleEnumeration, CountsEveryWalk) {
  for (std::size_t n : {2u, 3u, 5u})
    for (unsigned L : {1u, 2u, 3u})
      for (unsigned len : {1u, 2u, 3u}) {
        const SrGraph g = complete_graph(n, L, 1);
        std::size_t expected = 0, layer = 1;
        for (unsigned i = 1; i <= len; ++i) expected += (layer *= L * (n - 1));
        EXPECT_EQ(oracle::enumerate_paths(g, 0, len, 1000).size(), expected) << n << " " << L << " " << len;
      }
}

TEST(OracleEnumeration, DelayCapPrunes) {
  const SrGraph g = complete_graph(4, 1, 10);
  // Walks of length <= 2 only.
  EXPECT_EQ(oracle::enumerate_paths(g, 0, 10, 29).size(), 3u + 9u);
  for (const auto& w : oracle::enumerate_paths(g, 0, 10, 29)) {
    EXPECT_EQ(w.m0, w.edges.size());
    EXPECT_EQ(w.m1, 10u * w.m0);
    EXPECT_EQ(w.m2, w.m0);
  }
  EXPECT_TRUE(oracle::enumerate_paths(g, 0, 10, 9).empty());
}

TEST(OracleEnumeration, BudgetGuard) {
  const SrGraph g = complete_graph(8, 3, 1);
  oracle::OracleOptions small;
  small.extension_budget = 1000;
  EXPECT_THROW(oracle::enumerate_paths(g, 0, 6, 1000, small), oracle::BudgetExceeded);
  EXPECT_THROW(oracle::oracle_fronts(g, 0, 6, 1000, small), oracle::BudgetExceeded);
  EXPECT_THROW(oracle::enumerate_paths(g, 9, 1, 10), std::invalid_argument);
}

TEST(OracleFronts, ParetoAndFewestSegments) {
  // a->b directly (10;9); a->c->b (4+4;1+1); a->c->d->b (1+1+1;...).
  const SrGraph g = SrGraph::from_edges({"a", "b", "c", "d"},
                                        {{0, 1, SegmentKind::Node, 0, 10, 9},
                                         {0, 2, SegmentKind::Node, 0, 4, 1},
                                         {2, 1, SegmentKind::Node, 0, 4, 1},
                                         {2, 1, SegmentKind::Adjacency, 1, 6, 1},
                                         {2, 3, SegmentKind::Node, 0, 1, 5},
                                         {3, 1, SegmentKind::Node, 0, 1, 5}},
                                        AccuracyGrain(10));
  const auto by_len = oracle::oracle_fronts_by_length(g, 0, 3, 100);
  ASSERT_EQ(by_len.size(), 4u);
  EXPECT_EQ(by_len[0][0], (Front{{0, 0, 0}}));
  EXPECT_TRUE(by_len[0][1].empty());
  EXPECT_EQ(by_len[1][1], (Front{{10, 9, 1}}));
  EXPECT_EQ(by_len[2][1], (Front{{8, 2, 2}}));
  EXPECT_EQ(by_len[3][1], (Front{{6, 11, 3}, {8, 2, 2}}));
  EXPECT_EQ(oracle::oracle_fronts(g, 0, 3, 100)[1], by_len[3][1]);
  // gamma = min(7, 3 * 10) cuts the two-segment point.
  EXPECT_EQ(oracle::oracle_fronts(g, 0, 3, 7)[1], (Front{{6, 11, 3}}));
}

TEST(OracleFronts, UnboundedLengthStopsAtTheDelayCap) {
  const SrGraph g = complete_graph(3, 1, 10);
  const auto rows = oracle::oracle_fronts_by_length(g, 0, oracle::kNoLengthBound, 35);
  EXPECT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows.back()[1], (Front{{10, 1, 1}}));
}
