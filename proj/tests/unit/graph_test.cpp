#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <homofair/graph.hpp>

#include "oracles.hpp"

using namespace homofair;

namespace {

Graph parse(const std::string& text, EdgeListOptions opt = {}) {
  std::istringstream in(text);
  return parse_edge_list(in, opt);
}

Graph label(const Graph& g, const std::string& text) {
  std::istringstream in(text);
  return parse_labels(in, g);
}

}  // namespace

TEST(EdgeList, ParsesWhitespacePairs) {
  const Graph g = parse("0 1\n1 2");
  EXPECT_EQ(g.node_count(), 3);
  ASSERT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.edges()[0], (Edge{0, 1, 1.0}));
  EXPECT_EQ(g.edges()[1], (Edge{1, 2, 1.0}));
}

TEST(EdgeList, DuplicateEdgesSumWeights) {
  const Graph g = parse("0 1\n0 1\n");
  ASSERT_EQ(g.edge_count(), 1u);
  EXPECT_DOUBLE_EQ(g.edges()[0].weight, 2.0);
}

TEST(EdgeList, ReversedDuplicateCollapses) {
  const Graph g = parse("a,b\nb,a\n");
  ASSERT_EQ(g.edge_count(), 1u);
  EXPECT_DOUBLE_EQ(g.edges()[0].weight, 2.0);
}

TEST(EdgeList, DirectedReciprocalTakesLargerWeight) {
  const Graph g = parse("a\tb\t2\nb\ta\t3\n", {.directed_as_undirected = true});
  ASSERT_EQ(g.edge_count(), 1u);
  EXPECT_DOUBLE_EQ(g.edges()[0].weight, 3.0);
}

TEST(EdgeList, DropsSelfLoops) {
  const Graph g = parse("0 0\n0 1\n");
  EXPECT_EQ(g.edge_count(), 1u);
}

TEST(EdgeList, SkipsHeaderAndComments) {
  const Graph g = parse("# comment\nsource,target,weight\nx,y,1.5\ny,z,2\n");
  EXPECT_EQ(g.node_count(), 3);
  EXPECT_EQ(g.node_names()[0], "x");
  EXPECT_DOUBLE_EQ(g.edges()[0].weight, 1.5);
}

TEST(EdgeList, HeaderOfNamesAboveIntegerIds) {
  const Graph g = parse("from to\n1 2\n2 3\n");
  EXPECT_EQ(g.node_count(), 3);
}

TEST(EdgeList, MalformedLineReportsLineNumber) {
  try {
    parse("0 1\n1 2 3 4\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(EdgeList, EmptyInputIsAnError) {
  EXPECT_THROW(parse("# nothing\n"), ParseError);
  EXPECT_THROW(parse("3 3\n"), ParseError);
}

TEST(EdgeList, AdjacencyIsSymmetric) {
  const Graph g = parse("0 1 2\n1 2 0.5\n");
  ASSERT_EQ(g.neighbors(1).size(), 2u);
  EXPECT_EQ(g.neighbors(0)[0].node, 1);
  EXPECT_DOUBLE_EQ(g.neighbors(2)[0].weight, 0.5);
  EXPECT_DOUBLE_EQ(g.strength(1), 2.5);
}

TEST(EdgeList, RoundTripPreservesGraph) {
  std::mt19937_64 rng(5);
  std::vector<Edge> edges;
  std::uniform_real_distribution<double> w(0.1, 3.0);
  for (int i = 0; i < 30; ++i) edges.push_back({static_cast<NodeId>(rng() % 12), static_cast<NodeId>(rng() % 12), w(rng)});
  const Graph g(12, edges);
  std::ostringstream out;
  write_edge_list(g, out);
  const Graph back = parse(out.str());
  ASSERT_EQ(back.edge_count(), g.edge_count());
  for (const Edge& e : g.edges()) {
    const auto u = back.find_node(g.node_names().empty() ? std::to_string(e.u) : g.node_names()[static_cast<std::size_t>(e.u)]);
    const auto v = back.find_node(g.node_names().empty() ? std::to_string(e.v) : g.node_names()[static_cast<std::size_t>(e.v)]);
    ASSERT_TRUE(u && v);
    bool found = false;
    for (const Neighbor& nb : back.neighbors(*u)) {
      if (nb.node == *v) {
        found = true;
        EXPECT_EQ(nb.weight, e.weight);
      }
    }
    EXPECT_TRUE(found);
  }
}

TEST(Labels, AttachesCategories) {
  const Graph g = label(parse("a b\nb c\n"), "a,0\nb,0\nc,1\n");
  ASSERT_TRUE(g.fully_labeled());
  EXPECT_EQ(g.labels(), (Partition{0, 0, 1}));
  EXPECT_EQ(g.label_names(), (std::vector<std::string>{"0", "1"}));
}

TEST(Labels, HeaderIsOptional) {
  const Graph g = label(parse("1 2\n2 3\n"), "node_id,label\n1,x\n2,y\n3,x\n");
  EXPECT_EQ(g.labels(), (Partition{0, 1, 0}));
}

TEST(Labels, UnlabeledNodesAreFlagged) {
  const Graph g = label(parse("a b\nb c\n"), "a,0\n");
  EXPECT_FALSE(g.fully_labeled());
  EXPECT_EQ(g.labels()[2], kUnlabeled);
}

TEST(Labels, UnknownNodeIsAnError) {
  const Graph g = parse("a b\n");
  EXPECT_THROW(label(g, "a,0\nzz,1\n"), ParseError);
  EXPECT_THROW(label(g, "zz,1\na,0\n"), ParseError);
}

TEST(Labels, ContinuousColumnIsRejected) {
  EXPECT_THROW(label(parse("a b\n"), "a,0.25\nb,0.5\n"), ParseError);
}

TEST(Ratings, SkipsUnknownUsersAndCountsItems) {
  const Graph g = parse("u1 u2\n");
  std::istringstream in("user,item,count\nu1,i1,3\nu1,i2,1\nu2,i1,2\nghost,i9,1\n");
  const RatingTable t = parse_ratings(in, g);
  EXPECT_EQ(t.entries.size(), 3u);
  EXPECT_EQ(t.item_names.size(), 2u);
  EXPECT_EQ(t.per_user_counts(2), (std::vector<double>{2, 1}));
}

TEST(Preprocess, ZeroThresholdsKeepLargestComponent) {
  const Graph g = parse("0 1\n1 2\n3 4\n");
  const Graph out = preprocess(g, {});
  EXPECT_EQ(out.node_count(), 3);
  EXPECT_EQ(out.edge_count(), 2u);
}

TEST(Preprocess, DegreeThenGroupSize) {
  // Triangle of group x plus a pendant of group y.
  Graph g = label(parse("a b\nb c\na c\nc d\n"), "a,x\nb,x\nc,x\nd,y\n");
  const Graph out = preprocess(g, {.min_degree = 2, .min_group_size = 2});
  EXPECT_EQ(out.node_count(), 3);
  EXPECT_EQ(out.label_names().size(), 1u);
}

TEST(Preprocess, RatingsFilterFollowsNodes) {
  const Graph g = parse("0 1\n1 2\n2 0\n2 3\n");
  const std::vector<double> ratings{5, 5, 5, 0};
  const Graph out = preprocess(g, {.min_ratings = 1}, std::span<const double>(ratings));
  EXPECT_EQ(out.node_count(), 3);
}

TEST(Preprocess, EmptyResultIsAnError) {
  const Graph g = parse("0 1\n");
  EXPECT_THROW(preprocess(g, {.min_degree = 5}), DomainError);
}

TEST(Preprocess, IsIdempotent) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = oracle::random_graph(60, 0.06, rng);
    g = g.with_labels(oracle::random_partition(60, 4, rng), {"a", "b", "c", "d"});
    const PreprocessConfig cfg{.min_degree = 2, .min_group_size = 8};
    Graph once;
    try {
      once = preprocess(g, cfg);
    } catch (const DomainError&) {
      continue;
    }
    const Graph twice = preprocess(once, cfg);
    EXPECT_EQ(once.node_names(), twice.node_names());
    EXPECT_EQ(once.edge_count(), twice.edge_count());
    EXPECT_EQ(once.labels(), twice.labels());
  }
}

TEST(Assortativity, PerfectlyAssortativeIsOne) {
  const Graph g = label(parse("a b\nc d\n"), "a,0\nb,0\nc,1\nd,1\n");
  EXPECT_DOUBLE_EQ(assortativity(g), 1.0);
}

TEST(Assortativity, BipartiteIsMinusOne) {
  const Graph g = label(parse("a b\nc d\n"), "a,0\nb,1\nc,0\nd,1\n");
  EXPECT_DOUBLE_EQ(assortativity(g), -1.0);
}

TEST(Assortativity, MatchesMixingMatrixByHand) {
  // Edges: (a,b) 0-0, (b,c) 0-1, (c,d) 1-1, (d,e) 1-1.
  // e = [[2,1],[1,4]]/8, a = (3/8, 5/8), r = (6/8 - 34/64) / (1 - 34/64).
  const Graph g = label(parse("a b\nb c\nc d\nd e\n"), "a,0\nb,0\nc,1\nd,1\ne,1\n");
  EXPECT_NEAR(assortativity(g), (0.75 - 34.0 / 64) / (1 - 34.0 / 64), 1e-15);
}

TEST(Assortativity, SingleGroupIsUndefined) {
  const Graph g = label(parse("a b\n"), "a,0\nb,0\n");
  EXPECT_THROW(assortativity(g), DomainError);
}

TEST(Assortativity, UnlabeledGraphIsRejected) {
  EXPECT_THROW(assortativity(parse("a b\n")), DomainError);
}

TEST(Sbm, ExtremeProbabilitiesGiveDisjointCliques) {
  const Graph g = sbm_sample(SBMParams::homophilous({4, 5}, 1.0, 0.0, 3));
  EXPECT_EQ(g.edge_count(), 6u + 10u);
  for (const Edge& e : g.edges()) EXPECT_EQ(g.labels()[static_cast<std::size_t>(e.u)], g.labels()[static_cast<std::size_t>(e.v)]);
}

TEST(Sbm, SameSeedSameGraph) {
  const auto p = SBMParams::homophilous({30, 30}, 0.3, 0.05, 99);
  const Graph a = sbm_sample(p);
  const Graph b = sbm_sample(p);
  ASSERT_EQ(a.edge_count(), b.edge_count());
  for (std::size_t i = 0; i < a.edge_count(); ++i) EXPECT_EQ(a.edges()[i], b.edges()[i]);
}

TEST(Sbm, IntraBlockEdgeCountNearExpectation) {
  // Expected intra-block edges per block: C(100,2) * 0.2 = 990.
  double total = 0;
  const int samples = 10;
  for (int s = 0; s < samples; ++s) {
    const Graph g = sbm_sample(SBMParams::homophilous({100, 100, 100}, 0.2, 0.05, static_cast<std::uint64_t>(s)));
    for (const Edge& e : g.edges()) {
      if (g.labels()[static_cast<std::size_t>(e.u)] == 0 && g.labels()[static_cast<std::size_t>(e.v)] == 0) total += 1;
    }
  }
  const double sd = std::sqrt(4950 * 0.2 * 0.8 / samples);
  EXPECT_NEAR(total / samples, 990.0, 4 * sd);
}

TEST(Sbm, HomophilousConstructorValidates) {
  EXPECT_THROW(SBMParams::homophilous({5, 5}, 0.1, 0.2, 0), DomainError);
  EXPECT_THROW(SBMParams::homophilous({5, 5}, 1.5, 0.2, 0), DomainError);
}

TEST(Export, ManifestListsGroupSizes) {
  const Graph g = label(parse("a b\nb c\n"), "a,x\nb,x\nc,y\n");
  const auto j = graph_manifest(g);
  EXPECT_EQ(j["n"], 3);
  EXPECT_EQ(j["edges"], 2);
  EXPECT_EQ(j["group_sizes"]["x"], 2);
  EXPECT_EQ(j["group_sizes"]["y"], 1);
}
