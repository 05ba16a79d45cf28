#include <gtest/gtest.h>

#include <cmath>

#include <redist/diagnostics.hpp>
#include <redist/synthetic.hpp>
#include <redist/tree.hpp>

#include "fixtures.hpp"

using namespace redist;
using redist::testing::make_node;
using redist::testing::path_graph;

namespace {

// Brute force: best total weight over all (n-1)-edge acyclic subsets.
double best_tree_weight(const DualGraph& g, const Subgraph& sub, const std::vector<double>& w) {
    const std::size_t m = sub.edges.size(), n = sub.size();
    double best = -1.0;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != n - 1) continue;
        DisjointSets ds(n);
        bool ok = true;
        double total = 0.0;
        for (std::size_t i = 0; i < m && ok; ++i) {
            if (!(mask >> i & 1u)) continue;
            auto [a, b] = g.endpoints(sub.edges[i]);
            ok = ds.unite(static_cast<std::size_t>(sub.local[a]), static_cast<std::size_t>(sub.local[b]));
            total += w[i];
        }
        if (ok) best = std::max(best, total);
    }
    return best;
}

double tree_weight(const Subgraph& sub, const std::vector<double>& w, const std::vector<std::size_t>& tree) {
    double total = 0.0;
    for (std::size_t e : tree) {
        auto pos = std::find(sub.edges.begin(), sub.edges.end(), e) - sub.edges.begin();
        total += w[static_cast<std::size_t>(pos)];
    }
    return total;
}

}  // namespace

TEST(EdgeWeights, ClassesAndRanges) {
    DualGraph g = make_grid({.rows = 6, .cols = 6, .county_rows = 3, .county_cols = 3});
    Subgraph sub = whole_graph(g);
    Rng rng(1);
    auto w = draw_edge_weights(g, sub, 20.0, rng);
    ASSERT_EQ(w.size(), sub.edges.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        EXPECT_GE(w[i], 0.0);
        EXPECT_LE(w[i], g.same_county(sub.edges[i]) ? 20.0 : 1.0);
    }
}

TEST(EdgeWeights, IntraCountyMeanAtWeight20) {
    // Mean of U[0, 20] is 10.
    DualGraph g({make_node("a", 1, "A"), make_node("b", 1, "A")}, {{"a", "b", 1.0}});
    Subgraph sub = whole_graph(g);
    Rng rng(7);
    double sum = 0.0;
    for (int i = 0; i < 10000; ++i) sum += draw_edge_weights(g, sub, 20.0, rng)[0];
    EXPECT_NEAR(sum / 10000.0, 10.0, 0.5);
}

TEST(EdgeWeights, WeightOneMakesClassesIdentical) {
    // Two-sample KS between intra- and inter-county draws, 1e5 each, below
    // the 1% critical value 1.628 * sqrt(2 / n).
    DualGraph g({make_node("a", 1, "A"), make_node("b", 1, "A"), make_node("c", 1, "B")},
                {{"a", "b", 1.0}, {"b", "c", 1.0}});
    Subgraph sub = whole_graph(g);
    Rng rng(3);
    std::vector<double> intra, inter;
    for (int i = 0; i < 100000; ++i) {
        auto w = draw_edge_weights(g, sub, 1.0, rng);
        for (std::size_t j = 0; j < w.size(); ++j) (g.same_county(sub.edges[j]) ? intra : inter).push_back(w[j]);
    }
    double d = diag::ks_two_sample(intra, inter);
    EXPECT_LT(d, 1.628 * std::sqrt(2.0 / 100000.0));
}

TEST(EdgeWeights, NoIntraCountyEdgesIgnoresWeight) {
    DualGraph g({make_node("a", 1, "A"), make_node("b", 1, "B"), make_node("c", 1, "C")},
                {{"a", "b", 1.0}, {"b", "c", 1.0}});
    Subgraph sub = whole_graph(g);
    Rng r1(9), r2(9);
    EXPECT_EQ(draw_edge_weights(g, sub, 1.0, r1), draw_edge_weights(g, sub, 20.0, r2));
}

TEST(Kruskal, Triangle) {
    DualGraph g({make_node("a", 1), make_node("b", 1), make_node("c", 1)},
                {{"a", "b", 1.0}, {"b", "c", 1.0}, {"a", "c", 1.0}});
    Subgraph sub = whole_graph(g);
    // sub.edges is sorted by edge index: ab=0, bc=1, ac=2.
    auto tree = max_weight_spanning_tree(g, sub, {3.0, 2.0, 1.0});
    std::sort(tree.begin(), tree.end());
    EXPECT_EQ(tree, (std::vector<std::size_t>{0, 1}));
}

TEST(Kruskal, TreeInputReturnsAllEdges) {
    DualGraph g = path_graph(5);
    Subgraph sub = whole_graph(g);
    auto tree = max_weight_spanning_tree(g, sub, {0.1, 0.9, 0.5, 0.3});
    std::sort(tree.begin(), tree.end());
    EXPECT_EQ(tree, sub.edges);
}

TEST(Kruskal, FourCycleDropsLightestEdge) {
    DualGraph g({make_node("a", 1), make_node("b", 1), make_node("c", 1), make_node("d", 1)},
                {{"a", "b", 1.0}, {"b", "c", 1.0}, {"c", "d", 1.0}, {"d", "a", 1.0}});
    Subgraph sub = whole_graph(g);
    auto tree = max_weight_spanning_tree(g, sub, {3.0, 1.0, 4.0, 2.0});
    std::sort(tree.begin(), tree.end());
    EXPECT_EQ(tree, (std::vector<std::size_t>{0, 2, 3}));
}

TEST(Kruskal, MatchesBruteForceOnRandomSubgraphs) {
    DualGraph g = make_grid({.rows = 3, .cols = 4, .county_rows = 2, .county_cols = 2});
    Rng rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        Subgraph sub = whole_graph(g);  // 12 nodes, 17 edges
        auto w = draw_edge_weights(g, sub, 5.0, rng);
        auto tree = max_weight_spanning_tree(g, sub, w);
        ASSERT_EQ(tree.size(), sub.size() - 1);
        EXPECT_NEAR(tree_weight(sub, w, tree), best_tree_weight(g, sub, w), 1e-12);
    }
}

TEST(Kruskal, DisconnectedSubgraphFails) {
    DualGraph g = path_graph(3);
    Subgraph sub = induced_subgraph(g, {0, 2});
    EXPECT_THROW(max_weight_spanning_tree(g, sub, {}), DisconnectedSubgraph);
}

TEST(BalancedCut, FourPathMiddleEdge) {
    DualGraph g = path_graph(4);
    Subgraph sub = whole_graph(g);
    RootedTree tree(g, sub, sub.edges);
    Rng rng(1);
    auto cut = balanced_cut(tree, 2.0, 0.01, rng);
    ASSERT_TRUE(cut.has_value());
    EXPECT_EQ(cut->edge, 1u);  // b--c
    EXPECT_EQ(cut->side_population, 2);
}

TEST(BalancedCut, ThreePathNone) {
    DualGraph g = path_graph(3);
    Subgraph sub = whole_graph(g);
    RootedTree tree(g, sub, sub.edges);
    Rng rng(1);
    EXPECT_FALSE(balanced_cut(tree, 1.5, 0.01, rng).has_value());
}

TEST(BalancedCut, StarNone) {
    std::vector<Node> nodes{make_node("hub", 0)};
    std::vector<Edge> edges;
    for (char c = 'a'; c <= 'e'; ++c) {
        nodes.push_back(make_node(std::string(1, c), 1));
        edges.push_back({"hub", std::string(1, c), 1.0});
    }
    DualGraph g(nodes, edges);
    Subgraph sub = whole_graph(g);
    RootedTree tree(g, sub, sub.edges);
    Rng rng(1);
    EXPECT_FALSE(balanced_cut(tree, 2.5, 0.25, rng).has_value());
}

TEST(BalancedCut, UniformOverFeasibleEdges) {
    // Unit 6-path, ideal 3, tolerance 0.34: cuts leaving 2|4, 3|3 and 4|2 qualify.
    DualGraph g = path_graph(6);
    Subgraph sub = whole_graph(g);
    RootedTree tree(g, sub, sub.edges);
    Rng rng(5);
    std::map<std::size_t, int> hits;
    for (int i = 0; i < 30000; ++i) ++hits[balanced_cut(tree, 3.0, 0.34, rng)->edge];
    ASSERT_EQ(hits.size(), 3u);
    for (const auto& [e, n] : hits) EXPECT_NEAR(n / 30000.0, 1.0 / 3.0, 0.02) << "edge " << e;
}

TEST(BalancedCut, ComponentsPartitionTheSubgraph) {
    DualGraph g = make_grid({.rows = 6, .cols = 6});
    Subgraph sub = whole_graph(g);
    Rng rng(8);
    int found = 0;
    for (int i = 0; i < 50; ++i) {
        RootedTree tree(g, sub, max_weight_spanning_tree(g, sub, draw_edge_weights(g, sub, 1.0, rng)));
        auto cut = balanced_cut(tree, 18.0, 0.1, rng);
        if (!cut) continue;
        ++found;
        EXPECT_EQ(static_cast<std::int64_t>(cut->side.size()), cut->side_population);
        EXPECT_LE(std::abs(cut->side_population - 18), 1);
    }
    EXPECT_GT(found, 0);
}
