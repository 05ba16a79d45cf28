#ifndef REDIST_TREE_HPP
#define REDIST_TREE_HPP

// Random maximal-weight spanning trees and population-balanced tree cuts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "graph.hpp"
#include "rng.hpp"

namespace redist {

// Node set plus the graph edges with both endpoints inside it.
struct Subgraph {
    std::vector<std::size_t> nodes;  // global node indices
    std::vector<std::size_t> edges;  // global edge indices
    std::vector<std::int32_t> local;  // global index -> position in `nodes`, or -1

    std::size_t size() const { return nodes.size(); }
};

inline Subgraph induced_subgraph(const DualGraph& g, const std::vector<std::size_t>& members) {
    Subgraph s;
    s.nodes = members;
    s.local.assign(g.node_count(), -1);
    for (std::size_t i = 0; i < members.size(); ++i) s.local[members[i]] = static_cast<std::int32_t>(i);
    for (std::size_t i : members) {
        for (const Neighbor& nb : g.neighbors(i)) {
            if (i < nb.node && s.local[nb.node] >= 0) s.edges.push_back(nb.edge);
        }
    }
    std::sort(s.edges.begin(), s.edges.end());
    return s;
}

inline Subgraph whole_graph(const DualGraph& g) {
    std::vector<std::size_t> all(g.node_count());
    std::iota(all.begin(), all.end(), 0);
    return induced_subgraph(g, all);
}

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

// One weight per subgraph edge (parallel to sub.edges). Edges joining two
// nodes of the same county draw from U[0, w], all others from U[0, 1].
inline std::vector<double> draw_edge_weights(const DualGraph& g, const Subgraph& sub, double w, Rng& rng) {
    std::vector<double> weights;
    weights.reserve(sub.edges.size());
    for (std::size_t e : sub.edges) weights.push_back(rng.uniform01() * (g.same_county(e) ? w : 1.0));
    return weights;
}

class DisconnectedSubgraph : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Kruskal on descending weight; equal weights are taken in edge-index order.
// Returns the global edge indices of the tree.
inline std::vector<std::size_t> max_weight_spanning_tree(const DualGraph& g, const Subgraph& sub,
                                                         const std::vector<double>& weights) {
    if (weights.size() != sub.edges.size()) throw std::invalid_argument("max_weight_spanning_tree: weight count mismatch");
    std::vector<std::size_t> order(sub.edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (weights[x] != weights[y]) return weights[x] > weights[y];
        return sub.edges[x] < sub.edges[y];
    });
    DisjointSets sets(sub.size());
    std::vector<std::size_t> tree;
    tree.reserve(sub.size() ? sub.size() - 1 : 0);
    for (std::size_t o : order) {
        auto [a, b] = g.endpoints(sub.edges[o]);
        if (sets.unite(static_cast<std::size_t>(sub.local[a]), static_cast<std::size_t>(sub.local[b]))) {
            tree.push_back(sub.edges[o]);
            if (tree.size() + 1 == sub.size()) break;
        }
    }
    if (tree.size() + 1 != sub.size() && sub.size() > 0)
        throw DisconnectedSubgraph("max_weight_spanning_tree: subgraph of " + std::to_string(sub.size()) +
                                   " nodes is disconnected");
    return tree;
}

// A spanning tree rooted at local node 0 with subtree populations.
class RootedTree {
public:
    RootedTree(const DualGraph& g, const Subgraph& sub, const std::vector<std::size_t>& tree_edges)
        : sub_(&sub), parent_(sub.size(), -1), parent_edge_(sub.size(), SIZE_MAX), subtree_pop_(sub.size(), 0) {
        const std::size_t n = sub.size();
        std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);
        for (std::size_t e : tree_edges) {
            auto [a, b] = g.endpoints(e);
            auto la = static_cast<std::size_t>(sub.local[a]);
            auto lb = static_cast<std::size_t>(sub.local[b]);
            adj[la].emplace_back(lb, e);
            adj[lb].emplace_back(la, e);
        }
        if (n == 0) return;
        order_.reserve(n);
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            order_.push_back(u);
            for (auto [v, e] : adj[u]) {
                if (seen[v]) continue;
                seen[v] = 1;
                parent_[v] = static_cast<std::int64_t>(u);
                parent_edge_[v] = e;
                stack.push_back(v);
            }
        }
        if (order_.size() != n) throw std::invalid_argument("RootedTree: edges do not span the subgraph");
        for (std::size_t i = n; i-- > 0;) {
            std::size_t u = order_[i];
            subtree_pop_[u] += g.populations()[sub.nodes[u]];
            if (parent_[u] >= 0) subtree_pop_[static_cast<std::size_t>(parent_[u])] += subtree_pop_[u];
        }
    }

    std::int64_t total() const { return subtree_pop_.empty() ? 0 : subtree_pop_[0]; }

    // Each tree edge, identified by its child (local index), with the
    // population below it.
    template <typename Fn>
    void for_each_cut(Fn&& fn) const {
        for (std::size_t v : order_) {
            if (parent_[v] >= 0) fn(v, parent_edge_[v], subtree_pop_[v]);
        }
    }

    // Global indices of the nodes in the subtree hanging below `child`.
    std::vector<std::size_t> below(std::size_t child) const {
        std::vector<char> in(parent_.size(), 0);
        in[child] = 1;
        std::vector<std::size_t> out;
        for (std::size_t v : order_) {
            if (v == child || (parent_[v] >= 0 && in[static_cast<std::size_t>(parent_[v])])) {
                in[v] = 1;
                out.push_back(sub_->nodes[v]);
            }
        }
        return out;
    }

private:
    const Subgraph* sub_;
    std::vector<std::int64_t> parent_;
    std::vector<std::size_t> parent_edge_;
    std::vector<std::int64_t> subtree_pop_;
    std::vector<std::size_t> order_;  // preorder: parents precede children
};

inline bool within_tolerance(double population, double target, double tolerance) {
    if (target == 0.0) return population == 0.0;
    return std::abs(population - target) <= tolerance * target;
}

struct TreeCut {
    std::size_t edge;                 // global edge index removed from the tree
    std::vector<std::size_t> side;    // global node indices of the component below the edge
    std::int64_t side_population;
};

// Picks uniformly among the tree edges whose removal leaves both components
// within `tolerance` of `ideal`; nullopt when none qualifies.
inline std::optional<TreeCut> balanced_cut(const RootedTree& tree, double ideal, double tolerance, Rng& rng) {
    const std::int64_t total = tree.total();
    std::vector<std::pair<std::size_t, std::size_t>> feasible;  // (child, edge)
    tree.for_each_cut([&](std::size_t child, std::size_t edge, std::int64_t below) {
        if (within_tolerance(static_cast<double>(below), ideal, tolerance) &&
            within_tolerance(static_cast<double>(total - below), ideal, tolerance))
            feasible.emplace_back(child, edge);
    });
    if (feasible.empty()) return std::nullopt;
    auto [child, edge] = feasible[rng.index(feasible.size())];
    auto side = tree.below(child);
    std::int64_t pop = 0;
    tree.for_each_cut([&](std::size_t c, std::size_t, std::int64_t below) {
        if (c == child) pop = below;
    });
    return TreeCut{edge, std::move(side), pop};
}

}  // namespace redist

#endif  // REDIST_TREE_HPP
