#ifndef REDIST_TESTS_FIXTURES_HPP
#define REDIST_TESTS_FIXTURES_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <redist/graph.hpp>
#include <redist/partition.hpp>

namespace redist::testing {

inline Node make_node(std::string id, std::int64_t pop, std::string county = "c", double exterior = 0.0,
                      std::map<std::string, VoteCount> votes = {}) {
    return Node{std::move(id), pop, std::move(county), exterior, std::move(votes)};
}

// a - b - c - ... with unit populations unless given.
inline DualGraph path_graph(std::size_t n, std::vector<std::int64_t> pops = {}) {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        nodes.push_back(make_node(std::string(1, static_cast<char>('a' + i)), pops.empty() ? 1 : pops[i]));
        if (i > 0) edges.push_back({nodes[i - 1].id, nodes[i].id, 1.0});
    }
    return DualGraph(std::move(nodes), std::move(edges));
}

inline std::string tmp_path(const std::string& name) {
    std::filesystem::path dir(REDIST_TEST_TMP);
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

// Every assignment of n nodes to k labels, canonicalised so that labels
// appear in order of first use; callback receives each labelled partition
// once.
template <typename Fn>
void for_each_partition(std::size_t n, int k, Fn&& fn) {
    std::vector<int> a(n, 0);
    auto rec = [&](auto&& self, std::size_t i, int used) -> void {
        if (i == n) {
            if (used == k) fn(a);
            return;
        }
        for (int d = 0; d <= std::min(used, k - 1); ++d) {
            a[i] = d;
            self(self, i + 1, std::max(used, d + 1));
        }
    };
    rec(rec, 0, 0);
}

// Relabel so labels appear in order of first use by node index.
inline std::vector<int> canonical(const std::vector<int>& a) {
    std::vector<int> map(a.size() + 1, -1);
    std::vector<int> out(a.size());
    int next = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto d = static_cast<std::size_t>(a[i]);
        if (map[d] < 0) map[d] = next++;
        out[i] = map[d];
    }
    return out;
}

}  // namespace redist::testing

#endif  // REDIST_TESTS_FIXTURES_HPP
