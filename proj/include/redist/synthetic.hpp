#ifndef REDIST_SYNTHETIC_HPP
#define REDIST_SYNTHETIC_HPP

// Synthetic square-grid dual graphs for testing and demonstrations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "graph.hpp"
#include "rng.hpp"

namespace redist {

struct GridSpec {
    int rows = 10;
    int cols = 10;
    int county_rows = 5;  // county block height in cells
    int county_cols = 5;  // county block width in cells
    std::int64_t population = 1;
    std::vector<std::string> elections;  // empty: no vote data
    std::int64_t voters = 100;           // two-party votes per cell
    std::uint64_t vote_seed = 1;
};

inline std::string grid_id(int r, int c) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "r%03dc%03d", r, c);
    return buf;
}

// Unit-square cells; adjacent cells share a boundary of length 1 and border
// cells carry their outer sides as exterior perimeter. Democratic support
// rises from west to east with per-cell noise.
inline DualGraph make_grid(const GridSpec& spec) {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    Rng rng(spec.vote_seed);
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
            Node n;
            n.id = grid_id(r, c);
            n.population = spec.population;
            n.county = "county_" + std::to_string(r / spec.county_rows) + "_" + std::to_string(c / spec.county_cols);
            n.exterior_perimeter = (r == 0) + (r == spec.rows - 1) + (c == 0) + (c == spec.cols - 1);
            for (const std::string& e : spec.elections) {
                double lean = spec.cols > 1 ? 0.3 + 0.4 * c / (spec.cols - 1) : 0.5;
                lean = std::clamp(lean + rng.uniform(-0.15, 0.15), 0.0, 1.0);
                auto dem = static_cast<std::int64_t>(std::llround(lean * static_cast<double>(spec.voters)));
                n.votes[e] = {dem, spec.voters - dem};
            }
            nodes.push_back(std::move(n));
        }
    }
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
            if (c + 1 < spec.cols) edges.push_back({grid_id(r, c), grid_id(r, c + 1), 1.0});
            if (r + 1 < spec.rows) edges.push_back({grid_id(r, c), grid_id(r + 1, c), 1.0});
        }
    }
    return DualGraph(std::move(nodes), std::move(edges));
}

}  // namespace redist

#endif  // REDIST_SYNTHETIC_HPP
