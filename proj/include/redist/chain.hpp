#ifndef REDIST_CHAIN_HPP
#define REDIST_CHAIN_HPP

// County-weighted recombination (ReCom) proposal and the chain driver.
//
// A step merges two adjacent districts, draws a random maximal-weight
// spanning tree of the merged region and cuts one tree edge so that both
// pieces are population balanced. Intra-county edges draw weights from
// U[0, w] and all other edges from U[0, 1], so w > 1 favours trees (and
// therefore cuts) that keep counties whole without changing which plans are
// reachable.

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "metrics.hpp"
#include "partition.hpp"
#include "rng.hpp"
#include "tree.hpp"

namespace redist {

inline constexpr int kTreeRedrawCap = 100;
inline constexpr int kPairResampleCap = 100;

struct ChainConfig {
    double weight = 1.0;
    double tolerance = 0.01;
    std::int64_t steps = 1;
    std::uint64_t rng_seed = 0;
    int k = 2;
    std::uint64_t chain_index = 0;
    bool check_every_step = false;  // full contiguity/balance check after each step

    void validate() const {
        if (!(weight >= 1.0)) throw std::invalid_argument("chain weight must be >= 1");
        if (!(tolerance > 0.0 && tolerance < 1.0)) throw std::invalid_argument("chain tolerance must lie in (0, 1)");
        if (steps < 1) throw std::invalid_argument("chain steps must be >= 1");
        if (k < 2) throw std::invalid_argument("chain needs at least 2 districts");
    }
};

using DistrictPair = std::pair<int, int>;

struct StepOutcome {
    Plan plan;
    DistrictPair merged_pair;
    int tree_redraws = 0;  // trees discarded before a balanced cut was found
};

class StepFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ChainAborted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unordered pairs (lo, hi) of districts joined by at least one edge, sorted.
inline std::vector<DistrictPair> adjacent_district_pairs(const DualGraph& g, const Plan& p) {
    std::set<DistrictPair> pairs;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        auto [a, b] = g.endpoints(e);
        int da = p.district(a), db = p.district(b);
        if (da != db) pairs.emplace(std::min(da, db), std::max(da, db));
    }
    return {pairs.begin(), pairs.end()};
}

inline StepOutcome recom_step(const DualGraph& g, const Plan& p, const ChainConfig& cfg, Rng& rng) {
    const auto pairs = adjacent_district_pairs(g, p);
    if (pairs.empty()) throw StepFailure("recom_step: plan has no adjacent district pair");
    const DistrictPair pair = pairs[rng.index(pairs.size())];

    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < g.node_count(); ++i)
        if (p.district(i) == pair.first || p.district(i) == pair.second) members.push_back(i);
    const Subgraph sub = induced_subgraph(g, members);
    const double ideal = ideal_population(g, p.k());

    for (int draw = 0; draw < kTreeRedrawCap; ++draw) {
        auto weights = draw_edge_weights(g, sub, cfg.weight, rng);
        RootedTree tree(g, sub, max_weight_spanning_tree(g, sub, weights));
        auto cut = balanced_cut(tree, ideal, cfg.tolerance, rng);
        if (!cut) continue;

        std::vector<char> on_side(g.node_count(), 0);
        for (std::size_t i : cut->side) on_side[i] = 1;
        std::size_t smallest = members.front();
        for (std::size_t i : members)
            if (g.id_rank(i) < g.id_rank(smallest)) smallest = i;

        // The piece holding the lexicographically smallest node id keeps the
        // smaller label.
        const int side_label = on_side[smallest] ? pair.first : pair.second;
        const int rest_label = on_side[smallest] ? pair.second : pair.first;
        std::vector<std::size_t> rest;
        rest.reserve(members.size() - cut->side.size());
        for (std::size_t i : members)
            if (!on_side[i]) rest.push_back(i);

        StepOutcome out{p, pair, draw};
        out.plan.reassign(g, cut->side, side_label);
        out.plan.reassign(g, rest, rest_label);
        return out;
    }
    std::ostringstream msg;
    msg << "recom_step: no balanced cut for districts " << pair.first << " and " << pair.second << " after "
        << kTreeRedrawCap << " spanning trees";
    throw StepFailure(msg.str());
}

// Advances one accepted step, resampling the district pair on failure.
inline StepOutcome advance(const DualGraph& g, const Plan& p, const ChainConfig& cfg, Rng& rng, std::int64_t step) {
    std::string last;
    for (int attempt = 0; attempt < kPairResampleCap; ++attempt) {
        try {
            return recom_step(g, p, cfg, rng);
        } catch (const StepFailure& e) {
            last = e.what();
        }
    }
    std::ostringstream msg;
    msg << "chain aborted at step " << step << ": " << kPairResampleCap << " consecutive proposals failed; last: " << last
        << "; district populations:";
    for (std::int64_t pop : p.populations()) msg << ' ' << pop;
    throw ChainAborted(msg.str());
}

using RecordSink = std::function<void(const MetricRecord&, const Plan&)>;

// Runs cfg.steps accepted steps from `seed`, emitting one record per step
// (steps numbered from 1). Deterministic in (graph, seed, cfg).
inline Plan run_chain(const DualGraph& g, const Plan& seed, const ChainConfig& cfg, const MetricsContext& ctx,
                      const RecordSink& sink) {
    cfg.validate();
    if (seed.k() != cfg.k) throw std::invalid_argument("seed plan has a different number of districts than the config");
    const BalanceSpec spec(ideal_population(g, cfg.k), cfg.tolerance);
    if (!is_contiguous(g, seed)) throw std::invalid_argument("seed plan is not contiguous");
    if (max_deviation(seed, spec) > cfg.tolerance) throw std::invalid_argument("seed plan violates the population tolerance");

    Rng rng(cfg.rng_seed, cfg.chain_index);
    Plan current = seed;
    for (std::int64_t step = 1; step <= cfg.steps; ++step) {
        current = advance(g, current, cfg, rng, step).plan;
        if (cfg.check_every_step && !is_valid(g, current, spec))
            throw std::logic_error("chain produced an invalid plan at step " + std::to_string(step));
        sink(compute_record(g, current, ctx, step), current);
    }
    return current;
}

}  // namespace redist

#endif  // REDIST_CHAIN_HPP
