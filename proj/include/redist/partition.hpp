#ifndef REDIST_PARTITION_HPP
#define REDIST_PARTITION_HPP

// Districting plans: assignment of every node to one of k districts, the
// contiguity and population-balance checks, and recursive spanning-tree seeds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"
#include "rng.hpp"
#include "tree.hpp"

namespace redist {

class PlanError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class Plan {
public:
    Plan() = default;

    // assignment[i] is the district of node i, 0-indexed.
    Plan(const DualGraph& g, std::vector<int> assignment, int k) : assignment_(std::move(assignment)), k_(k) {
        if (k < 1) throw PlanError("plan needs k >= 1, got " + std::to_string(k));
        if (assignment_.size() != g.node_count())
            throw PlanError("plan assigns " + std::to_string(assignment_.size()) + " nodes but the graph has " +
                            std::to_string(g.node_count()));
        populations_.assign(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < assignment_.size(); ++i) {
            int d = assignment_[i];
            if (d < 0 || d >= k)
                throw PlanError("node \"" + g.node(i).id + "\" assigned to district " + std::to_string(d) +
                                " outside [0, " + std::to_string(k) + ")");
            populations_[static_cast<std::size_t>(d)] += g.node(i).population;
        }
    }

    int k() const { return k_; }
    std::size_t size() const { return assignment_.size(); }
    int district(std::size_t node) const { return assignment_[node]; }
    const std::vector<int>& assignment() const { return assignment_; }
    std::span<const std::int64_t> populations() const { return populations_; }
    std::int64_t population(int d) const { return populations_[static_cast<std::size_t>(d)]; }

    std::vector<std::size_t> members(int d) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < assignment_.size(); ++i)
            if (assignment_[i] == d) out.push_back(i);
        return out;
    }

    // Moves `nodes` into district `d`, keeping the population cache exact.
    void reassign(const DualGraph& g, std::span<const std::size_t> nodes, int d) {
        for (std::size_t i : nodes) {
            populations_[static_cast<std::size_t>(assignment_[i])] -= g.node(i).population;
            assignment_[i] = d;
            populations_[static_cast<std::size_t>(d)] += g.node(i).population;
        }
    }

    friend bool operator==(const Plan& a, const Plan& b) { return a.k_ == b.k_ && a.assignment_ == b.assignment_; }

private:
    std::vector<int> assignment_;
    int k_ = 0;
    std::vector<std::int64_t> populations_;
};

struct BalanceSpec {
    double ideal = 0.0;
    double tolerance = 0.01;

    BalanceSpec(double ideal_population, double tol) : ideal(ideal_population), tolerance(tol) {
        if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("population tolerance must lie in (0, 1)");
    }
};

inline double ideal_population(const DualGraph& g, int k) {
    if (k < 1) throw std::invalid_argument("ideal_population: k must be >= 1");
    return static_cast<double>(g.total_population()) / static_cast<double>(k);
}

inline bool is_contiguous(const DualGraph& g, const Plan& p) {
    if (p.size() != g.node_count()) throw PlanError("is_contiguous: plan does not cover the graph");
    std::vector<char> seen(g.node_count(), 0);
    std::vector<char> started(static_cast<std::size_t>(p.k()), 0);
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < g.node_count(); ++s) {
        if (seen[s]) continue;
        int d = p.district(s);
        if (started[static_cast<std::size_t>(d)]) return false;  // second component of d
        started[static_cast<std::size_t>(d)] = 1;
        stack.assign(1, s);
        seen[s] = 1;
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            for (const Neighbor& nb : g.neighbors(u)) {
                if (!seen[nb.node] && p.district(nb.node) == d) {
                    seen[nb.node] = 1;
                    stack.push_back(nb.node);
                }
            }
        }
    }
    return std::all_of(started.begin(), started.end(), [](char c) { return c != 0; });
}

inline double max_deviation(std::span<const std::int64_t> populations, double ideal) {
    double worst = 0.0;
    for (std::int64_t pop : populations) {
        double dev;
        if (ideal == 0.0)
            dev = pop == 0 ? 0.0 : std::numeric_limits<double>::infinity();
        else
            dev = std::abs(static_cast<double>(pop) - ideal) / ideal;
        worst = std::max(worst, dev);
    }
    return worst;
}

inline double max_deviation(const Plan& p, const BalanceSpec& spec) { return max_deviation(p.populations(), spec.ideal); }

inline bool is_valid(const DualGraph& g, const Plan& p, const BalanceSpec& spec) {
    return is_contiguous(g, p) && max_deviation(p, spec) <= spec.tolerance;
}

// ---------------------------------------------------------------------------
// Seeds

class InfeasibleSeed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kSeedTreeDraws = 1000;

namespace detail {

class SeedBuilder {
public:
    SeedBuilder(const DualGraph& g, int k, const BalanceSpec& spec, Rng& rng)
        : g_(g), spec_(spec), rng_(rng), assignment_(g.node_count(), -1), budget_(kSeedTreeDraws * k) {}

    bool split(const std::vector<std::size_t>& region, int parts, int first_label) {
        if (parts == 1) {
            for (std::size_t i : region) assignment_[i] = first_label;
            return true;
        }
        const Subgraph sub = induced_subgraph(g_, region);
        const double slack = spec_.tolerance * spec_.ideal;
        auto fits = [&](double pop, int count) { return std::abs(pop - count * spec_.ideal) <= slack; };

        for (int attempt = 0; attempt < kSeedTreeDraws; ++attempt) {
            if (budget_-- <= 0) break;
            auto weights = draw_edge_weights(g_, sub, 1.0, rng_);
            auto edges = max_weight_spanning_tree(g_, sub, weights);
            RootedTree tree(g_, sub, edges);
            const double total = static_cast<double>(tree.total());

            // (child, parts below the edge)
            std::vector<std::pair<std::size_t, int>> single, any;
            tree.for_each_cut([&](std::size_t child, std::size_t, std::int64_t below) {
                for (int j = 1; j < parts; ++j) {
                    if (!fits(static_cast<double>(below), j) || !fits(total - static_cast<double>(below), parts - j))
                        continue;
                    any.emplace_back(child, j);
                    if (j == 1 || j == parts - 1) single.emplace_back(child, j);
                }
            });
            const auto& pool = single.empty() ? any : single;
            if (pool.empty()) continue;

            auto [child, j] = pool[rng_.index(pool.size())];
            std::vector<std::size_t> lower = tree.below(child);
            std::vector<char> is_lower(g_.node_count(), 0);
            for (std::size_t i : lower) is_lower[i] = 1;
            std::vector<std::size_t> upper;
            for (std::size_t i : region)
                if (!is_lower[i]) upper.push_back(i);

            if (split(lower, j, first_label) && split(upper, parts - j, first_label + j)) return true;
        }
        if (failure_.empty()) {
            std::int64_t pop = 0;
            for (std::size_t i : region) pop += g_.node(i).population;
            std::ostringstream msg;
            msg << "infeasible seed: no balanced split of a region of " << region.size() << " nodes (population "
                << pop << ") into " << parts << " districts of ideal population " << spec_.ideal
                << " within tolerance " << spec_.tolerance;
            failure_ = msg.str();
        }
        return false;
    }

    std::vector<int> take() { return std::move(assignment_); }
    const std::string& failure() const { return failure_; }

private:
    const DualGraph& g_;
    const BalanceSpec& spec_;
    Rng& rng_;
    std::vector<int> assignment_;
    long budget_;
    std::string failure_;
};

}  // namespace detail

// Recursive bipartition: draw a random spanning tree of a region, cut an
// edge leaving j districts' worth of population on one side (j = 1 when
// possible), recurse on both sides. Throws InfeasibleSeed when no balanced
// split is found within the tree-draw budget.
inline Plan seed_plan(const DualGraph& g, int k, const BalanceSpec& spec, Rng& rng) {
    if (k < 1) throw std::invalid_argument("seed_plan: k must be >= 1");
    std::vector<std::size_t> all(g.node_count());
    std::iota(all.begin(), all.end(), 0);
    if (k == 1) return Plan(g, std::vector<int>(g.node_count(), 0), 1);
    if (static_cast<std::size_t>(k) > g.node_count())
        throw InfeasibleSeed("infeasible seed: " + std::to_string(k) + " districts requested for " +
                             std::to_string(g.node_count()) + " nodes");

    detail::SeedBuilder builder(g, k, spec, rng);
    if (!builder.split(all, k, 0)) throw InfeasibleSeed(builder.failure());
    Plan plan(g, builder.take(), k);
    if (!is_valid(g, plan, spec)) throw std::logic_error("seed_plan produced an invalid plan");
    return plan;
}

// ---------------------------------------------------------------------------
// Plan CSV: header `node_id,district`, one row per node.

inline void write_plan_csv(const DualGraph& g, const Plan& p, std::ostream& out) {
    out << "node_id,district\n";
    for (std::size_t i = 0; i < g.node_count(); ++i) out << g.node(i).id << ',' << p.district(i) << '\n';
}

inline void save_plan(const DualGraph& g, const Plan& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    write_plan_csv(g, p, out);
}

// k defaults to 1 + the largest district index present.
inline Plan read_plan_csv(const DualGraph& g, std::istream& in, std::optional<int> k = std::nullopt) {
    std::string line;
    if (!std::getline(in, line)) throw PlanError("plan CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "node_id,district") throw PlanError("plan CSV header must be \"node_id,district\", got \"" + line + "\"");

    std::vector<int> assignment(g.node_count(), -1);
    int max_d = -1;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto comma = line.rfind(',');
        if (comma == std::string::npos) throw PlanError("plan CSV row " + std::to_string(row) + ": missing comma");
        std::string id = line.substr(0, comma);
        std::string dstr = line.substr(comma + 1);
        if (!g.contains(id)) throw PlanError("plan CSV row " + std::to_string(row) + ": unknown node \"" + id + "\"");
        int d;
        std::size_t used = 0;
        try {
            d = std::stoi(dstr, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != dstr.size() || d < 0)
            throw PlanError("plan CSV row " + std::to_string(row) + ": bad district \"" + dstr + "\"");
        std::size_t i = g.index_of(id);
        if (assignment[i] != -1) throw PlanError("plan CSV: node \"" + id + "\" assigned twice");
        assignment[i] = d;
        max_d = std::max(max_d, d);
    }
    for (std::size_t i = 0; i < assignment.size(); ++i)
        if (assignment[i] < 0) throw PlanError("plan CSV: node \"" + g.node(i).id + "\" is unassigned");
    return Plan(g, std::move(assignment), k.value_or(max_d + 1));
}

inline Plan load_plan(const DualGraph& g, const std::string& path, std::optional<int> k = std::nullopt) {
    std::ifstream in(path);
    if (!in) throw PlanError("cannot open plan \"" + path + "\"");
    return read_plan_csv(g, in, k);
}

}  // namespace redist

#endif  // REDIST_PARTITION_HPP
