#ifndef REDIST_GRAPH_HPP
#define REDIST_GRAPH_HPP

// Dual graph of voting precincts: one vertex per precinct, one edge per pair
// of precincts sharing a boundary. Populations, county membership, two-party
// vote counts and boundary lengths are attached to the vertices and edges.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

namespace redist {

struct VoteCount {
    std::int64_t dem = 0;
    std::int64_t rep = 0;

    VoteCount& operator+=(const VoteCount& o) {
        dem += o.dem;
        rep += o.rep;
        return *this;
    }
    friend bool operator==(const VoteCount&, const VoteCount&) = default;
};

struct Node {
    std::string id;
    std::int64_t population = 0;
    std::string county;
    double exterior_perimeter = 0.0;
    std::map<std::string, VoteCount> votes;

    friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
    std::string a;
    std::string b;
    double shared_perimeter = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Violation {
    std::string kind;    // parse, duplicate_node, dangling_endpoint, ...
    std::string entity;  // offending node/edge/election id, may be empty
    std::string message;
};

class GraphError : public std::runtime_error {
public:
    explicit GraphError(std::vector<Violation> violations)
        : std::runtime_error(summarize(violations)), violations_(std::move(violations)) {}

    const std::vector<Violation>& violations() const { return violations_; }

private:
    static std::string summarize(const std::vector<Violation>& vs) {
        std::string out = "invalid graph";
        for (std::size_t i = 0; i < vs.size() && i < 5; ++i) out += (i ? "; " : ": ") + vs[i].message;
        if (vs.size() > 5) out += "; ... (" + std::to_string(vs.size()) + " violations)";
        return out;
    }

    std::vector<Violation> violations_;
};

struct Neighbor {
    std::size_t node;
    std::size_t edge;
};

namespace detail {

inline std::string edge_label(const Edge& e) { return e.a + "--" + e.b; }

}  // namespace detail

// Checks every DualGraph invariant and returns all violations found.
inline std::vector<Violation> find_violations(const std::vector<Node>& nodes, const std::vector<Edge>& edges) {
    std::vector<Violation> out;
    if (nodes.empty()) {
        out.push_back({"empty", "", "graph has no nodes"});
        return out;
    }

    std::unordered_map<std::string, std::size_t> index;
    std::set<std::string> elections;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& n = nodes[i];
        if (!index.emplace(n.id, i).second) out.push_back({"duplicate_node", n.id, "duplicate node id \"" + n.id + "\""});
        if (n.population < 0) out.push_back({"negative_population", n.id, "node \"" + n.id + "\" has negative population"});
        if (!(n.exterior_perimeter >= 0.0))
            out.push_back({"negative_perimeter", n.id, "node \"" + n.id + "\" has negative exterior_perimeter"});
        for (const auto& [eid, vc] : n.votes) {
            elections.insert(eid);
            if (vc.dem < 0 || vc.rep < 0)
                out.push_back({"negative_votes", n.id, "node \"" + n.id + "\" has negative votes in election \"" + eid + "\""});
        }
    }
    for (const Node& n : nodes) {
        for (const std::string& eid : elections) {
            if (!n.votes.contains(eid))
                out.push_back({"mismatched_elections", n.id,
                               "node \"" + n.id + "\" is missing votes for election \"" + eid + "\""});
        }
    }

    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<std::vector<std::size_t>> adj(nodes.size());
    for (const Edge& e : edges) {
        auto ia = index.find(e.a);
        auto ib = index.find(e.b);
        if (ia == index.end()) out.push_back({"dangling_endpoint", e.a, "edge references unknown node \"" + e.a + "\""});
        if (ib == index.end()) out.push_back({"dangling_endpoint", e.b, "edge references unknown node \"" + e.b + "\""});
        if (!(e.shared_perimeter > 0.0))
            out.push_back({"nonpositive_shared_perimeter", detail::edge_label(e),
                           "edge " + detail::edge_label(e) + " has non-positive shared_perimeter"});
        if (ia == index.end() || ib == index.end()) continue;
        if (ia->second == ib->second) {
            out.push_back({"self_loop", e.a, "self-loop on node \"" + e.a + "\""});
            continue;
        }
        auto key = std::minmax(ia->second, ib->second);
        if (!seen.insert(key).second) {
            out.push_back({"duplicate_edge", detail::edge_label(e), "duplicate edge " + detail::edge_label(e)});
            continue;
        }
        adj[ia->second].push_back(ib->second);
        adj[ib->second].push_back(ia->second);
    }

    std::vector<char> reached(nodes.size(), 0);
    std::queue<std::size_t> q;
    q.push(0);
    reached[0] = 1;
    std::size_t count = 1;
    while (!q.empty()) {
        std::size_t u = q.front();
        q.pop();
        for (std::size_t v : adj[u]) {
            if (!reached[v]) {
                reached[v] = 1;
                ++count;
                q.push(v);
            }
        }
    }
    if (count != nodes.size()) {
        std::size_t first = std::find(reached.begin(), reached.end(), 0) - reached.begin();
        out.push_back({"disconnected", nodes[first].id,
                       "graph is disconnected: " + std::to_string(nodes.size() - count) +
                           " node(s) unreachable from \"" + nodes[0].id + "\", e.g. \"" + nodes[first].id + "\""});
    }
    return out;
}

// Immutable after construction; the constructor enforces all invariants.
class DualGraph {
public:
    DualGraph(std::vector<Node> nodes, std::vector<Edge> edges) : nodes_(std::move(nodes)), edges_(std::move(edges)) {
        if (auto v = find_violations(nodes_, edges_); !v.empty()) throw GraphError(std::move(v));

        for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i].id, i);
        adjacency_.resize(nodes_.size());
        endpoints_.reserve(edges_.size());
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            std::size_t a = index_.at(edges_[e].a);
            std::size_t b = index_.at(edges_[e].b);
            endpoints_.emplace_back(a, b);
            adjacency_[a].push_back({b, e});
            adjacency_[b].push_back({a, e});
        }

        std::map<std::string, int> county_ids;
        for (const Node& n : nodes_) county_ids.emplace(n.county, 0);
        int next = 0;
        for (auto& [name, id] : county_ids) {
            id = next++;
            county_names_.push_back(name);
        }
        county_of_.reserve(nodes_.size());
        populations_.reserve(nodes_.size());
        for (const Node& n : nodes_) {
            county_of_.push_back(county_ids.at(n.county));
            populations_.push_back(n.population);
            total_population_ += n.population;
            total_exterior_ += n.exterior_perimeter;
        }
        for (const auto& [eid, vc] : nodes_.front().votes) elections_.push_back(eid);

        // Lexicographic rank of node ids, used for label tie-breaking.
        std::vector<std::size_t> order(nodes_.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto x, auto y) { return nodes_[x].id < nodes_[y].id; });
        id_rank_.resize(nodes_.size());
        for (std::size_t r = 0; r < order.size(); ++r) id_rank_[order[r]] = r;
    }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Node& node(std::size_t i) const { return nodes_[i]; }
    const Edge& edge(std::size_t e) const { return edges_[e]; }

    std::pair<std::size_t, std::size_t> endpoints(std::size_t e) const { return endpoints_[e]; }
    std::span<const Neighbor> neighbors(std::size_t i) const { return adjacency_[i]; }

    bool contains(const std::string& id) const { return index_.contains(id); }
    std::size_t index_of(const std::string& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) throw std::out_of_range("unknown node id \"" + id + "\"");
        return it->second;
    }

    // Dense county index in [0, county_count()), ordered by county name.
    int county_of(std::size_t i) const { return county_of_[i]; }
    std::size_t county_count() const { return county_names_.size(); }
    const std::string& county_name(int c) const { return county_names_[static_cast<std::size_t>(c)]; }
    bool same_county(std::size_t e) const {
        auto [a, b] = endpoints_[e];
        return county_of_[a] == county_of_[b];
    }

    std::span<const std::int64_t> populations() const { return populations_; }
    std::int64_t total_population() const { return total_population_; }
    double total_exterior_perimeter() const { return total_exterior_; }
    std::size_t id_rank(std::size_t i) const { return id_rank_[i]; }

    const std::vector<std::string>& elections() const { return elections_; }
    bool has_election(const std::string& eid) const {
        return std::find(elections_.begin(), elections_.end(), eid) != elections_.end();
    }
    VoteCount total_votes(const std::string& eid) const {
        VoteCount t;
        for (const Node& n : nodes_) t += n.votes.at(eid);
        return t;
    }

    friend bool operator==(const DualGraph& x, const DualGraph& y) {
        return x.nodes_ == y.nodes_ && x.edges_ == y.edges_;
    }

private:
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::vector<std::pair<std::size_t, std::size_t>> endpoints_;
    std::vector<int> county_of_;
    std::vector<std::string> county_names_;
    std::vector<std::int64_t> populations_;
    std::vector<std::size_t> id_rank_;
    std::vector<std::string> elections_;
    std::int64_t total_population_ = 0;
    double total_exterior_ = 0.0;
};

// ---------------------------------------------------------------------------
// JSON format

namespace detail {

template <typename T>
bool read_field(const nlohmann::json& obj, const char* key, T& out, const std::string& where,
                std::vector<Violation>& errs) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        errs.push_back({"parse", where, where + ": missing field \"" + key + "\""});
        return false;
    }
    try {
        if constexpr (std::is_same_v<T, std::int64_t>) {
            if (!it->is_number_integer()) throw std::invalid_argument("not an integer");
        } else if constexpr (std::is_same_v<T, double>) {
            if (!it->is_number()) throw std::invalid_argument("not a number");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!it->is_string()) throw std::invalid_argument("not a string");
        }
        out = it->get<T>();
    } catch (const std::exception&) {
        errs.push_back({"parse", where, where + ": field \"" + key + "\" has the wrong type"});
        return false;
    }
    return true;
}

}  // namespace detail

// Parses the graph JSON object. Structural problems are appended to `errs`;
// the returned vectors hold whatever could be read.
inline std::pair<std::vector<Node>, std::vector<Edge>> parse_graph_json(const nlohmann::json& doc,
                                                                        std::vector<Violation>& errs) {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array() || !doc.contains("edges") ||
        !doc["edges"].is_array()) {
        errs.push_back({"parse", "", "top level must be an object with \"nodes\" and \"edges\" arrays"});
        return {nodes, edges};
    }
    std::size_t pos = 0;
    for (const auto& jn : doc["nodes"]) {
        std::string where = "nodes[" + std::to_string(pos++) + "]";
        if (!jn.is_object()) {
            errs.push_back({"parse", where, where + ": not an object"});
            continue;
        }
        Node n;
        bool ok = detail::read_field(jn, "id", n.id, where, errs);
        if (ok) where = "node \"" + n.id + "\"";
        ok &= detail::read_field(jn, "population", n.population, where, errs);
        ok &= detail::read_field(jn, "county", n.county, where, errs);
        ok &= detail::read_field(jn, "exterior_perimeter", n.exterior_perimeter, where, errs);
        auto votes = jn.find("votes");
        if (votes == jn.end() || !votes->is_object()) {
            errs.push_back({"parse", where, where + ": missing or non-object \"votes\""});
            ok = false;
        } else {
            for (const auto& [eid, jv] : votes->items()) {
                VoteCount vc;
                std::string w = where + " election \"" + eid + "\"";
                if (!jv.is_object()) {
                    errs.push_back({"parse", where, w + ": not an object"});
                    ok = false;
                    continue;
                }
                ok &= detail::read_field(jv, "dem", vc.dem, w, errs);
                ok &= detail::read_field(jv, "rep", vc.rep, w, errs);
                n.votes.emplace(eid, vc);
            }
        }
        if (ok) nodes.push_back(std::move(n));
    }
    pos = 0;
    for (const auto& je : doc["edges"]) {
        std::string where = "edges[" + std::to_string(pos++) + "]";
        if (!je.is_object()) {
            errs.push_back({"parse", where, where + ": not an object"});
            continue;
        }
        Edge e;
        bool ok = detail::read_field(je, "a", e.a, where, errs);
        ok &= detail::read_field(je, "b", e.b, where, errs);
        ok &= detail::read_field(je, "shared_perimeter", e.shared_perimeter, where, errs);
        if (ok) edges.push_back(std::move(e));
    }
    return {nodes, edges};
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError({{"parse", path, "cannot open \"" + path + "\""}});
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw GraphError({{"parse", path, std::string("JSON parse error in \"") + path + "\": " + e.what()}});
    }
}

// All violations of a graph file, parse errors and invariant breaches alike.
inline std::vector<Violation> validate_graph_file(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = read_json_file(path);
    } catch (const GraphError& e) {
        return e.violations();
    }
    std::vector<Violation> errs;
    auto [nodes, edges] = parse_graph_json(doc, errs);
    auto more = find_violations(nodes, edges);
    errs.insert(errs.end(), more.begin(), more.end());
    return errs;
}

inline DualGraph graph_from_json(const nlohmann::json& doc) {
    std::vector<Violation> errs;
    auto [nodes, edges] = parse_graph_json(doc, errs);
    if (!errs.empty()) throw GraphError(std::move(errs));
    return DualGraph(std::move(nodes), std::move(edges));
}

inline DualGraph load_graph(const std::string& path) { return graph_from_json(read_json_file(path)); }

inline nlohmann::json graph_to_json(const DualGraph& g) {
    nlohmann::json doc;
    doc["nodes"] = nlohmann::json::array();
    for (const Node& n : g.nodes()) {
        nlohmann::json votes = nlohmann::json::object();
        for (const auto& [eid, vc] : n.votes) votes[eid] = {{"dem", vc.dem}, {"rep", vc.rep}};
        doc["nodes"].push_back({{"id", n.id},
                                {"population", n.population},
                                {"county", n.county},
                                {"exterior_perimeter", n.exterior_perimeter},
                                {"votes", votes}});
    }
    doc["edges"] = nlohmann::json::array();
    for (const Edge& e : g.edges()) doc["edges"].push_back({{"a", e.a}, {"b", e.b}, {"shared_perimeter", e.shared_perimeter}});
    return doc;
}

inline void save_graph(const DualGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    out << graph_to_json(g).dump(1) << '\n';
}

// ---------------------------------------------------------------------------
// Contraction

// Contracts every group of nodes into one node. group[i] names the group of
// node i; nodes sharing a group value are merged. The merged node takes the
// lexicographically smallest member id and sits at the position of the first
// member; parallel edges collapse with summed shared_perimeter and edges
// inside a group vanish.
inline DualGraph contract(const DualGraph& g, const std::vector<std::size_t>& group) {
    const std::size_t n = g.node_count();
    std::map<std::size_t, std::size_t> slot_of_group;
    std::vector<Node> nodes;
    std::vector<std::size_t> slot(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto [it, fresh] = slot_of_group.emplace(group[i], nodes.size());
        slot[i] = it->second;
        const Node& src = g.node(i);
        if (fresh) {
            nodes.push_back(src);
            continue;
        }
        Node& dst = nodes[it->second];
        if (src.id < dst.id) dst.id = src.id;
        dst.population += src.population;
        dst.exterior_perimeter += src.exterior_perimeter;
        for (const auto& [eid, vc] : src.votes) dst.votes[eid] += vc;
    }

    std::vector<Edge> edges;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_slot;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        auto [a, b] = g.endpoints(e);
        std::size_t sa = slot[a], sb = slot[b];
        if (sa == sb) continue;
        auto key = std::minmax(sa, sb);
        auto [it, fresh] = edge_slot.emplace(key, edges.size());
        if (fresh) {
            edges.push_back({nodes[sa].id, nodes[sb].id, g.edge(e).shared_perimeter});
        } else {
            edges[it->second].shared_perimeter += g.edge(e).shared_perimeter;
        }
    }
    return DualGraph(std::move(nodes), std::move(edges));
}

class MergeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

// Connected components of the subgraph induced by `members` (node indices).
inline std::vector<std::vector<std::size_t>> induced_components(const DualGraph& g,
                                                                const std::vector<std::size_t>& members) {
    std::unordered_map<std::size_t, std::size_t> local;
    for (std::size_t i = 0; i < members.size(); ++i) local.emplace(members[i], i);
    std::vector<char> seen(members.size(), 0);
    std::vector<std::vector<std::size_t>> comps;
    for (std::size_t s = 0; s < members.size(); ++s) {
        if (seen[s]) continue;
        comps.emplace_back();
        std::vector<std::size_t> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            comps.back().push_back(members[u]);
            for (const Neighbor& nb : g.neighbors(members[u])) {
                auto it = local.find(nb.node);
                if (it != local.end() && !seen[it->second]) {
                    seen[it->second] = 1;
                    stack.push_back(it->second);
                }
            }
        }
    }
    return comps;
}

}  // namespace detail

// Contracts a connected, single-county set of nodes into one node.
inline DualGraph merge_nodes(const DualGraph& g, const std::set<std::string>& ids) {
    if (ids.size() <= 1) {
        if (ids.size() == 1) (void)g.index_of(*ids.begin());
        return g;
    }
    std::vector<std::size_t> members;
    for (const std::string& id : ids) {
        if (!g.contains(id)) throw MergeError("merge_nodes: unknown node id \"" + id + "\"");
        members.push_back(g.index_of(id));
    }
    const std::string& county = g.node(members.front()).county;
    for (std::size_t m : members) {
        if (g.node(m).county != county)
            throw MergeError("merge_nodes: nodes span multiple counties (\"" + county + "\" and \"" +
                             g.node(m).county + "\")");
    }
    if (detail::induced_components(g, members).size() != 1)
        throw MergeError("merge_nodes: nodes do not induce a connected subgraph");

    std::vector<std::size_t> group(g.node_count());
    std::iota(group.begin(), group.end(), 0);
    for (std::size_t m : members) group[m] = members.front();
    return contract(g, group);
}

// Contracts every county with total population below `threshold`. A county
// whose precincts are not contiguous is contracted per connected piece.
inline DualGraph merge_small_counties(const DualGraph& g, std::int64_t threshold) {
    std::vector<std::int64_t> county_pop(g.county_count(), 0);
    std::vector<std::vector<std::size_t>> members(g.county_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        county_pop[static_cast<std::size_t>(g.county_of(i))] += g.node(i).population;
        members[static_cast<std::size_t>(g.county_of(i))].push_back(i);
    }
    std::vector<std::size_t> group(g.node_count());
    std::iota(group.begin(), group.end(), 0);
    bool changed = false;
    for (std::size_t c = 0; c < members.size(); ++c) {
        if (county_pop[c] >= threshold || members[c].size() < 2) continue;
        for (const auto& comp : detail::induced_components(g, members[c])) {
            std::size_t rep = *std::min_element(comp.begin(), comp.end());
            for (std::size_t m : comp) group[m] = rep;
            changed |= comp.size() > 1;
        }
    }
    return changed ? contract(g, group) : g;
}

}  // namespace redist

#endif  // REDIST_GRAPH_HPP
