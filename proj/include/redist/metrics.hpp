#ifndef REDIST_METRICS_HPP
#define REDIST_METRICS_HPP

// Per-plan measures: two-party shares, seats, ranked shares, county splits,
// total district perimeter, vote-band competitiveness and uniform swing.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "graph.hpp"
#include "partition.hpp"

namespace redist {

inline constexpr int kRecordFormatVersion = 1;

class UndefinedShare : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline double two_party_share(std::int64_t dem, std::int64_t rep) {
    if (dem + rep <= 0) throw UndefinedShare("two-party share undefined: no major-party votes");
    return static_cast<double>(dem) / static_cast<double>(dem + rep);
}

inline std::vector<VoteCount> district_votes(const DualGraph& g, const Plan& p, const std::string& election) {
    std::vector<VoteCount> out(static_cast<std::size_t>(p.k()));
    for (std::size_t i = 0; i < g.node_count(); ++i)
        out[static_cast<std::size_t>(p.district(i))] += g.node(i).votes.at(election);
    return out;
}

// Democratic two-party share of each district, by district index.
inline std::vector<double> district_shares(const DualGraph& g, const Plan& p, const std::string& election) {
    std::vector<double> shares;
    shares.reserve(static_cast<std::size_t>(p.k()));
    for (const VoteCount& vc : district_votes(g, p, election)) shares.push_back(two_party_share(vc.dem, vc.rep));
    return shares;
}

// Districts with share strictly above one half; an exact tie is not a seat.
inline int seats(const std::vector<double>& shares) {
    return static_cast<int>(std::count_if(shares.begin(), shares.end(), [](double s) { return s > 0.5; }));
}

inline std::vector<double> sorted_shares(std::vector<double> shares) {
    std::sort(shares.begin(), shares.end());
    return shares;
}

struct CompetitiveBand {
    double lo = 0.45;
    double hi = 0.55;
};

// Closed interval: both endpoints count as competitive.
inline int competitive_count(const std::vector<double>& shares, CompetitiveBand band = {}) {
    return static_cast<int>(
        std::count_if(shares.begin(), shares.end(), [&](double s) { return s >= band.lo && s <= band.hi; }));
}

struct SwingSpec {
    double statewide_share;
    double delta;

    static SwingSpec from_statewide(double share) {
        if (!(share > 0.0 && share < 1.0)) throw std::invalid_argument("statewide share must lie in (0, 1)");
        return {share, share - 0.5};
    }
};

inline SwingSpec statewide_swing(const DualGraph& g, const std::string& election) {
    VoteCount t = g.total_votes(election);
    return SwingSpec::from_statewide(two_party_share(t.dem, t.rep));
}

// Shifts every share toward a 50-50 statewide result, clamped to [0, 1].
inline std::vector<double> uniform_swing(std::vector<double> shares, const SwingSpec& swing) {
    for (double& s : shares) s = std::clamp(s - swing.delta, 0.0, 1.0);
    return shares;
}

struct CountySplits {
    int counties_split = 0;
    int total_splits = 0;
};

inline CountySplits county_splits(const DualGraph& g, const Plan& p) {
    const std::size_t k = static_cast<std::size_t>(p.k());
    std::vector<char> touched(g.county_count() * k, 0);
    for (std::size_t i = 0; i < g.node_count(); ++i)
        touched[static_cast<std::size_t>(g.county_of(i)) * k + static_cast<std::size_t>(p.district(i))] = 1;
    CountySplits out;
    for (std::size_t c = 0; c < g.county_count(); ++c) {
        int n = 0;
        for (std::size_t d = 0; d < k; ++d) n += touched[c * k + d];
        if (n >= 2) {
            ++out.counties_split;
            out.total_splits += n - 1;
        }
    }
    return out;
}

// Perimeter of each district: exterior boundary of its nodes plus every
// boundary it shares with another district.
inline std::vector<double> district_perimeters(const DualGraph& g, const Plan& p) {
    std::vector<double> per(static_cast<std::size_t>(p.k()), 0.0);
    for (std::size_t i = 0; i < g.node_count(); ++i)
        per[static_cast<std::size_t>(p.district(i))] += g.node(i).exterior_perimeter;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        auto [a, b] = g.endpoints(e);
        int da = p.district(a), db = p.district(b);
        if (da == db) continue;
        per[static_cast<std::size_t>(da)] += g.edge(e).shared_perimeter;
        per[static_cast<std::size_t>(db)] += g.edge(e).shared_perimeter;
    }
    return per;
}

inline double plan_perimeter(const DualGraph& g, const Plan& p) {
    double total = 0.0;
    for (double d : district_perimeters(g, p)) total += d;
    return total;
}

// ---------------------------------------------------------------------------
// Records

struct ElectionMetrics {
    std::vector<double> sorted_shares;
    int seats = 0;
    int competitive = 0;
    int competitive_shifted = 0;

    friend bool operator==(const ElectionMetrics&, const ElectionMetrics&) = default;
};

struct MetricRecord {
    std::int64_t step = 0;
    std::map<std::string, ElectionMetrics> per_election;
    int counties_split = 0;
    int total_splits = 0;
    double perimeter = 0.0;

    friend bool operator==(const MetricRecord&, const MetricRecord&) = default;
};

// Elections to evaluate plus the swing toward 50-50 for each, taken from
// the graph's statewide vote totals.
struct MetricsContext {
    std::vector<std::string> elections;
    std::map<std::string, SwingSpec> swings;
    CompetitiveBand band;

    static MetricsContext for_graph(const DualGraph& g, std::vector<std::string> elections) {
        MetricsContext ctx;
        for (const std::string& e : elections) {
            if (!g.has_election(e)) throw std::invalid_argument("graph has no election \"" + e + "\"");
            ctx.swings.emplace(e, statewide_swing(g, e));
        }
        ctx.elections = std::move(elections);
        return ctx;
    }
};

inline ElectionMetrics election_metrics(const std::vector<double>& shares, const SwingSpec& swing,
                                        CompetitiveBand band = {}) {
    ElectionMetrics m;
    m.sorted_shares = sorted_shares(shares);
    m.seats = seats(shares);
    m.competitive = competitive_count(shares, band);
    m.competitive_shifted = competitive_count(uniform_swing(shares, swing), band);
    return m;
}

inline MetricRecord compute_record(const DualGraph& g, const Plan& p, const MetricsContext& ctx, std::int64_t step = 0) {
    MetricRecord r;
    r.step = step;
    for (const std::string& e : ctx.elections)
        r.per_election.emplace(e, election_metrics(district_shares(g, p, e), ctx.swings.at(e), ctx.band));
    CountySplits cs = county_splits(g, p);
    r.counties_split = cs.counties_split;
    r.total_splits = cs.total_splits;
    r.perimeter = plan_perimeter(g, p);
    return r;
}

inline nlohmann::json record_to_json(const MetricRecord& r) {
    nlohmann::json per = nlohmann::json::object();
    for (const auto& [e, m] : r.per_election) {
        per[e] = {{"sorted_shares", m.sorted_shares},
                  {"seats", m.seats},
                  {"competitive", m.competitive},
                  {"competitive_shifted", m.competitive_shifted}};
    }
    return {{"format_version", kRecordFormatVersion},
            {"step", r.step},
            {"per_election", per},
            {"counties_split", r.counties_split},
            {"total_splits", r.total_splits},
            {"perimeter", r.perimeter}};
}

inline MetricRecord record_from_json(const nlohmann::json& j) {
    if (j.value("format_version", -1) != kRecordFormatVersion)
        throw std::runtime_error("metric record: unsupported or missing format_version");
    MetricRecord r;
    r.step = j.at("step").get<std::int64_t>();
    for (const auto& [e, m] : j.at("per_election").items()) {
        ElectionMetrics em;
        em.sorted_shares = m.at("sorted_shares").get<std::vector<double>>();
        em.seats = m.at("seats").get<int>();
        em.competitive = m.at("competitive").get<int>();
        em.competitive_shifted = m.at("competitive_shifted").get<int>();
        r.per_election.emplace(e, std::move(em));
    }
    r.counties_split = j.at("counties_split").get<int>();
    r.total_splits = j.at("total_splits").get<int>();
    r.perimeter = j.at("perimeter").get<double>();
    return r;
}

}  // namespace redist

#endif  // REDIST_METRICS_HPP
