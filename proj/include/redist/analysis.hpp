#ifndef REDIST_ANALYSIS_HPP
#define REDIST_ANALYSIS_HPP

// Ensemble aggregation: histograms, ranked-share box plots, conditional
// means, cross-chain comparisons and enacted-plan overlays.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "diagnostics.hpp"
#include "metrics.hpp"

namespace redist {

inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

// Reads MetricRecord JSONL, calling `fn` per record. Returns the count.
template <typename Fn>
std::int64_t for_each_record(const std::string& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open metrics file \"" + path + "\"");
    std::string line;
    std::int64_t count = 0, lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            fn(record_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        ++count;
    }
    return count;
}

// Column store of one chain's records.
struct ChainColumns {
    std::vector<double> counties_split;
    std::vector<double> total_splits;
    std::vector<double> perimeter;
    std::map<std::string, std::vector<double>> seats;
    std::map<std::string, std::vector<double>> competitive;
    std::map<std::string, std::vector<double>> competitive_shifted;
    std::map<std::string, diag::ShareMatrix> shares;

    std::size_t size() const { return perimeter.size(); }

    void add(const MetricRecord& r) {
        counties_split.push_back(r.counties_split);
        total_splits.push_back(r.total_splits);
        perimeter.push_back(r.perimeter);
        for (const auto& [e, m] : r.per_election) {
            seats[e].push_back(m.seats);
            competitive[e].push_back(m.competitive);
            competitive_shifted[e].push_back(m.competitive_shifted);
            shares[e].push_back(m.sorted_shares);
        }
    }

    // Scalar series by measure id: counties_split, total_splits, perimeter,
    // <election>:seats, <election>:competitive, <election>:competitive_shifted,
    // <election>:rank<r> (1-based, 1 = lowest share).
    std::vector<double> series(const std::string& measure) const {
        if (measure == "counties_split") return counties_split;
        if (measure == "total_splits") return total_splits;
        if (measure == "perimeter") return perimeter;
        auto colon = measure.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("unknown measure \"" + measure + "\"");
        std::string e = measure.substr(0, colon), what = measure.substr(colon + 1);
        auto pick = [&](const std::map<std::string, std::vector<double>>& m) {
            auto it = m.find(e);
            if (it == m.end()) throw std::invalid_argument("metrics have no election \"" + e + "\"");
            return it->second;
        };
        if (what == "seats") return pick(seats);
        if (what == "competitive") return pick(competitive);
        if (what == "competitive_shifted") return pick(competitive_shifted);
        if (what.rfind("rank", 0) == 0) {
            auto it = shares.find(e);
            if (it == shares.end()) throw std::invalid_argument("metrics have no election \"" + e + "\"");
            int r = 0;
            auto [p, ec] = std::from_chars(what.data() + 4, what.data() + what.size(), r);
            if (ec != std::errc() || p != what.data() + what.size() || r < 1)
                throw std::invalid_argument("bad rank in measure \"" + measure + "\"");
            return diag::rank_column(it->second, static_cast<std::size_t>(r - 1));
        }
        throw std::invalid_argument("unknown measure \"" + measure + "\"");
    }
};

inline ChainColumns load_chain(const std::string& path) {
    ChainColumns c;
    for_each_record(path, [&](const MetricRecord& r) { c.add(r); });
    return c;
}

using Histogram = std::map<std::int64_t, std::int64_t>;

inline Histogram integer_histogram(const std::vector<double>& values) {
    Histogram h;
    for (double v : values) ++h[std::llround(v)];
    return h;
}

struct Bin {
    double center;
    std::int64_t count;
};

// Equal-width bins over [min, max]; the top edge belongs to the last bin.
inline std::vector<Bin> binned_histogram(const std::vector<double>& values, int bins = 50) {
    if (values.empty()) return {};
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi == lo) return {{lo, static_cast<std::int64_t>(values.size())}};
    const double width = (hi - lo) / bins;
    std::vector<Bin> out(static_cast<std::size_t>(bins));
    for (int b = 0; b < bins; ++b) out[static_cast<std::size_t>(b)] = {lo + (b + 0.5) * width, 0};
    for (double v : values) {
        auto b = std::min(bins - 1, static_cast<int>((v - lo) / width));
        ++out[static_cast<std::size_t>(b)].count;
    }
    return out;
}

struct ConditionalMean {
    double x;
    std::int64_t count;
    double mean;
};

// Mean of y for each distinct x, ascending in x.
inline std::vector<ConditionalMean> conditional_means(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("conditional_means: length mismatch");
    std::map<double, std::pair<std::int64_t, double>> acc;
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto& [n, s] = acc[x[i]];
        ++n;
        s += y[i];
    }
    std::vector<ConditionalMean> out;
    for (const auto& [xv, ns] : acc) out.push_back({xv, ns.first, ns.second / static_cast<double>(ns.first)});
    return out;
}

struct Position {
    double below;     // fraction of the ensemble strictly below
    double at_most;   // fraction <= value
};

inline Position position_in(const std::vector<double>& ensemble, double value) {
    if (ensemble.empty()) throw diag::EmptyEnsemble("position of a value in an empty ensemble");
    std::int64_t below = 0, at_most = 0;
    for (double v : ensemble) {
        below += v < value;
        at_most += v <= value;
    }
    const double n = static_cast<double>(ensemble.size());
    return {static_cast<double>(below) / n, static_cast<double>(at_most) / n};
}

// Enacted-plan values: per-election district shares (unsorted) and, when the
// plan itself was supplied, split and perimeter values.
struct EnactedPlan {
    std::map<std::string, std::vector<double>> shares;
    std::map<std::string, double> statewide;  // statewide two-party share per election
    std::optional<int> counties_split;
    std::optional<int> total_splits;
    std::optional<double> perimeter;
};

// Fixture JSON: {"shares": {"<election>": [d0, d1, ...]}, "statewide": {"<election>": s}}.
inline EnactedPlan enacted_from_json(const nlohmann::json& j) {
    EnactedPlan e;
    for (const auto& [eid, arr] : j.at("shares").items()) e.shares[eid] = arr.get<std::vector<double>>();
    if (j.contains("statewide"))
        for (const auto& [eid, s] : j.at("statewide").items()) e.statewide[eid] = s.get<double>();
    return e;
}

inline EnactedPlan enacted_from_plan(const DualGraph& g, const Plan& p) {
    EnactedPlan e;
    for (const std::string& eid : g.elections()) {
        e.shares[eid] = district_shares(g, p, eid);
        e.statewide[eid] = statewide_swing(g, eid).statewide_share;
    }
    CountySplits cs = county_splits(g, p);
    e.counties_split = cs.counties_split;
    e.total_splits = cs.total_splits;
    e.perimeter = plan_perimeter(g, p);
    return e;
}

struct EnactedElectionSummary {
    std::vector<double> sorted_shares;
    int seats = 0;
    int competitive = 0;
    std::optional<int> competitive_shifted;
};

inline EnactedElectionSummary summarize_enacted(const std::vector<double>& shares, std::optional<double> statewide,
                                                CompetitiveBand band = {}) {
    EnactedElectionSummary s;
    s.sorted_shares = sorted_shares(shares);
    s.seats = seats(shares);
    s.competitive = competitive_count(shares, band);
    if (statewide) s.competitive_shifted = competitive_count(uniform_swing(shares, SwingSpec::from_statewide(*statewide)), band);
    return s;
}

// ---------------------------------------------------------------------------
// CSV writers

inline void write_histogram_csv(const std::string& path, const Histogram& h) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    out << "value,count\n";
    for (const auto& [v, c] : h) out << v << ',' << c << '\n';
}

inline void write_binned_csv(const std::string& path, const std::vector<Bin>& bins) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    out << "value,count\n";
    for (const Bin& b : bins) out << format_double(b.center) << ',' << b.count << '\n';
}

// rank is written 1-based (1 = lowest share).
inline void write_boxplot_csv(const std::string& path, const std::vector<diag::BoxStats>& ranks) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    out << "rank,p1,p25,p50,p75,p99\n";
    for (std::size_t r = 0; r < ranks.size(); ++r) {
        const auto& b = ranks[r];
        out << r + 1 << ',' << format_double(b.p1) << ',' << format_double(b.p25) << ',' << format_double(b.p50) << ','
            << format_double(b.p75) << ',' << format_double(b.p99) << '\n';
    }
}

inline void write_conditional_csv(const std::string& path, const std::vector<ConditionalMean>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    out << "x,count,mean\n";
    for (const auto& r : rows) out << format_double(r.x) << ',' << r.count << ',' << format_double(r.mean) << '\n';
}

}  // namespace redist

#endif  // REDIST_ANALYSIS_HPP
