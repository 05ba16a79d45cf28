#ifndef REDIST_CLI_HPP
#define REDIST_CLI_HPP

// `redist` command-line front end: validate, merge, grid, seed, run,
// analyze and diagnose. Every command is deterministic given its flags.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "analysis.hpp"
#include "chain.hpp"
#include "diagnostics.hpp"
#include "graph.hpp"
#include "metrics.hpp"
#include "partition.hpp"
#include "synthetic.hpp"

namespace redist::cli {

inline constexpr int kDiagnosticsFormatVersion = 1;
inline constexpr int kSummaryFormatVersion = 1;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

inline void write_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    out << j.dump(2) << '\n';
}

inline nlohmann::json violations_json(const std::vector<Violation>& vs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : vs) arr.push_back({{"kind", v.kind}, {"entity", v.entity}, {"message", v.message}});
    return arr;
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
    std::string graph;
    std::string report;
};

inline int cmd_validate(const ValidateArgs& a) {
    auto violations = validate_graph_file(a.graph);
    nlohmann::json report = {{"format_version", 1},
                             {"graph", a.graph},
                             {"valid", violations.empty()},
                             {"violations", violations_json(violations)}};
    std::cout << report.dump() << '\n';
    if (!a.report.empty()) write_json(report, a.report);
    for (const auto& v : violations) std::cerr << v.kind << ": " << v.message << '\n';
    return violations.empty() ? 0 : 1;
}

struct MergeArgs {
    std::string graph;
    std::int64_t threshold = 0;
    std::vector<std::string> groups;  // each a comma-separated id list
    std::string out;
};

inline int cmd_merge(const MergeArgs& a) {
    DualGraph g = load_graph(a.graph);
    const std::size_t before = g.node_count();
    for (const std::string& grp : a.groups) {
        auto ids = split_list(grp);
        g = merge_nodes(g, std::set<std::string>(ids.begin(), ids.end()));
    }
    if (a.threshold > 0) g = merge_small_counties(g, a.threshold);
    save_graph(g, a.out);
    std::cout << "nodes: " << before << " -> " << g.node_count() << ", edges: " << g.edge_count() << '\n';
    return 0;
}

struct GridArgs {
    GridSpec spec;
    std::string elections;
    std::string out;
};

inline int cmd_grid(GridArgs a) {
    a.spec.elections = split_list(a.elections);
    save_graph(make_grid(a.spec), a.out);
    return 0;
}

struct SeedArgs {
    std::string graph;
    int districts = 2;
    double tol = 0.01;
    std::uint64_t rng_seed = 0;
    std::string out;
};

inline int cmd_seed(const SeedArgs& a) {
    DualGraph g = load_graph(a.graph);
    BalanceSpec spec(ideal_population(g, a.districts), a.tol);
    Rng rng(a.rng_seed);
    Plan plan = [&] {
        try {
            return seed_plan(g, a.districts, spec, rng);
        } catch (const InfeasibleSeed& e) {
            std::cerr << e.what() << '\n';
            throw;
        }
    }();
    save_plan(g, plan, a.out);
    std::cout << "max_deviation: " << format_double(max_deviation(plan, spec)) << '\n' << "district_populations:";
    for (std::int64_t pop : plan.populations()) std::cout << ' ' << pop;
    std::cout << '\n';
    return 0;
}

struct RunArgs {
    std::string graph;
    std::string plan;
    std::int64_t steps = 1;
    double weight = 1.0;
    double tol = 0.01;
    std::uint64_t rng_seed = 0;
    std::uint64_t chain_index = 0;
    std::string elections;  // comma list; empty = every election in the graph
    std::string out;
    std::int64_t snapshot_every = 100000;
    std::string snapshot_dir;  // empty = no snapshots
};

inline int cmd_run(const RunArgs& a) {
    DualGraph g = load_graph(a.graph);
    Plan seed = load_plan(g, a.plan);
    ChainConfig cfg;
    cfg.weight = a.weight;
    cfg.tolerance = a.tol;
    cfg.steps = a.steps;
    cfg.rng_seed = a.rng_seed;
    cfg.chain_index = a.chain_index;
    cfg.k = seed.k();
    auto elections = a.elections.empty() ? g.elections() : split_list(a.elections);
    MetricsContext ctx = MetricsContext::for_graph(g, elections);

    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write \"" + a.out + "\"");
    if (!a.snapshot_dir.empty()) std::filesystem::create_directories(a.snapshot_dir);
    run_chain(g, seed, cfg, ctx, [&](const MetricRecord& r, const Plan& p) {
        out << record_to_json(r).dump() << '\n';
        if (!a.snapshot_dir.empty() && a.snapshot_every > 0 && r.step % a.snapshot_every == 0)
            save_plan(g, p, (std::filesystem::path(a.snapshot_dir) / ("plan_" + std::to_string(r.step) + ".csv")).string());
    });
    return 0;
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
    std::vector<std::string> metrics;
    std::string graph;
    std::string enacted_plan;
    std::string enacted_shares;
    std::vector<std::string> swing;  // election=statewide_share
    std::string out;
    std::string csv_dir;
    int bins = 50;
};

inline nlohmann::json histogram_json(const Histogram& h) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [v, c] : h) j.push_back({{"value", v}, {"count", c}});
    return j;
}

inline nlohmann::json mean_se_json(const diag::MeanSe& m) { return {{"mean", m.mean}, {"se", m.se}}; }

inline nlohmann::json box_json(const std::vector<diag::BoxStats>& boxes) {
    nlohmann::json j = nlohmann::json::array();
    for (std::size_t r = 0; r < boxes.size(); ++r) {
        const auto& b = boxes[r];
        j.push_back({{"rank", r + 1}, {"p1", b.p1}, {"p25", b.p25}, {"p50", b.p50}, {"p75", b.p75}, {"p99", b.p99}});
    }
    return j;
}

inline int cmd_analyze(const AnalyzeArgs& a) {
    if (a.metrics.empty()) throw UsageError("analyze: at least one --metrics file is required");
    std::vector<ChainColumns> chains;
    for (const auto& path : a.metrics) {
        chains.push_back(load_chain(path));
        if (chains.back().size() == 0) throw std::runtime_error("metrics file \"" + path + "\" has no records");
    }

    std::optional<EnactedPlan> enacted;
    std::optional<DualGraph> graph;
    if (!a.graph.empty()) graph = load_graph(a.graph);
    if (!a.enacted_plan.empty()) {
        if (!graph) throw UsageError("analyze: --enacted-plan needs --graph");
        enacted = enacted_from_plan(*graph, load_plan(*graph, a.enacted_plan));
    } else if (!a.enacted_shares.empty()) {
        enacted = enacted_from_json(read_json_file(a.enacted_shares));
    }

    std::map<std::string, double> statewide;
    if (graph)
        for (const auto& e : graph->elections()) statewide[e] = statewide_swing(*graph, e).statewide_share;
    if (enacted)
        for (const auto& [e, s] : enacted->statewide) statewide[e] = s;
    for (const auto& kv : a.swing) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--swing expects election=share, got \"" + kv + "\"");
        statewide[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }

    // Pool all chains for distributional summaries.
    ChainColumns pooled;
    for (const auto& c : chains) {
        auto append = [](std::vector<double>& dst, const std::vector<double>& src) {
            dst.insert(dst.end(), src.begin(), src.end());
        };
        append(pooled.counties_split, c.counties_split);
        append(pooled.total_splits, c.total_splits);
        append(pooled.perimeter, c.perimeter);
        for (const auto& [e, v] : c.seats) append(pooled.seats[e], v);
        for (const auto& [e, v] : c.competitive) append(pooled.competitive[e], v);
        for (const auto& [e, v] : c.competitive_shifted) append(pooled.competitive_shifted[e], v);
        for (const auto& [e, m] : c.shares) pooled.shares[e].insert(pooled.shares[e].end(), m.begin(), m.end());
    }
    auto across = [&](const std::string& measure) {
        std::vector<std::vector<double>> per;
        for (const auto& c : chains) per.push_back(c.series(measure));
        return diag::cross_chain_mean_se(per);
    };
    const bool csv = !a.csv_dir.empty();
    if (csv) std::filesystem::create_directories(a.csv_dir);
    auto csv_path = [&](const std::string& name) { return (std::filesystem::path(a.csv_dir) / name).string(); };

    nlohmann::json summary = {{"format_version", kSummaryFormatVersion},
                              {"chains", chains.size()},
                              {"records", pooled.size()}};
    nlohmann::json conditional = nlohmann::json::object();
    auto add_conditional = [&](const std::string& name, const std::vector<double>& x, const std::vector<double>& y) {
        auto rows = conditional_means(x, y);
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows) j.push_back({{"x", r.x}, {"count", r.count}, {"mean", r.mean}});
        conditional[name] = j;
        if (csv) write_conditional_csv(csv_path("cond_" + name + ".csv"), rows);
    };

    nlohmann::json elections = nlohmann::json::object();
    for (const auto& [e, matrix] : pooled.shares) {
        nlohmann::json ej;
        const auto& seat_v = pooled.seats.at(e);
        const auto& comp_v = pooled.competitive.at(e);
        const auto& shifted_v = pooled.competitive_shifted.at(e);
        ej["seats_histogram"] = histogram_json(integer_histogram(seat_v));
        ej["competitive_histogram"] = histogram_json(integer_histogram(comp_v));
        ej["competitive_shifted_histogram"] = histogram_json(integer_histogram(shifted_v));
        ej["cross_chain"] = {{"seats", mean_se_json(across(e + ":seats"))},
                             {"competitive", mean_se_json(across(e + ":competitive"))},
                             {"competitive_shifted", mean_se_json(across(e + ":competitive_shifted"))}};

        const std::size_t k = matrix.front().size();
        std::vector<diag::BoxStats> boxes;
        for (std::size_t r = 0; r < k; ++r) boxes.push_back(diag::rank_percentiles(matrix, r));
        ej["boxplot"] = box_json(boxes);
        std::optional<SwingSpec> swing;
        if (statewide.contains(e)) {
            swing = SwingSpec::from_statewide(statewide.at(e));
            std::vector<diag::BoxStats> shifted;
            for (const auto& b : boxes)
                shifted.push_back({b.p1 - swing->delta, b.p25 - swing->delta, b.p50 - swing->delta,
                                   b.p75 - swing->delta, b.p99 - swing->delta});
            ej["boxplot_shifted"] = box_json(shifted);
            ej["statewide_share"] = swing->statewide_share;
            if (csv) write_boxplot_csv(csv_path("boxplot_shifted_" + e + ".csv"), shifted);
        }
        if (csv) {
            write_histogram_csv(csv_path("seats_" + e + ".csv"), integer_histogram(seat_v));
            write_histogram_csv(csv_path("competitive_" + e + ".csv"), integer_histogram(comp_v));
            write_histogram_csv(csv_path("competitive_shifted_" + e + ".csv"), integer_histogram(shifted_v));
            write_boxplot_csv(csv_path("boxplot_" + e + ".csv"), boxes);
        }

        if (enacted && enacted->shares.contains(e)) {
            std::optional<double> sw;
            if (statewide.contains(e)) sw = statewide.at(e);
            auto s = summarize_enacted(enacted->shares.at(e), sw);
            if (s.sorted_shares.size() != k)
                throw std::runtime_error("enacted plan for \"" + e + "\" has " + std::to_string(s.sorted_shares.size()) +
                                         " districts, ensemble has " + std::to_string(k));
            auto pos = [](const Position& p) { return nlohmann::json{{"below", p.below}, {"at_most", p.at_most}}; };
            auto ext = diag::extreme_rank_stats(matrix, s.sorted_shares);
            nlohmann::json en = {{"sorted_shares", s.sorted_shares},
                                 {"seats", s.seats},
                                 {"seats_position", pos(position_in(seat_v, s.seats))},
                                 {"competitive", s.competitive},
                                 {"competitive_position", pos(position_in(comp_v, s.competitive))},
                                 {"rank_fraction_below", ext.fraction_below},
                                 {"rank_fraction_above", ext.fraction_above},
                                 {"most_extreme_rank", ext.most_extreme_rank + 1},
                                 {"extreme_tail", ext.tail},
                                 {"joint_extreme_probability", ext.joint_probability}};
            if (s.competitive_shifted) {
                en["competitive_shifted"] = *s.competitive_shifted;
                en["competitive_shifted_position"] = pos(position_in(shifted_v, *s.competitive_shifted));
            }
            ej["enacted"] = en;
        }
        elections[e] = ej;

        add_conditional(e + "_seats_by_counties_split", pooled.counties_split, seat_v);
        add_conditional(e + "_counties_split_by_seats", seat_v, pooled.counties_split);
        add_conditional(e + "_competitive_by_seats", seat_v, comp_v);
        add_conditional(e + "_seats_by_competitive", comp_v, seat_v);
        add_conditional(e + "_competitive_by_counties_split", pooled.counties_split, comp_v);
        add_conditional(e + "_counties_split_by_competitive", comp_v, pooled.counties_split);
    }
    summary["elections"] = elections;
    summary["conditional_means"] = conditional;

    auto scalar = [&](const std::string& name, const std::vector<double>& values, bool integer,
                      std::optional<double> enacted_value) {
        nlohmann::json j;
        if (integer) {
            auto h = integer_histogram(values);
            j["histogram"] = histogram_json(h);
            if (csv) write_histogram_csv(csv_path(name + ".csv"), h);
        } else {
            auto bins = binned_histogram(values, a.bins);
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& b : bins) arr.push_back({{"value", b.center}, {"count", b.count}});
            j["histogram"] = arr;
            if (csv) write_binned_csv(csv_path(name + ".csv"), bins);
        }
        j["cross_chain"] = mean_se_json(across(name));
        if (enacted_value) {
            auto p = position_in(values, *enacted_value);
            j["enacted"] = {{"value", *enacted_value}, {"below", p.below}, {"at_most", p.at_most}};
        }
        summary[name] = j;
    };
    auto opt_int = [](std::optional<int> v) { return v ? std::optional<double>(*v) : std::nullopt; };
    scalar("counties_split", pooled.counties_split, true, enacted ? opt_int(enacted->counties_split) : std::nullopt);
    scalar("total_splits", pooled.total_splits, true, enacted ? opt_int(enacted->total_splits) : std::nullopt);
    scalar("perimeter", pooled.perimeter, false, enacted ? enacted->perimeter : std::nullopt);

    if (!a.out.empty()) write_json(summary, a.out);
    else std::cout << summary.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------

struct DiagnoseArgs {
    std::vector<std::string> metrics;
    std::vector<std::string> measures;  // empty: every rank and seats for each election
    std::string grid;                   // comma list of n; empty: default grid
    std::int64_t min_fit_n = 0;
    double target = 0.01;
    std::string out;
    std::string points_csv;
};

inline nlohmann::json report_json(const diag::SampleSizeReport& rep, const diag::SampleSizeOptions& opt) {
    nlohmann::json measures = nlohmann::json::object();
    for (const auto& m : rep.per_measure) {
        nlohmann::json lags = nlohmann::json::array();
        for (const auto& l : m.decay_lags) lags.push_back(l ? nlohmann::json(*l) : nlohmann::json(nullptr));
        nlohmann::json grid = nlohmann::json::array();
        for (const auto& [n, ds] : m.points) {
            double mean = 0.0;
            for (double d : ds) mean += d;
            grid.push_back({{"n", n},
                            {"count", ds.size()},
                            {"mean", mean / static_cast<double>(ds.size())},
                            {"fitted", n >= opt.min_fit_n}});
        }
        measures[m.id] = {{"a", m.fits.mean.coefficient},
                          {"b", m.fits.lower.coefficient},
                          {"c", m.fits.upper.coefficient},
                          {"r_squared", {{"a", m.fits.mean.r_squared},
                                         {"b", m.fits.lower.r_squared},
                                         {"c", m.fits.upper.r_squared}}},
                          {"required_n_ks", m.required_n_ks},
                          {"decay_lag", lags},
                          {"decay_lag_max", m.decay_lag},
                          {"autocorr_decayed", m.decayed},
                          {"constant_chain", m.constant_chain},
                          {"required_n_autocorr", m.required_n_autocorr},
                          {"recommended_n", m.recommended_n},
                          {"grid", grid}};
    }
    return {{"format_version", kDiagnosticsFormatVersion},
            {"target", opt.target},
            {"autocorr_threshold", opt.autocorr_threshold},
            {"autocorr_multiple", opt.autocorr_multiple},
            {"min_fit_n", opt.min_fit_n},
            {"measures", measures},
            {"recommended_n", rep.recommended_n}};
}

inline int cmd_diagnose(const DiagnoseArgs& a) {
    if (a.metrics.size() < 2) throw UsageError("diagnose: KS diagnostics need at least 2 --metrics chains");
    std::vector<ChainColumns> chains;
    for (const auto& path : a.metrics) {
        chains.push_back(load_chain(path));
        if (chains.back().size() == 0) throw std::runtime_error("metrics file \"" + path + "\" has no records");
    }
    std::vector<std::string> ids = a.measures;
    if (ids.empty()) {
        for (const auto& [e, m] : chains.front().shares) {
            for (std::size_t r = 1; r <= m.front().size(); ++r) ids.push_back(e + ":rank" + std::to_string(r));
            ids.push_back(e + ":seats");
        }
        if (ids.empty()) ids = {"counties_split", "perimeter"};
    }
    std::vector<diag::MeasureSeries> series;
    for (const auto& id : ids) {
        diag::MeasureSeries s{id, {}};
        for (const auto& c : chains) s.chains.push_back(c.series(id));
        series.push_back(std::move(s));
    }
    diag::SampleSizeOptions opt;
    for (const auto& n : split_list(a.grid)) opt.grid.push_back(std::stoll(n));
    opt.min_fit_n = a.min_fit_n;
    opt.target = a.target;
    auto rep = diag::sample_size_report(series, opt);

    auto j = report_json(rep, opt);
    if (!a.out.empty()) write_json(j, a.out);
    else std::cout << j.dump(2) << '\n';
    if (!a.points_csv.empty()) {
        std::ofstream out(a.points_csv);
        if (!out) throw std::runtime_error("cannot write \"" + a.points_csv + "\"");
        out << "measure,n,d\n";
        for (const auto& m : rep.per_measure)
            for (const auto& [n, ds] : m.points)
                for (double d : ds) out << m.id << ',' << n << ',' << format_double(d) << '\n';
    }
    std::cerr << "recommended_n: " << rep.recommended_n << '\n';
    return 0;
}

// ---------------------------------------------------------------------------

inline int main(int argc, const char* const* argv) {
    CLI::App app{"Ensemble generation and analysis for graph districting plans"};
    app.require_subcommand(1);

    ValidateArgs va;
    auto* validate = app.add_subcommand("validate", "Check a graph file against every invariant");
    validate->add_option("graph", va.graph, "Graph JSON")->required();
    validate->add_option("--report", va.report, "Also write the JSON report here");

    MergeArgs ma;
    auto* merge = app.add_subcommand("merge", "Contract small counties and/or given node groups");
    merge->add_option("graph", ma.graph, "Graph JSON")->required();
    merge->add_option("--threshold", ma.threshold, "Merge counties with population below this");
    merge->add_option("--group", ma.groups, "Comma-separated node ids to contract (repeatable)");
    merge->add_option("--out", ma.out, "Output graph JSON")->required();

    GridArgs ga;
    auto* grid = app.add_subcommand("grid", "Write a synthetic square-grid graph");
    grid->add_option("--rows", ga.spec.rows)->capture_default_str();
    grid->add_option("--cols", ga.spec.cols)->capture_default_str();
    grid->add_option("--county-rows", ga.spec.county_rows)->capture_default_str();
    grid->add_option("--county-cols", ga.spec.county_cols)->capture_default_str();
    grid->add_option("--population", ga.spec.population)->capture_default_str();
    grid->add_option("--elections", ga.elections, "Comma-separated election ids");
    grid->add_option("--vote-seed", ga.spec.vote_seed)->capture_default_str();
    grid->add_option("--out", ga.out)->required();

    SeedArgs sa;
    auto* seed = app.add_subcommand("seed", "Draw a seed plan by recursive spanning-tree bipartition");
    seed->add_option("graph", sa.graph, "Graph JSON")->required();
    seed->add_option("--districts", sa.districts)->required();
    seed->add_option("--tol", sa.tol)->capture_default_str();
    seed->add_option("--rng-seed", sa.rng_seed)->capture_default_str();
    seed->add_option("--out", sa.out, "Plan CSV")->required();

    RunArgs ra;
    auto* run = app.add_subcommand("run", "Run a county-weighted ReCom chain");
    run->add_option("graph", ra.graph, "Graph JSON")->required();
    run->add_option("plan", ra.plan, "Seed plan CSV")->required();
    run->add_option("--steps", ra.steps)->required();
    run->add_option("--weight", ra.weight, "Intra-county weight w")->capture_default_str();
    run->add_option("--tol", ra.tol)->capture_default_str();
    run->add_option("--rng-seed", ra.rng_seed)->capture_default_str();
    run->add_option("--chain-index", ra.chain_index, "Stream index derived from the seed")->capture_default_str();
    run->add_option("--elections", ra.elections, "Comma-separated election ids (default: all)");
    run->add_option("--out", ra.out, "MetricRecord JSONL")->required();
    run->add_option("--snapshot-every", ra.snapshot_every)->capture_default_str();
    run->add_option("--snapshot-dir", ra.snapshot_dir, "Write plan CSV snapshots here");

    AnalyzeArgs aa;
    auto* analyze = app.add_subcommand("analyze", "Summarize ensembles and compare an enacted plan");
    analyze->add_option("--metrics", aa.metrics, "MetricRecord JSONL, one per chain")->required();
    analyze->add_option("--graph", aa.graph);
    analyze->add_option("--enacted-plan", aa.enacted_plan, "Enacted plan CSV (needs --graph)");
    analyze->add_option("--enacted-shares", aa.enacted_shares, "Enacted district shares JSON");
    analyze->add_option("--swing", aa.swing, "election=statewide_share (repeatable)");
    analyze->add_option("--out", aa.out, "Summary JSON (default: stdout)");
    analyze->add_option("--csv", aa.csv_dir, "Directory for CSV tables");
    analyze->add_option("--bins", aa.bins, "Perimeter histogram bins")->capture_default_str();

    DiagnoseArgs da;
    auto* diagnose = app.add_subcommand("diagnose", "KS and autocorrelation sample-size diagnostics");
    diagnose->add_option("--metrics", da.metrics, "MetricRecord JSONL, one per chain (>= 2)")->required();
    diagnose->add_option("--measure", da.measures, "Measure id, e.g. gov:rank1, gov:seats, counties_split");
    diagnose->add_option("--grid", da.grid, "Comma-separated chain lengths n");
    diagnose->add_option("--min-fit-n", da.min_fit_n, "Grid points below this are not fitted")->capture_default_str();
    diagnose->add_option("--target", da.target)->capture_default_str();
    diagnose->add_option("--out", da.out, "Diagnostics JSON (default: stdout)");
    diagnose->add_option("--points-csv", da.points_csv, "Dump of every (n, D) value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*validate) return cmd_validate(va);
        if (*merge) return cmd_merge(ma);
        if (*grid) return cmd_grid(ga);
        if (*seed) return cmd_seed(sa);
        if (*run) return cmd_run(ra);
        if (*analyze) return cmd_analyze(aa);
        if (*diagnose) return cmd_diagnose(da);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const InfeasibleSeed&) {
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

// Convenience for tests: args exclude the program name.
inline int main(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"redist"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace redist::cli

#endif  // REDIST_CLI_HPP
