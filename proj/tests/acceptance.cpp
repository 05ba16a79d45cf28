// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include <redist/analysis.hpp>
#include <redist/chain.hpp>
#include <redist/cli.hpp>
#include <redist/diagnostics.hpp>
#include <redist/metrics.hpp>
#include <redist/partition.hpp>
#include <redist/synthetic.hpp>

#include "fixtures.hpp"

using namespace redist;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& check) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(double x) { return format_double(x); }

ChainConfig config(double w, double tol, std::int64_t steps, std::uint64_t seed, int k) {
    ChainConfig c;
    c.weight = w;
    c.tolerance = tol;
    c.steps = steps;
    c.rng_seed = seed;
    c.k = k;
    return c;
}

DualGraph county_grid() { return make_grid({.rows = 10, .cols = 10, .county_rows = 5, .county_cols = 5}); }

Outcome enacted_fixture() {
    const std::vector<double> gov{0.755025, 0.644199, 0.480772, 0.397891, 0.407602, 0.561725, 0.597754};
    const std::vector<double> treas{0.732848, 0.608735, 0.464260, 0.394212, 0.392769, 0.547696, 0.586725};
    const std::vector<double> sos{0.733744, 0.621864, 0.471826, 0.398713, 0.384713, 0.550642, 0.588472};
    const double statewide = two_party_share(1348888, 1080801);
    int s[3] = {seats(gov), seats(treas), seats(sos)};
    int c[3] = {competitive_count(gov), competitive_count(treas), competitive_count(sos)};
    int shifted = competitive_count(uniform_swing(gov, SwingSpec::from_statewide(statewide)));
    std::ostringstream d;
    d << "seats " << s[0] << "/" << s[1] << "/" << s[2] << ", competitive " << c[0] << "/" << c[1] << "/" << c[2]
      << ", Governor after swing " << shifted;
    bool ok = s[0] == 4 && s[1] == 4 && s[2] == 4 && c[0] == 1 && c[1] == 2 && c[2] == 1 && shifted == 2;
    return {ok, d.str()};
}

Outcome chain_validity() {
    DualGraph g = county_grid();
    const BalanceSpec spec(ideal_population(g, 4), 0.05);
    Rng rng(1);
    Plan seed = seed_plan(g, 4, spec, rng);
    std::int64_t emitted = 0, valid = 0;
    run_chain(g, seed, config(20, 0.05, 2000, 11, 4), MetricsContext::for_graph(g, {}),
              [&](const MetricRecord&, const Plan& p) {
                  ++emitted;
                  valid += is_contiguous(g, p) && max_deviation(p, spec) <= 0.05;
              });
    return {emitted == 2000 && valid == emitted, std::to_string(valid) + "/" + std::to_string(emitted) + " plans valid"};
}

Outcome weighting_effect() {
    DualGraph g = county_grid();
    const BalanceSpec spec(ideal_population(g, 4), 0.05);
    auto chains_at = [&](double w) {
        std::vector<std::vector<double>> out;
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            Rng rng(seed);
            Plan start = seed_plan(g, 4, spec, rng);
            std::vector<double> splits;
            splits.reserve(50000);
            run_chain(g, start, config(w, 0.05, 50000, seed, 4), MetricsContext::for_graph(g, {}),
                      [&](const MetricRecord& r, const Plan&) { splits.push_back(r.counties_split); });
            out.push_back(std::move(splits));
        }
        return diag::cross_chain_mean_se(out);
    };
    auto w1 = chains_at(1.0);
    auto w20 = chains_at(20.0);
    const double se = std::sqrt(w1.se * w1.se + w20.se * w20.se);
    const double diff = w1.mean - w20.mean;
    std::string d = "mean counties_split w=1 " + fmt(w1.mean) + " (se " + fmt(w1.se) + "), w=20 " + fmt(w20.mean) +
                    " (se " + fmt(w20.se) + "), difference " + fmt(diff) + " vs 3se " + fmt(3 * se);
    return {w20.mean < w1.mean && diff > 3 * se, d};
}

double ks_double_loop(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (const auto* sample : {&a, &b}) {
        for (double x : *sample) {
            std::size_t ca = 0, cb = 0;
            for (double v : a) ca += v <= x;
            for (double v : b) cb += v <= x;
            d = std::max(d, std::abs(static_cast<double>(ca) / static_cast<double>(a.size()) -
                                     static_cast<double>(cb) / static_cast<double>(b.size())));
        }
    }
    return d;
}

Outcome ks_oracle() {
    Rng rng(2024);
    int mismatches = 0;
    for (int t = 0; t < 500; ++t) {
        std::vector<double> a(1 + rng.index(50)), b(1 + rng.index(50));
        const bool discrete = t % 2 == 0;
        for (double& x : a) x = discrete ? static_cast<double>(rng.index(10)) : rng.uniform01();
        for (double& x : b) x = discrete ? static_cast<double>(rng.index(10)) : rng.uniform01();
        mismatches += diag::ks_two_sample(a, b) != ks_double_loop(a, b);
    }
    return {mismatches == 0, std::to_string(500 - mismatches) + "/500 pairs identical"};
}

Outcome smirnov_constant() {
    Rng rng(7);
    double total = 0.0;
    for (int t = 0; t < 200; ++t) {
        std::vector<double> a(1000), b(1000);
        for (double& x : a) x = rng.uniform01();
        for (double& x : b) x = rng.uniform01();
        total += diag::ks_two_sample(a, b) * std::sqrt(1000.0);
    }
    const double mean = total / 200.0;
    const auto n = diag::required_sample_size(1.22852);
    std::string d = "mean D*sqrt(n) " + fmt(mean) + ", required_sample_size(1.22852) = " + std::to_string(n);
    return {mean >= 1.0 && mean <= 1.5 && n >= 15091 && n <= 15096, d};
}

Outcome curve_fit() {
    const double a = 3.7;
    std::vector<std::pair<double, double>> pts;
    for (int i = 1; i <= 47; ++i) {
        double n = 1000.0 * i;
        pts.emplace_back(n, a / std::sqrt(n));
    }
    auto fit = diag::fit_inverse_sqrt(pts);
    const auto n = diag::required_sample_size(17.65);
    const double rel = std::abs(static_cast<double>(n) - 3116814.0) / 3116814.0;
    std::string d = "a error " + fmt(std::abs(fit.coefficient - a)) + ", R^2 " + fmt(fit.r_squared) +
                    ", required_sample_size(17.65) = " + std::to_string(n) + " (" + fmt(100 * rel) + "% from 3116814)";
    bool ok = std::abs(fit.coefficient - a) <= 1e-12 && std::abs(fit.r_squared - 1.0) <= 1e-12 && n == 3115225 &&
              rel <= 0.001;
    return {ok, d};
}

Outcome perimeter_identity() {
    DualGraph g = make_grid({.rows = 6, .cols = 6, .county_rows = 3, .county_cols = 3});
    Rng rng(5);
    int checked = 0, agree = 0;
    double worst = 0.0;
    for (int k : {2, 3, 4, 6}) {
        Plan start = seed_plan(g, k, BalanceSpec(ideal_population(g, k), 0.25), rng);
        run_chain(g, start, config(1, 0.25, 250, 100 + static_cast<std::uint64_t>(k), k), MetricsContext::for_graph(g, {}),
                  [&](const MetricRecord&, const Plan& p) {
                      double cut = 0.0;
                      for (const Edge& e : g.edges())
                          if (p.district(g.index_of(e.a)) != p.district(g.index_of(e.b))) cut += e.shared_perimeter;
                      const double expected = g.total_exterior_perimeter() + 2.0 * cut;
                      const double err = std::abs(plan_perimeter(g, p) - expected);
                      worst = std::max(worst, err);
                      ++checked;
                      agree += err <= 1e-9;
                  });
    }
    return {checked == 1000 && agree == checked,
            std::to_string(agree) + "/" + std::to_string(checked) + " plans agree, worst error " + fmt(worst)};
}

Outcome determinism() {
    using redist::testing::tmp_path;
    auto graph = tmp_path("acc_grid.json");
    auto plan = tmp_path("acc_seed.csv");
    save_graph(make_grid({.rows = 10, .cols = 10, .elections = {"e1", "e2"}}), graph);
    if (cli::main({"seed", graph, "--districts", "4", "--tol", "0.05", "--rng-seed", "9", "--out", plan}) != 0)
        return {false, "seed command failed"};
    auto run_once = [&](const std::string& out) {
        return cli::main({"run", graph, plan, "--steps", "500", "--weight", "20", "--tol", "0.05", "--rng-seed", "42",
                          "--out", out});
    };
    auto p1 = tmp_path("acc_run1.jsonl"), p2 = tmp_path("acc_run2.jsonl");
    if (run_once(p1) != 0 || run_once(p2) != 0) return {false, "run command failed"};
    const std::string a = redist::testing::slurp(p1), b = redist::testing::slurp(p2);
    const auto h1 = std::hash<std::string>{}(a), h2 = std::hash<std::string>{}(b);
    std::ostringstream d;
    d << std::hex << "hashes " << h1 << " / " << h2 << std::dec << ", " << a.size() << " bytes";
    return {!a.empty() && a == b && h1 == h2, d.str()};
}

Outcome exhaustive_support() {
    DualGraph g = make_grid({.rows = 2, .cols = 4, .county_rows = 2, .county_cols = 2});
    const BalanceSpec spec(ideal_population(g, 2), 0.01);
    std::set<std::vector<int>> balanced;
    redist::testing::for_each_partition(g.node_count(), 2, [&](const std::vector<int>& a) {
        Plan p(g, a, 2);
        if (is_valid(g, p, spec)) balanced.insert(a);
    });
    std::set<std::vector<int>> seen;
    Plan start(g, *balanced.begin(), 2);
    run_chain(g, start, config(20, 0.01, 100000, 3, 2), MetricsContext::for_graph(g, {}),
              [&](const MetricRecord&, const Plan& p) { seen.insert(redist::testing::canonical(p.assignment())); });
    std::size_t hit = 0;
    for (const auto& a : balanced) hit += seen.contains(a);
    bool ok = !balanced.empty() && hit == balanced.size() && seen.size() == balanced.size();
    return {ok, std::to_string(hit) + "/" + std::to_string(balanced.size()) + " balanced partitions visited, " +
                    std::to_string(seen.size()) + " distinct states"};
}

std::vector<double> gaussian(std::size_t n, Rng& rng) {
    std::vector<double> out(n);
    for (double& x : out) {
        double u = 1.0 - rng.uniform01(), v = rng.uniform01();
        x = std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
    }
    return out;
}

Outcome diagnostics_workflow() {
    // Each chain mixes white noise with an AR(1) component.
    const std::size_t length = 20000;
    std::vector<diag::MeasureSeries> measures{{"mixture", {}}, {"ar1", {}}};
    for (std::uint64_t c = 0; c < 10; ++c) {
        Rng rng(1000 + c);
        auto noise = gaussian(length, rng);
        auto eps = gaussian(length, rng);
        std::vector<double> mix(length), ar(length);
        double x = 0.0;
        for (std::size_t t = 0; t < length; ++t) {
            x = 0.8 * x + eps[t];
            ar[t] = x;
            mix[t] = noise[t] + 0.5 * x;
        }
        measures[0].chains.push_back(std::move(mix));
        measures[1].chains.push_back(std::move(ar));
    }
    auto rep = diag::sample_size_report(measures);
    bool ok = true;
    std::ostringstream d;
    std::int64_t best = 0;
    for (const auto& m : rep.per_measure) {
        for (const auto& [n, ds] : m.points) ok &= ds.size() == 45;
        ok &= m.points.size() == 47;
        ok &= m.fits.mean.coefficient > 0.0;  // a / sqrt(n) strictly decreasing
        ok &= m.recommended_n == std::max(m.required_n_ks, m.required_n_autocorr);
        ok &= m.required_n_autocorr == 1000 * m.decay_lag;
        best = std::max(best, m.recommended_n);
        d << m.id << ": a " << fmt(m.fits.mean.coefficient) << ", n_ks " << m.required_n_ks << ", lag " << m.decay_lag
          << ", n " << m.recommended_n << "; ";
    }
    ok &= rep.recommended_n == best;
    d << "overall " << rep.recommended_n;
    return {ok, d.str()};
}

}  // namespace

int main() {
    report(1, "enacted-plan fixture", enacted_fixture);
    report(2, "chain validity", chain_validity);
    report(3, "county weighting effect", weighting_effect);
    report(4, "KS oracle", ks_oracle);
    report(5, "Smirnov constant", smirnov_constant);
    report(6, "curve-fit exactness", curve_fit);
    report(7, "perimeter identity", perimeter_identity);
    report(8, "determinism", determinism);
    report(9, "exhaustive support", exhaustive_support);
    report(10, "diagnostics workflow", diagnostics_workflow);
    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
