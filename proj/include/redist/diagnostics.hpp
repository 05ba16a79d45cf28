#ifndef REDIST_DIAGNOSTICS_HPP
#define REDIST_DIAGNOSTICS_HPP

// Sample-size diagnostics for Markov chain ensembles.
//
// Between chains: the two-sample Kolmogorov-Smirnov distance D(n, n) between
// equal-length prefixes of independently seeded chains, averaged over all
// chain pairs and fitted as a / sqrt(n) (quantiles as b / sqrt(n) and
// c / sqrt(n)). A chain length n is adequate when a / sqrt(n) <= target.
//
// Within a chain: the smallest lag at which the autocorrelation falls to the
// threshold (0.01). A chain length is adequate when it is at least 1000 times
// that lag.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace redist::diag {

class Ecdf {
public:
    explicit Ecdf(std::vector<double> sample) : sorted_(std::move(sample)) {
        if (sorted_.empty()) throw std::invalid_argument("Ecdf: empty sample");
        std::sort(sorted_.begin(), sorted_.end());
    }

    // Fraction of the sample <= x.
    double operator()(double x) const {
        auto count = std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin();
        return static_cast<double>(count) / static_cast<double>(sorted_.size());
    }

    const std::vector<double>& sorted() const { return sorted_; }

private:
    std::vector<double> sorted_;
};

// KS distance between two already sorted samples, by a merge sweep over the
// distinct sample values. Ties (discrete data) are handled exactly.
inline double ks_sorted(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    const double m = static_cast<double>(a.size());
    const double n = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / m - static_cast<double>(j) / n));
    }
    return d;
}

inline double ks_two_sample(std::span<const double> s1, std::span<const double> s2) {
    std::vector<double> a(s1.begin(), s1.end());
    std::vector<double> b(s2.begin(), s2.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return ks_sorted(a, b);
}

// D on the first n entries of every pair (i < j), in lexicographic pair order.
inline std::vector<double> pairwise_ks(const std::vector<std::vector<double>>& series, std::size_t n) {
    if (series.size() < 2) throw std::invalid_argument("pairwise_ks: need at least 2 series");
    std::vector<std::vector<double>> prefixes;
    prefixes.reserve(series.size());
    for (const auto& s : series) {
        if (s.size() < n) throw std::invalid_argument("pairwise_ks: series shorter than n");
        prefixes.emplace_back(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n));
        std::sort(prefixes.back().begin(), prefixes.back().end());
    }
    std::vector<double> out;
    out.reserve(series.size() * (series.size() - 1) / 2);
    for (std::size_t i = 0; i < prefixes.size(); ++i)
        for (std::size_t j = i + 1; j < prefixes.size(); ++j) out.push_back(ks_sorted(prefixes[i], prefixes[j]));
    return out;
}

// ---------------------------------------------------------------------------
// Autocorrelation

class ZeroVariance : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class NonDecaying : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sample autocorrelation: lag-h autocovariance (mean of the N - h centred
// products) over the lag-0 autocovariance.
class Autocorrelation {
public:
    explicit Autocorrelation(std::span<const double> series) : centred_(series.begin(), series.end()) {
        if (centred_.empty()) throw std::invalid_argument("autocorrelation: empty series");
        double mean = 0.0;
        for (double x : centred_) mean += x;
        mean /= static_cast<double>(centred_.size());
        for (double& x : centred_) {
            x -= mean;
            c0_ += x * x;
        }
        c0_ /= static_cast<double>(centred_.size());
        if (!(c0_ > 0.0)) throw ZeroVariance("autocorrelation: series has zero variance");
    }

    double at(std::size_t lag) const {
        if (lag >= centred_.size()) throw std::invalid_argument("autocorrelation: lag must be below the series length");
        if (lag == 0) return 1.0;
        const std::size_t n = centred_.size() - lag;
        double sum = 0.0;
        for (std::size_t t = 0; t < n; ++t) sum += centred_[t] * centred_[t + lag];
        return sum / static_cast<double>(n) / c0_;
    }

    std::size_t size() const { return centred_.size(); }

private:
    std::vector<double> centred_;
    double c0_ = 0.0;
};

inline double autocorrelation(std::span<const double> series, std::size_t lag) { return Autocorrelation(series).at(lag); }

// Smallest lag L >= 1 with autocorrelation <= threshold, searched up to half
// the series length.
inline std::size_t decay_lag(std::span<const double> series, double threshold = 0.01) {
    Autocorrelation ac(series);
    const std::size_t limit = ac.size() / 2;
    for (std::size_t lag = 1; lag <= limit; ++lag)
        if (ac.at(lag) <= threshold) return lag;
    throw NonDecaying("autocorrelation does not decay to " + std::to_string(threshold) + " within lag " +
                      std::to_string(limit));
}

// ---------------------------------------------------------------------------
// Inverse square-root fits

struct KsFit {
    double coefficient = 0.0;
    double r_squared = 0.0;
    std::vector<std::pair<double, double>> points;  // (n, statistic)
};

// Least squares for y = a / sqrt(n): a = sum(y / sqrt(n)) / sum(1 / n).
inline KsFit fit_inverse_sqrt(std::vector<std::pair<double, double>> points) {
    std::vector<double> ns;
    for (const auto& [n, y] : points) {
        if (!(n > 0.0)) throw std::invalid_argument("fit_inverse_sqrt: n must be positive");
        ns.push_back(n);
    }
    std::sort(ns.begin(), ns.end());
    if (std::unique(ns.begin(), ns.end()) - ns.begin() < 2)
        throw std::invalid_argument("fit_inverse_sqrt: need at least 2 distinct n values");

    double sxy = 0.0, sxx = 0.0, mean_y = 0.0;
    for (const auto& [n, y] : points) {
        sxy += y / std::sqrt(n);
        sxx += 1.0 / n;
        mean_y += y;
    }
    mean_y /= static_cast<double>(points.size());
    KsFit fit;
    fit.coefficient = sxy / sxx;
    double ss_res = 0.0, ss_tot = 0.0;
    for (const auto& [n, y] : points) {
        double r = y - fit.coefficient / std::sqrt(n);
        ss_res += r * r;
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    if (ss_tot > 0.0)
        fit.r_squared = 1.0 - ss_res / ss_tot;
    else
        fit.r_squared = ss_res == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
    fit.points = std::move(points);
    return fit;
}

// Smallest integer n >= 1 with a / sqrt(n) <= target. The comparison carries
// a 1e-12 relative slack so that exact decimal inputs (a = 17.65) land on the
// arithmetic answer rather than one past it.
inline std::int64_t required_sample_size(double a, double target = 0.01) {
    if (!(target > 0.0)) throw std::invalid_argument("required_sample_size: target must be positive");
    if (!(a > 0.0)) return 1;
    auto ok = [&](std::int64_t n) { return a / std::sqrt(static_cast<double>(n)) <= target * (1.0 + 1e-12); };
    const double ratio = a / target;
    auto n = static_cast<std::int64_t>(std::ceil(ratio * ratio));
    n = std::max<std::int64_t>(n, 1);
    while (n > 1 && ok(n - 1)) --n;
    while (!ok(n)) ++n;
    return n;
}

// ---------------------------------------------------------------------------
// Quantiles

// Linear interpolation between order statistics at 0-based position
// q * (n - 1) of an ascending sample.
inline double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile: empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q must lie in [0, 1]");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    return quantile_sorted(values, q);
}

struct KsCurves {
    KsFit mean;   // a
    KsFit lower;  // b, through the q_lo quantiles
    KsFit upper;  // c, through the q_hi quantiles
};

using DPoints = std::map<std::int64_t, std::vector<double>>;  // n -> D values

inline std::pair<KsFit, KsFit> prediction_interval(const DPoints& points_by_n, double q_lo = 0.05, double q_hi = 0.95) {
    std::vector<std::pair<double, double>> lo, hi;
    for (const auto& [n, ds] : points_by_n) {
        lo.emplace_back(static_cast<double>(n), quantile(ds, q_lo));
        hi.emplace_back(static_cast<double>(n), quantile(ds, q_hi));
    }
    return {fit_inverse_sqrt(std::move(lo)), fit_inverse_sqrt(std::move(hi))};
}

inline KsCurves fit_ks_curves(const DPoints& points_by_n, double q_lo = 0.05, double q_hi = 0.95) {
    std::vector<std::pair<double, double>> mean_pts;
    for (const auto& [n, ds] : points_by_n) {
        if (ds.empty()) throw std::invalid_argument("fit_ks_curves: no D values at n = " + std::to_string(n));
        double s = 0.0;
        for (double d : ds) s += d;
        mean_pts.emplace_back(static_cast<double>(n), s / static_cast<double>(ds.size()));
    }
    auto [lower, upper] = prediction_interval(points_by_n, q_lo, q_hi);
    return {fit_inverse_sqrt(std::move(mean_pts)), std::move(lower), std::move(upper)};
}

// ---------------------------------------------------------------------------
// Sample size report

struct SampleSizeOptions {
    std::vector<std::int64_t> grid;  // empty: default_grid(shortest chain)
    std::int64_t min_fit_n = 0;      // grid points below this are reported but not fitted
    double target = 0.01;
    double autocorr_threshold = 0.01;
    std::int64_t autocorr_multiple = 1000;
};

// 47 evenly spaced lengths from length / 20 to length.
inline std::vector<std::int64_t> default_grid(std::int64_t length) {
    std::vector<std::int64_t> grid;
    const double lo = static_cast<double>(length) / 20.0;
    const double hi = static_cast<double>(length);
    for (int i = 0; i < 47; ++i) {
        auto n = static_cast<std::int64_t>(std::llround(lo + (hi - lo) * i / 46.0));
        if (n >= 1 && (grid.empty() || n > grid.back())) grid.push_back(n);
    }
    return grid;
}

struct MeasureReport {
    std::string id;
    DPoints points;  // every grid n, fitted or not
    KsCurves fits;
    std::int64_t required_n_ks = 1;
    std::vector<std::optional<std::int64_t>> decay_lags;  // per chain; nullopt = did not decay
    std::vector<bool> constant_chain;                      // zero-variance chains (lag reported as 0)
    bool decayed = true;
    std::int64_t decay_lag = 0;  // max over chains
    std::int64_t required_n_autocorr = 0;
    std::int64_t recommended_n = 1;
};

struct SampleSizeReport {
    std::vector<MeasureReport> per_measure;
    std::int64_t recommended_n = 1;
};

struct MeasureSeries {
    std::string id;
    std::vector<std::vector<double>> chains;
};

inline MeasureReport measure_report(const MeasureSeries& m, const SampleSizeOptions& opt) {
    if (m.chains.size() < 2) throw std::invalid_argument("measure " + m.id + ": KS diagnostics need at least 2 chains");
    std::size_t shortest = m.chains.front().size();
    for (const auto& c : m.chains) shortest = std::min(shortest, c.size());
    if (shortest == 0) throw std::invalid_argument("measure " + m.id + ": empty chain");

    MeasureReport r;
    r.id = m.id;
    auto grid = opt.grid.empty() ? default_grid(static_cast<std::int64_t>(shortest)) : opt.grid;
    DPoints fitted;
    for (std::int64_t n : grid) {
        if (n < 1 || static_cast<std::size_t>(n) > shortest) continue;
        auto ds = pairwise_ks(m.chains, static_cast<std::size_t>(n));
        r.points[n] = ds;
        if (n >= opt.min_fit_n) fitted[n] = std::move(ds);
    }
    if (fitted.size() < 2)
        throw std::invalid_argument("measure " + m.id + ": fewer than 2 grid lengths usable for fitting");
    r.fits = fit_ks_curves(fitted);
    r.required_n_ks = required_sample_size(r.fits.mean.coefficient, opt.target);

    for (const auto& chain : m.chains) {
        bool constant = false;
        std::optional<std::int64_t> lag;
        try {
            lag = static_cast<std::int64_t>(decay_lag(chain, opt.autocorr_threshold));
        } catch (const ZeroVariance&) {
            constant = true;
            lag = 0;
        } catch (const NonDecaying&) {
            r.decayed = false;
            // Lower bound: the search limit was exceeded.
            r.decay_lag = std::max<std::int64_t>(r.decay_lag, static_cast<std::int64_t>(chain.size() / 2 + 1));
        }
        if (lag) r.decay_lag = std::max(r.decay_lag, *lag);
        r.decay_lags.push_back(lag);
        r.constant_chain.push_back(constant);
    }
    r.required_n_autocorr = opt.autocorr_multiple * r.decay_lag;
    r.recommended_n = std::max(r.required_n_ks, r.required_n_autocorr);
    return r;
}

inline SampleSizeReport sample_size_report(const std::vector<MeasureSeries>& measures, const SampleSizeOptions& opt = {}) {
    SampleSizeReport report;
    for (const auto& m : measures) {
        report.per_measure.push_back(measure_report(m, opt));
        report.recommended_n = std::max(report.recommended_n, report.per_measure.back().recommended_n);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Ensemble summaries

class EmptyEnsemble : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct BoxStats {
    double p1, p25, p50, p75, p99;
};

inline BoxStats box_stats(std::vector<double> values) {
    if (values.empty()) throw EmptyEnsemble("box statistics of an empty ensemble");
    std::sort(values.begin(), values.end());
    return {quantile_sorted(values, 0.01), quantile_sorted(values, 0.25), quantile_sorted(values, 0.50),
            quantile_sorted(values, 0.75), quantile_sorted(values, 0.99)};
}

// Rows are plans, columns are ranks (ascending shares).
using ShareMatrix = std::vector<std::vector<double>>;

inline std::vector<double> rank_column(const ShareMatrix& ensemble, std::size_t rank) {
    std::vector<double> col;
    col.reserve(ensemble.size());
    for (const auto& row : ensemble) {
        if (rank >= row.size()) throw std::invalid_argument("rank out of range");
        col.push_back(row[rank]);
    }
    return col;
}

// rank is 0-based (0 = lowest share).
inline BoxStats rank_percentiles(const ShareMatrix& ensemble, std::size_t rank) {
    return box_stats(rank_column(ensemble, rank));
}

struct ExtremeRankStats {
    std::vector<double> fraction_below;  // per rank: ensemble share strictly below the enacted share
    std::vector<double> fraction_above;  // per rank: strictly above
    std::size_t most_extreme_rank = 0;
    double tail = 0.0;               // min over ranks of min(below, above)
    double joint_probability = 0.0;  // plans with some rank inside that tail
};

// A plan counts towards the joint probability when, at some rank, the
// fraction of ensemble shares strictly below (or strictly above) its share is
// at most the enacted plan's most extreme tail fraction.
inline ExtremeRankStats extreme_rank_stats(const ShareMatrix& ensemble, const std::vector<double>& enacted) {
    if (ensemble.empty()) throw EmptyEnsemble("extreme_rank_stats: empty ensemble");
    const std::size_t ranks = enacted.size();
    const double total = static_cast<double>(ensemble.size());
    std::vector<std::vector<double>> cols;
    for (std::size_t r = 0; r < ranks; ++r) {
        cols.push_back(rank_column(ensemble, r));
        std::sort(cols.back().begin(), cols.back().end());
    }
    auto below = [&](std::size_t r, double v) {
        return static_cast<double>(std::lower_bound(cols[r].begin(), cols[r].end(), v) - cols[r].begin());
    };
    auto above = [&](std::size_t r, double v) {
        return static_cast<double>(cols[r].end() - std::upper_bound(cols[r].begin(), cols[r].end(), v));
    };

    ExtremeRankStats s;
    s.tail = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < ranks; ++r) {
        s.fraction_below.push_back(below(r, enacted[r]) / total);
        s.fraction_above.push_back(above(r, enacted[r]) / total);
        double t = std::min(s.fraction_below.back(), s.fraction_above.back());
        if (t < s.tail) {
            s.tail = t;
            s.most_extreme_rank = r;
        }
    }
    std::size_t hits = 0;
    for (const auto& row : ensemble) {
        for (std::size_t r = 0; r < ranks; ++r) {
            if (below(r, row[r]) / total <= s.tail || above(r, row[r]) / total <= s.tail) {
                ++hits;
                break;
            }
        }
    }
    s.joint_probability = static_cast<double>(hits) / total;
    return s;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

// Mean of per-chain means; standard error = sample sd of the chain means
// over sqrt(number of chains). NaN SE for a single chain.
inline MeanSe cross_chain_mean_se(const std::vector<std::vector<double>>& chains) {
    if (chains.empty()) throw EmptyEnsemble("cross_chain_mean_se: no chains");
    std::vector<double> means;
    for (const auto& c : chains) {
        if (c.empty()) throw EmptyEnsemble("cross_chain_mean_se: empty chain");
        double s = 0.0;
        for (double x : c) s += x;
        means.push_back(s / static_cast<double>(c.size()));
    }
    const double m = static_cast<double>(means.size());
    MeanSe out;
    for (double x : means) out.mean += x;
    out.mean /= m;
    if (means.size() < 2) {
        out.se = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    double ss = 0.0;
    for (double x : means) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
    return out;
}

}  // namespace redist::diag

#endif  // REDIST_DIAGNOSTICS_HPP
