#include "nbclones/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "nbclones/error.hpp"

namespace nbc {

namespace {

double normal_two_sided(double z) { return std::min(1.0, std::erfc(std::fabs(z) / std::sqrt(2.0))); }

double sign(double v) { return (v > 0) - (v < 0); }

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const double mx = mean_of(x), my = mean_of(y);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

bool is_constant(std::span<const double> v) {
    return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

}  // namespace

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw ValidationError("quantile of empty sample");
    const double h = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

SummaryRow percentiles(std::span<const double> values) {
    if (values.empty()) throw ValidationError("percentiles of empty sample");
    std::vector<double> s(values.begin(), values.end());
    std::sort(s.begin(), s.end());
    SummaryRow r;
    r.min = s.front();
    r.max = s.back();
    r.p10 = quantile_sorted(s, 0.10);
    r.p25 = quantile_sorted(s, 0.25);
    r.median = quantile_sorted(s, 0.50);
    r.p75 = quantile_sorted(s, 0.75);
    r.p90 = quantile_sorted(s, 0.90);
    r.mean = mean_of(values);
    return r;
}

std::vector<double> average_ranks(std::span<const double> values, double* tie_term) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    double ties = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
        const double t = static_cast<double>(j - i);
        ties += t * t * t - t;
        i = j;
    }
    if (tie_term) *tie_term = ties;
    return ranks;
}

TestResult spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("spearman: samples differ in length");
    if (x.size() < 3) throw ValidationError("spearman: need at least 3 paired observations");
    TestResult r{"spearman", "rho", 0.0, std::nullopt, {x.size()}, {}};
    if (is_constant(x) || is_constant(y)) {
        r.notes = "degenerate: constant input";
        return r;
    }
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double rho = std::clamp(pearson(rx, ry), -1.0, 1.0);
    r.statistic = rho;
    const double df = static_cast<double>(x.size()) - 2.0;
    if (std::fabs(rho) >= 1.0) {
        r.p_value = 0.0;
    } else {
        const double t = rho * std::sqrt(df / (1.0 - rho * rho));
        // Two-sided Student t tail: I_{df/(df+t^2)}(df/2, 1/2).
        r.p_value = std::min(1.0, boost::math::ibeta(df / 2.0, 0.5, df / (df + t * t)));
    }
    r.notes = "t approximation";
    return r;
}

TestResult kruskal_wallis(std::span<const std::vector<double>> groups) {
    if (groups.size() < 2) throw ValidationError("kruskal_wallis: need at least 2 groups");
    std::vector<double> pooled;
    TestResult r{"kruskal_wallis", "H", 0.0, std::nullopt, {}, {}};
    for (const auto& g : groups) {
        if (g.empty()) throw ValidationError("kruskal_wallis: empty group");
        r.sizes.push_back(g.size());
        pooled.insert(pooled.end(), g.begin(), g.end());
    }
    const double n = static_cast<double>(pooled.size());
    if (pooled.size() < 3) throw ValidationError("kruskal_wallis: need at least 3 observations");
    double ties = 0;
    const auto ranks = average_ranks(pooled, &ties);
    const double correction = 1.0 - ties / (n * n * n - n);
    if (correction <= 0.0) {
        r.notes = "degenerate: all values identical";
        return r;
    }
    double sum = 0;
    std::size_t offset = 0;
    const double centre = (n + 1.0) / 2.0;
    for (const auto& g : groups) {
        double rs = 0;
        for (std::size_t i = 0; i < g.size(); ++i) rs += ranks[offset + i];
        offset += g.size();
        const double ni = static_cast<double>(g.size());
        const double d = rs / ni - centre;
        sum += ni * d * d;
    }
    const double h = 12.0 / (n * (n + 1.0)) * sum / correction;
    r.statistic = h;
    const double df = static_cast<double>(groups.size()) - 1.0;
    r.p_value = h > 0 ? boost::math::gamma_q(df / 2.0, h / 2.0) : 1.0;
    r.notes = ties > 0 ? "chi-square approximation; tie corrected" : "chi-square approximation";
    return r;
}

TestResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw ValidationError("wilcoxon_rank_sum: empty sample");
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    double ties = 0;
    const auto ranks = average_ranks(pooled, &ties);
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double n = na + nb;
    const double w = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(a.size()), 0.0);
    TestResult r{"wilcoxon_rank_sum", "W", w, std::nullopt, {a.size(), b.size()}, {}};
    const double variance = na * nb / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    if (!(variance > 0)) {
        r.notes = "degenerate: all values identical";
        return r;
    }
    const double diff = w - na * (n + 1.0) / 2.0;
    const double z = (diff - 0.5 * sign(diff)) / std::sqrt(variance);
    r.p_value = normal_two_sided(z);
    r.notes = ties > 0 ? "normal approximation; continuity corrected; tie corrected"
                       : "normal approximation; continuity corrected";
    return r;
}

TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("wilcoxon_signed_rank: samples differ in length");
    std::vector<double> diffs;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        if (d != 0) diffs.push_back(d);
    }
    TestResult r{"wilcoxon_signed_rank", "V", 0.0, std::nullopt, {x.size()}, {}};
    if (diffs.empty()) {
        r.notes = "degenerate: all differences zero";
        return r;
    }
    std::vector<double> mags(diffs.size());
    std::transform(diffs.begin(), diffs.end(), mags.begin(), [](double d) { return std::fabs(d); });
    double ties = 0;
    const auto ranks = average_ranks(mags, &ties);
    double v = 0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        if (diffs[i] > 0) v += ranks[i];
    }
    r.statistic = v;
    const double n = static_cast<double>(diffs.size());
    const double mu = n * (n + 1.0) / 4.0;
    const double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - ties / 48.0;
    const double diff = v - mu;
    const double z = (diff - 0.5 * sign(diff)) / std::sqrt(variance);
    r.p_value = normal_two_sided(z);
    r.notes = "normal approximation; continuity corrected";
    if (diffs.size() != x.size()) r.notes += "; zero differences dropped";
    if (ties > 0) r.notes += "; tie corrected";
    return r;
}

std::vector<double> hochberg_adjust(std::span<const double> p) {
    for (double v : p) {
        if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("hochberg_adjust: p-value outside [0,1]");
    }
    const std::size_t m = p.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    std::vector<double> adjusted(m);
    double running = 1.0;
    for (std::size_t k = m; k-- > 0;) {
        // k is 0-based rank in ascending order, so the multiplier m - (k+1) + 1 = m - k.
        running = std::min(running, static_cast<double>(m - k) * p[order[k]]);
        adjusted[order[k]] = std::min(1.0, running);
    }
    return adjusted;
}

PairwiseTable pairwise_wilcoxon(std::span<const std::vector<double>> groups, std::vector<std::string> labels) {
    if (labels.size() != groups.size()) throw ValidationError("pairwise_wilcoxon: label count mismatch");
    std::vector<double> raw;
    for (std::size_t i = 1; i < groups.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const auto t = wilcoxon_rank_sum(groups[i], groups[j]);
            raw.push_back(t.p_value.value_or(1.0));
        }
    }
    const auto adj = hochberg_adjust(raw);
    PairwiseTable table{std::move(labels), {}};
    table.adjusted.resize(groups.size());
    std::size_t k = 0;
    for (std::size_t i = 1; i < groups.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) table.adjusted[i].push_back(adj[k++]);
    }
    return table;
}

BinSpec BinSpec::fixed(double width, double origin) {
    if (!(width > 0)) throw ValidationError("histogram: bin width must be positive");
    BinSpec s;
    s.kind = Kind::FixedWidth;
    s.width = width;
    s.origin = origin;
    return s;
}

BinSpec BinSpec::explicit_edges(std::vector<double> edges) {
    if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()) ||
        std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
        throw ValidationError("histogram: need at least two strictly increasing edges");
    }
    BinSpec s;
    s.kind = Kind::Edges;
    s.edges = std::move(edges);
    return s;
}

std::vector<HistogramBin> histogram(std::span<const double> values, const BinSpec& spec) {
    std::map<long long, std::size_t> counts;
    for (double v : values) {
        long long idx;
        if (spec.kind == BinSpec::Kind::FixedWidth) {
            // The small slack keeps values like 0.3 with width 0.1 out of the bin below.
            idx = static_cast<long long>(std::floor((v - spec.origin) / spec.width + 1e-9));
        } else {
            const auto it = std::upper_bound(spec.edges.begin(), spec.edges.end(), v);
            idx = static_cast<long long>(it - spec.edges.begin()) - 1;
            idx = std::clamp<long long>(idx, 0, static_cast<long long>(spec.edges.size()) - 2);
        }
        ++counts[idx];
    }
    std::vector<HistogramBin> out;
    out.reserve(counts.size());
    for (const auto& [idx, c] : counts) {
        const double lower = spec.kind == BinSpec::Kind::FixedWidth
                                 ? spec.origin + static_cast<double>(idx) * spec.width
                                 : spec.edges[static_cast<std::size_t>(idx)];
        out.push_back({lower, c});
    }
    return out;
}

std::string format_p_value(double p) {
    if (p < 2.2e-16) return "< 2.2e-16";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", p);
    return buf;
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string test_results_csv(std::span<const TestResult> results) {
    std::string out = "test,statistic,value,p,notes\n";
    for (const auto& r : results) {
        out += r.test + ',' + r.statistic_name + ',' + format_number(r.statistic) + ',';
        if (r.p_value) out += format_number(*r.p_value);
        out += ',' + r.notes + '\n';
    }
    return out;
}

}  // namespace nbc
