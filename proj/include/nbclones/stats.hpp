#pragma once

// Rank statistics used by the analyses: interpolated percentiles, Spearman's
// rho, Kruskal-Wallis, Wilcoxon rank-sum (two-sample) and signed-rank
// (paired) tests, Hochberg step-up adjustment, and histogram binning.
// p-values come from large-sample approximations (t, chi-square, normal)
// throughout; no exact small-sample distributions.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nbc {

struct SummaryRow {
    double min = 0, p10 = 0, p25 = 0, median = 0, mean = 0, p75 = 0, p90 = 0, max = 0;
};

/// Linear interpolation at h = (n-1)q over the ascending sort.
double quantile_sorted(std::span<const double> sorted, double q);

/// Throws ValidationError on empty input.
SummaryRow percentiles(std::span<const double> values);

/// Ranks 1..n with ties averaged. `tie_term`, if given, receives sum(t^3 - t)
/// over tie groups.
std::vector<double> average_ranks(std::span<const double> values, double* tie_term = nullptr);

struct TestResult {
    std::string test;            // spearman | kruskal_wallis | wilcoxon_rank_sum | wilcoxon_signed_rank
    std::string statistic_name;  // rho | H | W | V
    double statistic = 0;
    std::optional<double> p_value;  // empty when degenerate
    std::vector<std::size_t> sizes;
    std::string notes;

    bool degenerate() const noexcept { return !p_value.has_value(); }
};

TestResult spearman(std::span<const double> x, std::span<const double> y);
TestResult kruskal_wallis(std::span<const std::vector<double>> groups);
/// W is the rank sum of `a` in the joint ranking.
TestResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b);
TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y);

std::vector<double> hochberg_adjust(std::span<const double> p_values);

/// Lower-triangle matrix of Hochberg-adjusted pairwise rank-sum p-values;
/// entry [i][j] for j < i compares groups i and j.
struct PairwiseTable {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> adjusted;
};

PairwiseTable pairwise_wilcoxon(std::span<const std::vector<double>> groups, std::vector<std::string> labels);

struct BinSpec {
    enum class Kind { FixedWidth, Edges };
    Kind kind = Kind::FixedWidth;
    double width = 1.0;
    double origin = 0.0;
    std::vector<double> edges;

    static BinSpec fixed(double width, double origin = 0.0);
    /// Bins [e_i, e_{i+1}); values outside the edges are clamped into the end bins.
    static BinSpec explicit_edges(std::vector<double> edges);
};

struct HistogramBin {
    double lower;
    std::size_t count;
};

/// Non-empty bins in ascending order.
std::vector<HistogramBin> histogram(std::span<const double> values, const BinSpec& spec);

/// "%.4g"-style rendering, except p < 2.2e-16 prints as "< 2.2e-16".
std::string format_p_value(double p);

/// Shortest round-trip representation of a double.
std::string format_number(double v);

/// `test,statistic,value,p,notes` header plus one row per result.
std::string test_results_csv(std::span<const TestResult> results);

}  // namespace nbc
