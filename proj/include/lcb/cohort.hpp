#pragma once

// Cohort-level pipeline: per-operator posterior means under both prior
// schemes, rankings, ranking-shift summaries, boxplot statistics, and
// plot-ready scatter data. Pure transformations; outputs are deterministically
// ordered.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lcb/bayes.hpp"
#include "lcb/records.hpp"
#include "lcb/regression.hpp"

namespace lcb {

struct ComparisonRow {
    std::string operator_id;
    std::int64_t n_total = 0;
    double mean_noninformative = 0.0;
    double mean_informative = 0.0;
    double abs_difference = 0.0;
    int rank_noninformative = 0;  // 1 = highest posterior mean (worst performer)
    int rank_informative = 0;
};

struct RankShiftSummary {
    int operators_shifted = 0;  // operators whose rank differs between schemes
    int max_shift = 0;
    long long kendall_tau_distance = 0;  // discordant pairs between the rankings
};

struct BoxplotStats {
    std::string operator_id;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double whisker_lo = 0.0;  // 2.5% posterior quantile
    double whisker_hi = 0.0;  // 97.5% posterior quantile
    double mean = 0.0;
};

struct ScatterPoint {
    std::string operator_id;
    std::int64_t n_total = 0;
    double naive_fraction = 0.0;
    double fitted_mu = 0.0;
};

struct ScatterData {
    std::vector<ScatterPoint> points;
    std::vector<CurvePoint> curve;  // dense geometric grid over [min n, max n]
};

// One row per operator with posterior means under the informative scheme
// (from the fit) and the Jeffreys baseline. Ranks are 1..N by descending
// posterior mean, ties broken by ascending operator id; rows are returned
// sorted by operator id.
std::vector<ComparisonRow> analyze_cohort(std::span<const OperatorRecord> records,
                                          const RegressionFit& fit, double level = 0.95);

// Rank agreement between the two schemes; Kendall tau distance by brute-force
// pair counting. Requires at least 2 rows.
RankShiftSummary rank_shift_report(std::span<const ComparisonRow> rows);

// Quartiles, 2.5%/97.5% whiskers and mean of a posterior.
BoxplotStats boxplot_stats(const PosteriorSummary& summary);

// Per-operator (n, X/n, fitted mu) plus a 100-point geometric fitted-curve
// grid spanning the cohort's weld counts.
ScatterData scatter_data(std::span<const OperatorRecord> records, const RegressionFit& fit);

}  // namespace lcb
