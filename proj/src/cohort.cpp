#include "lcb/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>

#include "lcb/errors.hpp"

namespace lcb {

namespace {

// Ranks 1..N by descending value, ties broken by ascending operator id.
std::map<std::string, int> rank_descending(const std::vector<std::pair<std::string, double>>& means) {
    std::vector<std::size_t> idx(means.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t l, std::size_t r) {
        if (means[l].second != means[r].second) return means[l].second > means[r].second;
        return means[l].first < means[r].first;
    });
    std::map<std::string, int> rank;
    for (std::size_t pos = 0; pos < idx.size(); ++pos) {
        rank[means[idx[pos]].first] = static_cast<int>(pos) + 1;
    }
    return rank;
}

}  // namespace

std::vector<ComparisonRow> analyze_cohort(std::span<const OperatorRecord> records,
                                          const RegressionFit& fit, double level) {
    if (records.empty()) throw EmptyDatasetError("analyze_cohort: empty cohort");

    const PriorScheme informative = PriorScheme::informative(fit);
    const PriorScheme jeffreys = PriorScheme::noninformative();

    std::vector<ComparisonRow> rows;
    rows.reserve(records.size());
    std::vector<std::pair<std::string, double>> means_inf;
    std::vector<std::pair<std::string, double>> means_non;
    for (const auto& record : records) {
        const PosteriorSummary inf = summarize(record, informative, level);
        const PosteriorSummary non = summarize(record, jeffreys, level);
        rows.push_back({record.operator_id, record.n_total, non.posterior_mean,
                        inf.posterior_mean,
                        std::fabs(inf.posterior_mean - non.posterior_mean), 0, 0});
        means_inf.emplace_back(record.operator_id, inf.posterior_mean);
        means_non.emplace_back(record.operator_id, non.posterior_mean);
    }

    const auto rank_inf = rank_descending(means_inf);
    const auto rank_non = rank_descending(means_non);
    for (auto& row : rows) {
        row.rank_informative = rank_inf.at(row.operator_id);
        row.rank_noninformative = rank_non.at(row.operator_id);
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& l, const auto& r) { return l.operator_id < r.operator_id; });
    return rows;
}

RankShiftSummary rank_shift_report(std::span<const ComparisonRow> rows) {
    if (rows.size() < 2) {
        throw InsufficientDataError("rank_shift_report needs at least 2 rows, got "
                                    + std::to_string(rows.size()));
    }
    RankShiftSummary summary;
    for (const auto& row : rows) {
        const int shift = std::abs(row.rank_informative - row.rank_noninformative);
        if (shift > 0) ++summary.operators_shifted;
        summary.max_shift = std::max(summary.max_shift, shift);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            const int d_non = rows[i].rank_noninformative - rows[j].rank_noninformative;
            const int d_inf = rows[i].rank_informative - rows[j].rank_informative;
            if ((d_non < 0) != (d_inf < 0)) ++summary.kendall_tau_distance;
        }
    }
    return summary;
}

BoxplotStats boxplot_stats(const PosteriorSummary& summary) {
    const BetaParams& post = summary.posterior;
    return BoxplotStats{
        summary.operator_id,
        beta_quantile(0.25, post),
        beta_quantile(0.5, post),
        beta_quantile(0.75, post),
        beta_quantile(0.025, post),
        beta_quantile(0.975, post),
        beta_mean(post),
    };
}

ScatterData scatter_data(std::span<const OperatorRecord> records, const RegressionFit& fit) {
    ScatterData data;
    if (records.empty()) return data;

    std::int64_t n_min = records.front().n_total;
    std::int64_t n_max = n_min;
    for (const auto& record : records) {
        validate_record(record);
        n_min = std::min(n_min, record.n_total);
        n_max = std::max(n_max, record.n_total);
        data.points.push_back({record.operator_id, record.n_total,
                               static_cast<double>(record.x_repaired)
                                   / static_cast<double>(record.n_total),
                               plateau_eval_clamped(fit.params, record.n_total).value});
    }
    std::sort(data.points.begin(), data.points.end(),
              [](const auto& l, const auto& r) { return l.operator_id < r.operator_id; });

    // 100 geometrically spaced counts, rounded and deduplicated.
    constexpr int kGridPoints = 100;
    std::vector<std::int64_t> grid;
    const double lo = std::log(static_cast<double>(n_min));
    const double hi = std::log(static_cast<double>(n_max));
    for (int i = 0; i < kGridPoints; ++i) {
        const double t = kGridPoints == 1 ? 0.0
                                          : static_cast<double>(i) / (kGridPoints - 1);
        grid.push_back(static_cast<std::int64_t>(std::llround(std::exp(lo + t * (hi - lo)))));
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    for (std::int64_t n : grid) {
        const ClampedValue v = plateau_eval_clamped(fit.params, n);
        data.curve.push_back({n, v.value, v.clamped});
    }
    return data;
}

}  // namespace lcb
