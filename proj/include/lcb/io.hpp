#pragma once

// Dataset ingestion (CSV), weld-type grouping, the end-to-end analysis
// pipeline, and report emission (JSON + Table-2 style CSV).

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lcb/cohort.hpp"
#include "lcb/records.hpp"
#include "lcb/regression.hpp"

#include <json.hpp>

namespace lcb {

inline constexpr std::string_view kToolName = "lcb";
inline constexpr std::string_view kToolVersion = "0.1.0";

// The four design attributes identifying a weld type. Selection strings use
// the order "schedule,size,material,weldtype", e.g. "STD,2,A,BW".
struct WeldTypeKey {
    std::string pipe_schedule;
    std::string nominal_pipe_size;
    std::string material_type;
    std::string weld_type;

    auto operator<=>(const WeldTypeKey&) const = default;

    static WeldTypeKey parse(std::string_view text);
    static WeldTypeKey ungrouped();  // ("-","-","-","-") for datasets without group columns
    std::string to_string() const;
};

struct IngestOptions {
    std::string id_column = "operator_id";
    std::string total_column = "total_welds";
    std::string repaired_column = "repaired_welds";
};

struct RejectedRow {
    std::size_t line_number = 0;
    std::string reason;
};

struct MergedRow {
    std::size_t line_number = 0;
    std::string operator_id;
};

struct IngestLog {
    std::string source;
    std::size_t data_rows = 0;
    std::size_t accepted = 0;
    std::size_t merged = 0;
    std::vector<RejectedRow> rejected;
    std::vector<MergedRow> merges;
};

struct InspectionDataset {
    std::map<WeldTypeKey, std::vector<OperatorRecord>> groups;
    IngestLog provenance;
};

// Comma-separated, UTF-8, header required, '#' comment lines skipped, no
// quoting. Rows violating 0 <= X <= n or n < 1 (or that fail to parse) land
// in the rejected log with their line numbers; duplicate (group, operator)
// rows are summed into the first occurrence and logged as merges. Throws
// MissingColumnError / EmptyDatasetError.
InspectionDataset ingest_csv(const std::string& path, const IngestOptions& options = {});
InspectionDataset ingest_csv_stream(std::istream& in, const std::string& source_name,
                                    const IngestOptions& options = {});

// Everything `analyze` emits; self-describing (tool version, seed, fit,
// clamp statistics all embedded).
struct Report {
    WeldTypeKey group;
    std::uint64_t seed = 0;
    double level = 0.95;
    RegressionFit fit;
    std::vector<OperatorRecord> records;            // sorted by operator id
    std::vector<PosteriorSummary> informative;      // aligned with records
    std::vector<PosteriorSummary> noninformative;   // aligned with records
    std::vector<ComparisonRow> comparison;
    RankShiftSummary rank_shift;                    // zeros for single-operator cohorts
    std::vector<BoxplotStats> box_informative;
    std::vector<BoxplotStats> box_noninformative;
    ScatterData scatter;
};

// Fit, per-operator posteriors under both schemes, rankings, boxplot and
// scatter data for one weld-type group. Throws UnknownGroupError when the
// key is absent and propagates InsufficientDataError from the fit.
Report run_pipeline(const InspectionDataset& dataset, const WeldTypeKey& group,
                    const FitConfig& fit_config = {}, double level = 0.95);

nlohmann::ordered_json report_to_json(const Report& report);
nlohmann::ordered_json fit_to_json(const RegressionFit& fit);

// Table-2 style per-operator table, 4-decimal display precision.
std::string report_table_csv(const Report& report);
// Ranking table sorted by informative rank.
std::string rank_table_csv(const Report& report);
// Informative-vs-noninformative comparison rows.
std::string comparison_csv(std::span<const ComparisonRow> rows);
std::string fit_csv(const RegressionFit& fit);

// Cohort in the standard ingestion schema; group columns included when a key
// is given, so emitted files round-trip through ingest_csv.
std::string records_csv(std::span<const OperatorRecord> records);
std::string records_csv(std::span<const OperatorRecord> records, const WeldTypeKey& group);

// Writes via a temp file in the same directory plus rename.
void write_text_atomic(const std::string& path, std::string_view content);

}  // namespace lcb
