#include "lcb/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lcb/errors.hpp"

namespace lcb {

namespace {

std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

bool parse_count(const std::string& field, std::int64_t& out) {
    if (field.empty()) return false;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

std::string fmt4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

const std::array<std::string, 4> kGroupColumns = {
    "pipe_schedule", "nominal_pipe_size", "material_type", "weld_type"};

}  // namespace

WeldTypeKey WeldTypeKey::parse(std::string_view text) {
    const auto fields = split_fields(text);
    if (fields.size() != 4
        || std::any_of(fields.begin(), fields.end(), [](const auto& f) { return f.empty(); })) {
        throw Error("group key must be 'schedule,size,material,weldtype', got '"
                    + std::string(text) + "'");
    }
    return WeldTypeKey{fields[0], fields[1], fields[2], fields[3]};
}

WeldTypeKey WeldTypeKey::ungrouped() {
    return WeldTypeKey{"-", "-", "-", "-"};
}

std::string WeldTypeKey::to_string() const {
    return pipe_schedule + "," + nominal_pipe_size + "," + material_type + "," + weld_type;
}

InspectionDataset ingest_csv(const std::string& path, const IngestOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return ingest_csv_stream(in, path, options);
}

InspectionDataset ingest_csv_stream(std::istream& in, const std::string& source_name,
                                    const IngestOptions& options) {
    InspectionDataset dataset;
    dataset.provenance.source = source_name;

    std::string line;
    std::size_t line_number = 0;

    // Header: find required columns, detect the optional group columns.
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        header = split_fields(stripped);
        break;
    }
    if (header.empty()) throw EmptyDatasetError("'" + source_name + "' has no header row");

    const auto column_index = [&](const std::string& name) -> std::ptrdiff_t {
        const auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? -1 : it - header.begin();
    };
    const std::ptrdiff_t id_col = column_index(options.id_column);
    const std::ptrdiff_t total_col = column_index(options.total_column);
    const std::ptrdiff_t repaired_col = column_index(options.repaired_column);
    for (const auto& [col, name] :
         {std::pair{id_col, options.id_column}, {total_col, options.total_column},
          {repaired_col, options.repaired_column}}) {
        if (col < 0) {
            throw MissingColumnError("'" + source_name + "' is missing column '" + name + "'");
        }
    }
    std::array<std::ptrdiff_t, 4> group_cols{};
    std::size_t group_cols_present = 0;
    for (std::size_t g = 0; g < 4; ++g) {
        group_cols[g] = column_index(kGroupColumns[g]);
        if (group_cols[g] >= 0) ++group_cols_present;
    }
    if (group_cols_present != 0 && group_cols_present != 4) {
        throw MissingColumnError("'" + source_name
                                 + "' has a partial weld-type key; need all of "
                                   "pipe_schedule, nominal_pipe_size, material_type, weld_type");
    }
    const bool grouped = group_cols_present == 4;
    std::ptrdiff_t max_col = std::max({id_col, total_col, repaired_col});
    if (grouped) max_col = std::max(max_col, *std::max_element(group_cols.begin(), group_cols.end()));

    // (group, operator) -> index into that group's record list
    std::map<std::pair<WeldTypeKey, std::string>, std::size_t> seen;

    while (std::getline(in, line)) {
        ++line_number;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        ++dataset.provenance.data_rows;

        const auto fields = split_fields(stripped);
        const auto reject = [&](std::string reason) {
            dataset.provenance.rejected.push_back({line_number, std::move(reason)});
        };
        if (static_cast<std::ptrdiff_t>(fields.size()) <= max_col) {
            reject("expected at least " + std::to_string(max_col + 1) + " fields, got "
                   + std::to_string(fields.size()));
            continue;
        }

        const std::string& id = fields[static_cast<std::size_t>(id_col)];
        if (id.empty()) {
            reject("empty operator id");
            continue;
        }
        std::int64_t n_total = 0;
        std::int64_t x_repaired = 0;
        if (!parse_count(fields[static_cast<std::size_t>(total_col)], n_total)) {
            reject("unparseable total_welds '" + fields[static_cast<std::size_t>(total_col)] + "'");
            continue;
        }
        if (!parse_count(fields[static_cast<std::size_t>(repaired_col)], x_repaired)) {
            reject("unparseable repaired_welds '"
                   + fields[static_cast<std::size_t>(repaired_col)] + "'");
            continue;
        }
        if (n_total < 1) {
            reject("total_welds must be >= 1, got " + std::to_string(n_total));
            continue;
        }
        if (x_repaired < 0 || x_repaired > n_total) {
            reject("repaired_welds " + std::to_string(x_repaired) + " outside [0, "
                   + std::to_string(n_total) + "]");
            continue;
        }

        WeldTypeKey key = WeldTypeKey::ungrouped();
        if (grouped) {
            key = WeldTypeKey{fields[static_cast<std::size_t>(group_cols[0])],
                              fields[static_cast<std::size_t>(group_cols[1])],
                              fields[static_cast<std::size_t>(group_cols[2])],
                              fields[static_cast<std::size_t>(group_cols[3])]};
            if (key.pipe_schedule.empty() || key.nominal_pipe_size.empty()
                || key.material_type.empty() || key.weld_type.empty()) {
                reject("empty weld-type key field");
                continue;
            }
        }

        const auto slot = seen.find({key, id});
        if (slot != seen.end()) {
            OperatorRecord& existing = dataset.groups[key][slot->second];
            existing.n_total += n_total;
            existing.x_repaired += x_repaired;
            dataset.provenance.merges.push_back({line_number, id});
            ++dataset.provenance.merged;
        } else {
            auto& group = dataset.groups[key];
            seen.emplace(std::pair{key, id}, group.size());
            group.push_back({id, n_total, x_repaired});
            ++dataset.provenance.accepted;
        }
    }

    if (dataset.provenance.accepted == 0) {
        throw EmptyDatasetError("'" + source_name + "' contains no usable rows ("
                                + std::to_string(dataset.provenance.rejected.size())
                                + " rejected)");
    }
    return dataset;
}

Report run_pipeline(const InspectionDataset& dataset, const WeldTypeKey& group,
                    const FitConfig& fit_config, double level) {
    const auto it = dataset.groups.find(group);
    if (it == dataset.groups.end()) {
        std::string available;
        for (const auto& [key, records] : dataset.groups) {
            if (!available.empty()) available += "; ";
            available += key.to_string();
        }
        throw UnknownGroupError("no group '" + group.to_string() + "' in dataset (have: "
                                + available + ")");
    }

    Report report;
    report.group = group;
    report.seed = fit_config.seed;
    report.level = level;
    report.records = it->second;
    std::sort(report.records.begin(), report.records.end(),
              [](const auto& l, const auto& r) { return l.operator_id < r.operator_id; });

    try {
        report.fit = fit(report.records, fit_config);
    } catch (const InsufficientDataError& e) {
        throw InsufficientDataError("group '" + group.to_string() + "': " + e.what());
    }

    const PriorScheme informative = PriorScheme::informative(report.fit, fit_config.clamp);
    const PriorScheme jeffreys = PriorScheme::noninformative();
    for (const auto& record : report.records) {
        report.informative.push_back(summarize(record, informative, level));
        report.noninformative.push_back(summarize(record, jeffreys, level));
        report.box_informative.push_back(boxplot_stats(report.informative.back()));
        report.box_noninformative.push_back(boxplot_stats(report.noninformative.back()));
    }
    report.comparison = analyze_cohort(report.records, report.fit, level);
    if (report.comparison.size() >= 2) {
        report.rank_shift = rank_shift_report(report.comparison);
    }
    report.scatter = scatter_data(report.records, report.fit);
    return report;
}

namespace {

nlohmann::ordered_json group_to_json(const WeldTypeKey& key) {
    return {{"pipe_schedule", key.pipe_schedule},
            {"nominal_pipe_size", key.nominal_pipe_size},
            {"material_type", key.material_type},
            {"weld_type", key.weld_type}};
}

nlohmann::ordered_json scheme_to_json(const PosteriorSummary& s) {
    return {{"prior_a", s.prior.a()},
            {"prior_b", s.prior.b()},
            {"posterior_a", s.posterior.a()},
            {"posterior_b", s.posterior.b()},
            {"mean", s.posterior_mean},
            {"ci_lo", s.ci_lo},
            {"ci_hi", s.ci_hi},
            {"mean_clamped", s.mean_clamped}};
}

nlohmann::ordered_json boxplots_to_json(const std::vector<BoxplotStats>& stats) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& b : stats) {
        arr.push_back({{"operator_id", b.operator_id},
                       {"q1", b.q1},
                       {"median", b.median},
                       {"q3", b.q3},
                       {"whisker_lo", b.whisker_lo},
                       {"whisker_hi", b.whisker_hi},
                       {"mean", b.mean}});
    }
    return arr;
}

}  // namespace

nlohmann::ordered_json fit_to_json(const RegressionFit& fit) {
    return {{"steady_state", fit.params.steady_state},
            {"amplitude", fit.params.amplitude},
            {"exponent", fit.params.exponent},
            {"sigma", fit.sigma},
            {"log_likelihood", fit.log_likelihood},
            {"converged", fit.converged},
            {"iterations", fit.iterations},
            {"restarts_used", fit.n_restarts_used},
            {"clamp_fraction", fit.clamp_fraction}};
}

nlohmann::ordered_json report_to_json(const Report& report) {
    nlohmann::ordered_json doc;
    doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    doc["seed"] = report.seed;
    doc["level"] = report.level;
    doc["group"] = group_to_json(report.group);
    doc["fit"] = fit_to_json(report.fit);

    nlohmann::ordered_json operators = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        const auto& record = report.records[i];
        operators.push_back({{"operator_id", record.operator_id},
                             {"n", record.n_total},
                             {"x", record.x_repaired},
                             {"naive_fraction", report.informative[i].naive_fraction},
                             {"informative", scheme_to_json(report.informative[i])},
                             {"noninformative", scheme_to_json(report.noninformative[i])}});
    }
    doc["operators"] = std::move(operators);

    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : report.comparison) {
        rows.push_back({{"operator_id", row.operator_id},
                        {"n", row.n_total},
                        {"mean_noninformative", row.mean_noninformative},
                        {"mean_informative", row.mean_informative},
                        {"abs_difference", row.abs_difference},
                        {"rank_noninformative", row.rank_noninformative},
                        {"rank_informative", row.rank_informative}});
    }
    doc["comparison"] = {{"rows", std::move(rows)},
                         {"rank_shift",
                          {{"operators_shifted", report.rank_shift.operators_shifted},
                           {"max_shift", report.rank_shift.max_shift},
                           {"kendall_tau_distance", report.rank_shift.kendall_tau_distance}}}};

    doc["boxplots"] = {{"informative", boxplots_to_json(report.box_informative)},
                       {"noninformative", boxplots_to_json(report.box_noninformative)}};

    nlohmann::ordered_json points = nlohmann::ordered_json::array();
    for (const auto& p : report.scatter.points) {
        points.push_back({{"operator_id", p.operator_id},
                          {"n", p.n_total},
                          {"naive_fraction", p.naive_fraction},
                          {"fitted_mu", p.fitted_mu}});
    }
    nlohmann::ordered_json curve = nlohmann::ordered_json::array();
    for (const auto& c : report.scatter.curve) {
        curve.push_back({{"n", c.n}, {"mu_fn", c.mu_fn}, {"clamped", c.clamped}});
    }
    doc["scatter"] = {{"points", std::move(points)}, {"curve", std::move(curve)}};

    doc["provenance"] = {{"schema", "lcb-report-v1"}};
    return doc;
}

std::string report_table_csv(const Report& report) {
    std::ostringstream out;
    out << "operator_id,n,X,mu_FN,prior_a,prior_b,post_a,post_b,post_mean,"
           "ci_lo,ci_hi,rank_informative,rank_noninformative\n";
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        const auto& record = report.records[i];
        const auto& inf = report.informative[i];
        const auto& row = report.comparison[i];
        const double mu = plateau_eval_clamped(report.fit.params, record.n_total).value;
        out << record.operator_id << ',' << record.n_total << ',' << record.x_repaired
            << ',' << fmt4(mu) << ',' << fmt4(inf.prior.a()) << ',' << fmt4(inf.prior.b())
            << ',' << fmt4(inf.posterior.a()) << ',' << fmt4(inf.posterior.b())
            << ',' << fmt4(inf.posterior_mean) << ',' << fmt4(inf.ci_lo) << ','
            << fmt4(inf.ci_hi) << ',' << row.rank_informative << ','
            << row.rank_noninformative << '\n';
    }
    return out.str();
}

std::string rank_table_csv(const Report& report) {
    std::vector<std::size_t> order(report.comparison.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        return report.comparison[l].rank_informative < report.comparison[r].rank_informative;
    });
    std::ostringstream out;
    out << "rank_informative,operator_id,n,mean_informative,"
           "rank_noninformative,mean_noninformative\n";
    for (std::size_t i : order) {
        const auto& row = report.comparison[i];
        out << row.rank_informative << ',' << row.operator_id << ',' << row.n_total << ','
            << fmt4(row.mean_informative) << ',' << row.rank_noninformative << ','
            << fmt4(row.mean_noninformative) << '\n';
    }
    return out.str();
}

std::string comparison_csv(std::span<const ComparisonRow> rows) {
    std::ostringstream out;
    out << "operator_id,n,mean_noninformative,mean_informative,abs_difference,"
           "rank_noninformative,rank_informative\n";
    for (const auto& row : rows) {
        out << row.operator_id << ',' << row.n_total << ',' << fmt4(row.mean_noninformative)
            << ',' << fmt4(row.mean_informative) << ',' << fmt4(row.abs_difference) << ','
            << row.rank_noninformative << ',' << row.rank_informative << '\n';
    }
    return out.str();
}

std::string fit_csv(const RegressionFit& fit) {
    std::ostringstream out;
    out << "parameter,value\n";
    out << "steady_state," << fmt4(fit.params.steady_state) << '\n';
    out << "amplitude," << fmt4(fit.params.amplitude) << '\n';
    out << "exponent," << fmt4(fit.params.exponent) << '\n';
    out << "sigma," << fmt4(fit.sigma) << '\n';
    out << "log_likelihood," << fmt4(fit.log_likelihood) << '\n';
    out << "converged," << (fit.converged ? 1 : 0) << '\n';
    out << "iterations," << fit.iterations << '\n';
    out << "restarts_used," << fit.n_restarts_used << '\n';
    out << "clamp_fraction," << fmt4(fit.clamp_fraction) << '\n';
    return out.str();
}

std::string records_csv(std::span<const OperatorRecord> records) {
    std::ostringstream out;
    out << "operator_id,total_welds,repaired_welds\n";
    for (const auto& r : records) {
        out << r.operator_id << ',' << r.n_total << ',' << r.x_repaired << '\n';
    }
    return out.str();
}

std::string records_csv(std::span<const OperatorRecord> records, const WeldTypeKey& group) {
    std::ostringstream out;
    out << "operator_id,total_welds,repaired_welds,"
           "pipe_schedule,nominal_pipe_size,material_type,weld_type\n";
    for (const auto& r : records) {
        out << r.operator_id << ',' << r.n_total << ',' << r.x_repaired << ','
            << group.pipe_schedule << ',' << group.nominal_pipe_size << ','
            << group.material_type << ',' << group.weld_type << '\n';
    }
    return out.str();
}

void write_text_atomic(const std::string& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("short write to '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

}  // namespace lcb
