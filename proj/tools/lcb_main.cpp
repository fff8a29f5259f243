// lcb: per-operator quality analytics from weld inspection tallies.
//
//   fit       beta-binomial learning-curve regression only
//   analyze   full pipeline: fit, priors, posteriors, rankings, plot data
//   rank      ranking table under the informative scheme
//   compare   informative vs noninformative posterior means and rank shifts
//   simulate  synthetic cohort in the standard CSV schema
//
// Exit codes: 0 success, 1 data errors, 2 usage errors.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lcb/errors.hpp"
#include "lcb/io.hpp"
#include "lcb/synth.hpp"

namespace {

std::uint64_t default_seed() {
    const char* env = std::getenv("LCB_SEED");
    if (env == nullptr || *env == '\0') return 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == nullptr || *end != '\0') {
        throw CLI::ValidationError("LCB_SEED", "LCB_SEED must be an unsigned integer");
    }
    return v;
}

struct CommonOpts {
    std::string input;
    std::string group_text;
    std::uint64_t seed = 0;
    double level = 0.95;
    std::string out = "-";
    std::string format = "json";
};

struct FitOpts {
    int restarts = 8;
    int max_iterations = 2000;
    double tolerance = 1e-9;
    double clamp_epsilon = 1e-6;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool takes_input,
                const std::vector<std::string>& formats) {
    if (takes_input) {
        cmd->add_option("data", opts.input, "input CSV of inspection tallies")
            ->required()
            ->check(CLI::ExistingFile);
    }
    cmd->add_option("--group", opts.group_text,
                    "weld-type key 'schedule,size,material,weldtype'");
    cmd->add_option("--seed", opts.seed, "random seed (default: LCB_SEED env or 0)");
    cmd->add_option("--level", opts.level, "credible-interval level")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--out", opts.out, "output path, '-' for stdout");
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember(formats));
}

void add_fit_knobs(CLI::App* cmd, FitOpts& opts) {
    cmd->add_option("--restarts", opts.restarts, "optimizer restarts")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-iterations", opts.max_iterations, "iteration cap per restart")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tolerance", opts.tolerance, "convergence tolerance");
    cmd->add_option("--clamp-epsilon", opts.clamp_epsilon,
                    "clip fitted means into [eps, 1-eps]");
}

lcb::FitConfig make_fit_config(const CommonOpts& common, const FitOpts& fitopts) {
    lcb::FitConfig config;
    config.n_restarts = fitopts.restarts;
    config.max_iterations = fitopts.max_iterations;
    config.tolerance = fitopts.tolerance;
    config.clamp.epsilon = fitopts.clamp_epsilon;
    config.seed = common.seed;
    return config;
}

lcb::WeldTypeKey select_group(const lcb::InspectionDataset& dataset,
                              const std::string& group_text) {
    if (!group_text.empty()) return lcb::WeldTypeKey::parse(group_text);
    if (dataset.groups.size() == 1) return dataset.groups.begin()->first;
    std::string keys;
    for (const auto& [key, records] : dataset.groups) {
        if (!keys.empty()) keys += "; ";
        keys += key.to_string();
    }
    throw lcb::Error("dataset has " + std::to_string(dataset.groups.size())
                     + " weld-type groups, pick one with --group (have: " + keys + ")");
}

void emit(const std::string& out, const std::string& content) {
    if (out == "-" || out.empty()) {
        std::cout << content;
    } else {
        lcb::write_text_atomic(out, content);
    }
}

void warn_rejected(const lcb::InspectionDataset& dataset) {
    for (const auto& row : dataset.provenance.rejected) {
        std::cerr << "warning: " << dataset.provenance.source << ":" << row.line_number
                  << " rejected: " << row.reason << "\n";
    }
    for (const auto& row : dataset.provenance.merges) {
        std::cerr << "note: " << dataset.provenance.source << ":" << row.line_number
                  << " merged duplicate tally for operator '" << row.operator_id << "'\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"operator quality performance from inspection tallies: learning-curve "
                 "regression, experience-based priors, conjugate posteriors"};
    app.set_version_flag("--version", std::string(lcb::kToolVersion));
    app.require_subcommand(1);

    CommonOpts fit_common, analyze_common, rank_common, compare_common, sim_common;
    FitOpts fit_knobs, analyze_knobs, rank_knobs, compare_knobs;
    sim_common.format = "csv";

    try {
        const std::uint64_t seed0 = default_seed();
        fit_common.seed = analyze_common.seed = rank_common.seed = compare_common.seed =
            sim_common.seed = seed0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    auto* fit_cmd = app.add_subcommand("fit", "fit the learning curve to one group");
    add_common(fit_cmd, fit_common, true, {"json", "csv"});
    add_fit_knobs(fit_cmd, fit_knobs);

    auto* analyze_cmd = app.add_subcommand("analyze", "full pipeline report for one group");
    add_common(analyze_cmd, analyze_common, true, {"json", "csv"});
    add_fit_knobs(analyze_cmd, analyze_knobs);

    auto* rank_cmd = app.add_subcommand("rank", "operator ranking table");
    add_common(rank_cmd, rank_common, true, {"json", "csv"});
    add_fit_knobs(rank_cmd, rank_knobs);

    auto* compare_cmd =
        app.add_subcommand("compare", "informative vs noninformative posterior means");
    add_common(compare_cmd, compare_common, true, {"json", "csv"});
    add_fit_knobs(compare_cmd, compare_knobs);

    auto* sim_cmd = app.add_subcommand("simulate", "generate a synthetic cohort CSV");
    add_common(sim_cmd, sim_common, false, {"csv"});
    int sim_operators = 200;
    std::int64_t sim_n_min = 20;
    std::int64_t sim_n_max = 500;
    double sim_steady = 0.149;
    double sim_amplitude = -0.00544;
    double sim_exponent = -0.5;
    double sim_sigma = 0.0184;
    sim_cmd->add_option("--operators", sim_operators, "cohort size")
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--n-min", sim_n_min, "minimum welds per operator");
    sim_cmd->add_option("--n-max", sim_n_max, "maximum welds per operator");
    sim_cmd->add_option("--steady-state", sim_steady, "curve steady-state level");
    sim_cmd->add_option("--amplitude", sim_amplitude, "curve learning amplitude");
    sim_cmd->add_option("--exponent", sim_exponent,
                        "curve rate; value(n) = steady + amplitude * n^(-exponent)");
    sim_cmd->add_option("--sigma", sim_sigma, "beta dispersion 1/(a+b)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*fit_cmd) {
            const auto dataset = lcb::ingest_csv(fit_common.input);
            warn_rejected(dataset);
            const auto key = select_group(dataset, fit_common.group_text);
            const auto it = dataset.groups.find(key);
            if (it == dataset.groups.end()) {
                throw lcb::UnknownGroupError("no group '" + key.to_string() + "' in dataset");
            }
            const auto fitted = lcb::fit(it->second, make_fit_config(fit_common, fit_knobs));
            if (fit_common.format == "csv") {
                emit(fit_common.out, lcb::fit_csv(fitted));
            } else {
                nlohmann::ordered_json doc;
                doc["tool"] = {{"name", lcb::kToolName}, {"version", lcb::kToolVersion}};
                doc["group"] = key.to_string();
                doc["seed"] = fit_common.seed;
                doc["fit"] = lcb::fit_to_json(fitted);
                emit(fit_common.out, doc.dump(2) + "\n");
            }
        } else if (*analyze_cmd) {
            const auto dataset = lcb::ingest_csv(analyze_common.input);
            warn_rejected(dataset);
            const auto key = select_group(dataset, analyze_common.group_text);
            const auto report = lcb::run_pipeline(
                dataset, key, make_fit_config(analyze_common, analyze_knobs),
                analyze_common.level);
            emit(analyze_common.out, analyze_common.format == "csv"
                                         ? lcb::report_table_csv(report)
                                         : lcb::report_to_json(report).dump(2) + "\n");
        } else if (*rank_cmd) {
            const auto dataset = lcb::ingest_csv(rank_common.input);
            warn_rejected(dataset);
            const auto key = select_group(dataset, rank_common.group_text);
            const auto report = lcb::run_pipeline(
                dataset, key, make_fit_config(rank_common, rank_knobs), rank_common.level);
            if (rank_common.format == "csv") {
                emit(rank_common.out, lcb::rank_table_csv(report));
            } else {
                const auto doc = lcb::report_to_json(report);
                emit(rank_common.out, doc["comparison"].dump(2) + "\n");
            }
        } else if (*compare_cmd) {
            const auto dataset = lcb::ingest_csv(compare_common.input);
            warn_rejected(dataset);
            const auto key = select_group(dataset, compare_common.group_text);
            const auto report = lcb::run_pipeline(
                dataset, key, make_fit_config(compare_common, compare_knobs),
                compare_common.level);
            std::cerr << "rank shifts: " << report.rank_shift.operators_shifted
                      << " operators moved, max shift " << report.rank_shift.max_shift
                      << ", Kendall tau distance " << report.rank_shift.kendall_tau_distance
                      << "\n";
            if (compare_common.format == "csv") {
                emit(compare_common.out, lcb::comparison_csv(report.comparison));
            } else {
                const auto doc = lcb::report_to_json(report);
                emit(compare_common.out, doc["comparison"].dump(2) + "\n");
            }
        } else if (*sim_cmd) {
            const lcb::SynthConfig config(
                lcb::PlateauParams{sim_steady, sim_amplitude, sim_exponent}, sim_sigma,
                sim_operators, sim_n_min, sim_n_max, sim_common.seed);
            const auto cohort = lcb::generate_cohort(config);
            if (sim_common.group_text.empty()) {
                emit(sim_common.out, lcb::records_csv(cohort));
            } else {
                emit(sim_common.out, lcb::records_csv(
                                         cohort, lcb::WeldTypeKey::parse(sim_common.group_text)));
            }
        }
    } catch (const lcb::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
