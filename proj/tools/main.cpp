#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmnorm/config.hpp"
#include "mmnorm/coverage.hpp"
#include "mmnorm/csv.hpp"
#include "mmnorm/errors.hpp"
#include "mmnorm/mcsim.hpp"
#include "mmnorm/netmodel.hpp"
#include "mmnorm/normalize.hpp"
#include "mmnorm/sweep.hpp"

namespace {

using namespace mmnorm;

const std::vector<std::string> kCoverageHeader = {
    "threshold_db", "p_los", "p_nlos_inner", "p_nlos_outer", "p_cov", "method"};

void append_coverage_cells(std::vector<std::string>& row,
                           const CoverageResult& result) {
    row.push_back(format_number(result.p_los));
    row.push_back(format_number(result.p_nlos_inner));
    row.push_back(format_number(result.p_nlos_outer));
    row.push_back(format_number(result.p_cov));
    row.push_back(result.method);
}

CsvTable densities_table(const NetworkConfig& network) {
    CsvTable table;
    table.header = {"profile",       "j",
                    "segment_start_m", "segment_end_m",
                    "density_per_m2",  "prefactor"};
    const auto add_profile = [&table](const std::string& name, int j,
                                      const PiecewiseDensity& profile) {
        double left = 0.0;
        for (std::size_t i = 0; i < profile.values().size(); ++i) {
            const bool tail = i == profile.breakpoints().size();
            table.rows.push_back({name, std::to_string(j), format_number(left),
                                  tail ? "inf"
                                       : format_number(profile.breakpoints()[i]),
                                  format_number(profile.values()[i]),
                                  format_number(profile.prefactor())});
            if (!tail) left = profile.breakpoints()[i];
        }
    };

    const DirectivityLevels levels =
        directivity_levels(network.bs_pattern, network.ue_pattern);
    for (int j = 1; j <= 4; ++j)
        if (levels.a[static_cast<std::size_t>(j - 1)] > 0.0)
            add_profile("los", j, build_los_profile(network, j));
    const NlosProfiles nlos = build_nlos_profiles(network);
    add_profile("nlos-inner", 0, nlos.inner);
    add_profile("nlos-outer", 0, nlos.outer);
    return table;
}

CsvTable coverage_table(const NetworkConfig& network,
                        const std::vector<double>& thresholds_db, PdfMode mode,
                        Alignment alignment) {
    CsvTable table;
    table.header = kCoverageHeader;
    for (double db : thresholds_db) {
        CoverageQuery query;
        query.threshold = db_to_linear(db);
        query.config = network;
        query.mode = mode;
        query.alignment = alignment;
        const CoverageResult result = coverage(query);
        std::vector<std::string> row{format_number(db)};
        append_coverage_cells(row, result);
        table.rows.push_back(std::move(row));
    }
    return table;
}

CsvTable mc_table(const SimConfig& sim, const std::vector<double>& thresholds_db) {
    std::vector<double> thresholds;
    thresholds.reserve(thresholds_db.size());
    for (double db : thresholds_db) thresholds.push_back(db_to_linear(db));
    const std::vector<McEstimate> estimates =
        sim.kind == SimKind::BranchMirror ? run_branch_mirror(sim, thresholds)
                                          : run_physical(sim, thresholds);
    CsvTable table;
    table.header = {"threshold_db", "kind",   "mean",
                    "std_error",    "trials", "outage_trials"};
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        const McEstimate& e = estimates[i];
        table.rows.push_back({format_number(thresholds_db[i]), to_string(sim.kind),
                              format_number(e.mean), format_number(e.std_error),
                              std::to_string(e.trials),
                              std::to_string(e.outage_trials)});
    }
    return table;
}

CsvTable sweep_table(const SweepSpec& spec) {
    CsvTable table;
    const bool threshold_axis = spec.axis == SweepAxis::ThresholdDb;
    if (threshold_axis) {
        table.header = kCoverageHeader;
    } else {
        table.header.push_back(spec.axis == SweepAxis::BeamwidthDeg
                                   ? "beamwidth_deg"
                                   : "los_fraction");
        table.header.insert(table.header.end(), kCoverageHeader.begin(),
                            kCoverageHeader.end());
    }
    for (const SweepRow& row : sweep(spec)) {
        std::vector<std::string> cells;
        if (!threshold_axis) cells.push_back(format_number(row.axis_value));
        cells.push_back(format_number(row.threshold_db));
        append_coverage_cells(cells, row.result);
        table.rows.push_back(std::move(cells));
    }
    return table;
}

struct CliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode;
    std::string out;
};

PdfMode effective_mode(const RunConfig& cfg, const CliOverrides& cli) {
    if (cli.mode) return parse_pdf_mode(*cli.mode, "--mode");
    return cfg.mode;
}

std::string effective_out(const RunConfig& cfg, const CliOverrides& cli) {
    return cli.out.empty() ? cfg.out_path : cli.out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Normalization model for multi-tier networks: scaled density "
                 "profiles, analytic coverage, and Monte Carlo validation"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path;
    CliOverrides cli;
    app.add_option("--config", config_path, "JSON configuration file")
        ->required();
    app.add_option("--out", cli.out,
                   "Output path (default: config \"out\" key or stdout)");
    app.add_option("--seed", cli.seed, "Override the Monte Carlo seed");
    app.add_option("--mode", cli.mode, "Override the density mode")
        ->check(CLI::IsMember({"paper-literal", "rigorous"}));

    app.add_subcommand("densities",
                       "Dump the scaled piecewise density profiles");

    auto* coverage_cmd = app.add_subcommand(
        "coverage", "Analytic coverage probability per threshold");
    std::vector<double> thresholds_flag;
    std::optional<std::string> alignment_flag;
    coverage_cmd
        ->add_option("--thresholds-db", thresholds_flag,
                     "Threshold grid in dB (comma-separated)")
        ->delimiter(',');
    coverage_cmd->add_option("--alignment", alignment_flag, "Alignment variant")
        ->check(CLI::IsMember({"with-errors", "perfect"}));

    auto* mc_cmd =
        app.add_subcommand("mc", "Monte Carlo coverage estimate per threshold");
    std::optional<std::string> kind_flag;
    std::optional<std::uint64_t> trials_flag;
    std::optional<unsigned> threads_flag;
    std::vector<double> mc_thresholds_flag;
    mc_cmd->add_option("--kind", kind_flag, "Estimator kind")
        ->check(CLI::IsMember({"branch-mirror", "physical"}));
    mc_cmd->add_option("--trials", trials_flag, "Trial count");
    mc_cmd->add_option("--threads", threads_flag, "Worker threads");
    mc_cmd
        ->add_option("--thresholds-db", mc_thresholds_flag,
                     "Threshold grid in dB (comma-separated)")
        ->delimiter(',');

    auto* sweep_t_cmd = app.add_subcommand(
        "sweep-threshold", "Coverage swept over an SNR threshold grid");
    auto* sweep_b_cmd = app.add_subcommand(
        "sweep-beamwidth", "Coverage swept over a beamwidth grid");
    std::vector<double> grid_flag;
    std::vector<std::string> variants_flag;
    std::optional<double> sweep_threshold_flag;
    for (CLI::App* cmd : {sweep_t_cmd, sweep_b_cmd}) {
        cmd->add_option("--grid", grid_flag, "Axis grid (comma-separated)")
            ->delimiter(',');
        cmd->add_option("--variants", variants_flag,
                        "mode/alignment pairs (comma-separated)")
            ->delimiter(',');
    }
    sweep_b_cmd->add_option("--threshold-db", sweep_threshold_flag,
                            "Fixed threshold in dB");

    auto* opt_cmd = app.add_subcommand(
        "opt-beamwidth", "Beamwidth maximizing coverage per threshold");
    double lo_deg = 5.0, hi_deg = 60.0;
    std::vector<double> opt_thresholds_flag;
    opt_cmd->add_option("--lo-deg", lo_deg, "Search range lower edge, degrees");
    opt_cmd->add_option("--hi-deg", hi_deg, "Search range upper edge, degrees");
    opt_cmd
        ->add_option("--thresholds-db", opt_thresholds_flag,
                     "Thresholds in dB (comma-separated)")
        ->delimiter(',');

    auto* validate_cmd = app.add_subcommand(
        "validate", "Parse and validate the config, echo the canonical form");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error[config]: " << e.what() << "\n";
        return 2;
    }

    try {
        const RunConfig cfg = load_config(config_path);
        const std::string out = effective_out(cfg, cli);

        if (validate_cmd->parsed()) {
            const std::string canonical = serialize_config(cfg);
            if (out.empty() || out == "-") {
                std::cout << canonical;
            } else {
                std::ofstream file(out, std::ios::binary);
                if (!file) throw io_error("cannot open for writing: " + out);
                file << canonical;
                file.flush();
                if (!file) throw io_error("write failed: " + out);
            }
            return 0;
        }

        if (app.get_subcommand("densities")->parsed()) {
            emit_csv(densities_table(cfg.network), out);
            return 0;
        }

        if (coverage_cmd->parsed()) {
            const std::vector<double>& thresholds =
                thresholds_flag.empty() ? cfg.thresholds_db : thresholds_flag;
            const Alignment alignment =
                alignment_flag ? parse_alignment_name(*alignment_flag, "--alignment")
                               : cfg.alignment;
            emit_csv(coverage_table(cfg.network, thresholds,
                                    effective_mode(cfg, cli), alignment),
                     out);
            return 0;
        }

        if (mc_cmd->parsed()) {
            SimConfig sim = cfg.sim_config();
            if (cli.seed) sim.seed = *cli.seed;
            if (kind_flag) sim.kind = parse_sim_kind(*kind_flag, "--kind");
            if (trials_flag) sim.trials = *trials_flag;
            if (threads_flag) sim.threads = *threads_flag;
            const std::vector<double>& thresholds =
                mc_thresholds_flag.empty() ? cfg.thresholds_db
                                           : mc_thresholds_flag;
            emit_csv(mc_table(sim, thresholds), out);
            return 0;
        }

        if (sweep_t_cmd->parsed() || sweep_b_cmd->parsed()) {
            const SweepAxis axis = sweep_t_cmd->parsed()
                                       ? SweepAxis::ThresholdDb
                                       : SweepAxis::BeamwidthDeg;
            SweepSpec spec = cfg.sweep_spec();
            spec.axis = axis;
            if (!grid_flag.empty()) {
                spec.grid = grid_flag;
            } else if (cfg.grid.empty() || cfg.axis != axis) {
                if (axis == SweepAxis::ThresholdDb)
                    spec.grid = cfg.thresholds_db;
                else
                    throw config_error(
                        "beamwidth sweep needs --grid or a sweep.grid with "
                        "axis \"beamwidth-deg\"");
            }
            if (sweep_threshold_flag) spec.threshold_db = *sweep_threshold_flag;
            if (!variants_flag.empty()) {
                spec.variants.clear();
                for (const std::string& s : variants_flag)
                    spec.variants.push_back(parse_variant(s, "--variants"));
            }
            if (cli.mode) {
                const PdfMode mode = parse_pdf_mode(*cli.mode, "--mode");
                for (SweepVariant& v : spec.variants) v.mode = mode;
            }
            emit_csv(sweep_table(spec), out);
            return 0;
        }

        if (opt_cmd->parsed()) {
            const std::vector<double>& thresholds =
                opt_thresholds_flag.empty() ? cfg.thresholds_db
                                            : opt_thresholds_flag;
            CsvTable table;
            table.header = {"threshold_db", "beamwidth_opt_deg", "p_cov_opt",
                            "at_boundary"};
            for (double db : thresholds) {
                const BeamwidthOptimum opt = optimal_beamwidth(
                    cfg.network, db_to_linear(db), deg_to_rad(lo_deg),
                    deg_to_rad(hi_deg), effective_mode(cfg, cli));
                table.rows.push_back({format_number(db),
                                      format_number(rad_to_deg(opt.beamwidth)),
                                      format_number(opt.coverage_value),
                                      opt.at_boundary ? "1" : "0"});
            }
            emit_csv(table, out);
            return 0;
        }

        std::cerr << "error[config]: no subcommand\n";
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "error[numeric]: " << e.what()
                  << " (achieved tolerance " << e.achieved_tolerance() << ")\n";
        return 3;
    } catch (const io_error& e) {
        std::cerr << "error[io]: " << e.what() << "\n";
        return 4;
    } catch (const config_error& e) {
        std::cerr << "error[config]: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error[config]: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << "\n";
        return 1;
    }
}
