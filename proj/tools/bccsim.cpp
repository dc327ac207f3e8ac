// bccsim: batch driver for UEP-LDPC coded modulation experiments on the
// fading broadcast channel with confidential messages.
//
//   design            degree reports and protection profile
//   build             parity-check matrix (alist + JSON sidecar)
//   simulate          Monte Carlo error-rate sweep (AWGN or quasi-static fading)
//   analyze           threshold extraction from a measured curve
//   report            closed-form outage / security-gap report
//   reproduce-table1  the bundled reference scenario table
//
// Exit codes: 0 ok, 2 validation error, 3 infeasible, 4 budget exhausted.

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "bcc/experiment.hpp"

namespace {

bcc::ExperimentSpec load_spec(const std::string& config_path, std::optional<std::uint64_t> seed,
                              std::optional<int> workers) {
    auto spec = bcc::parse_experiment_file(config_path);
    if (seed) spec.seed = *seed;
    if (workers) spec.workers = *workers;
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UEP-LDPC coded modulation toolkit for the fading BCC"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("bccsim ") + bcc::toolkit_version);

    std::string config_path, out_dir, curve_path, thresholds_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> workers_override;
    bool force = false;

    auto add_common = [&](CLI::App* cmd, bool need_config) {
        auto* opt = cmd->add_option("--config,-c", config_path, "experiment config file");
        if (need_config) opt->required();
        cmd->add_option("--out,-o", out_dir, "output directory (default: config [output] dir)");
        cmd->add_option("--seed", seed_override, "override the experiment seed");
        cmd->add_option("--workers", workers_override, "override the worker count");
    };

    auto* design = app.add_subcommand("design", "write degree distributions and class sizes");
    add_common(design, true);
    auto* build = app.add_subcommand("build", "construct the parity-check matrix");
    add_common(build, true);
    auto* simulate = app.add_subcommand("simulate", "run the Monte Carlo sweep");
    add_common(simulate, true);
    auto* analyze = app.add_subcommand("analyze", "extract thresholds from a curve");
    add_common(analyze, true);
    analyze->add_option("--curve", curve_path, "curve CSV (default: sweep output in --out)");
    analyze->add_flag("--force", force, "accept artifacts with a mismatched spec hash");

    auto* report = app.add_subcommand("report", "closed-form outage and security-gap report");
    double beta_p_db = 0.0, alpha_s_db = 0.0, beta_s_db = 0.0, explicit_eta = 0.0;
    bool have_direct = false;
    report->add_option("--config,-c", config_path, "experiment config file");
    report->add_option("--out,-o", out_dir, "output directory");
    report->add_option("--thresholds", thresholds_path, "thresholds JSON from analyze");
    auto* bp = report->add_option("--beta-p", beta_p_db, "beta_p in dB (direct input)");
    report->add_option("--alpha-s", alpha_s_db, "alpha_s in dB (direct input)");
    report->add_option("--beta-s", beta_s_db, "beta_s in dB (direct input)");
    report->add_option("--eta-max", explicit_eta,
                       "explicit Bob outage cap (default: minimum Eve outage)");
    report->add_flag("--force", force, "accept artifacts with a mismatched spec hash");

    auto* table1 = app.add_subcommand("reproduce-table1",
                                      "recompute the bundled reference scenario table");
    table1->add_option("--out,-o", out_dir, "output directory for report.json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (design->parsed()) {
            auto spec = load_spec(config_path, seed_override, workers_override);
            return bcc::run_design(spec, out_dir.empty() ? spec.output_dir : out_dir, std::cout);
        }
        if (build->parsed()) {
            auto spec = load_spec(config_path, seed_override, workers_override);
            return bcc::run_build(spec, out_dir.empty() ? spec.output_dir : out_dir, std::cout);
        }
        if (simulate->parsed()) {
            auto spec = load_spec(config_path, seed_override, workers_override);
            return bcc::run_simulate(spec, out_dir.empty() ? spec.output_dir : out_dir,
                                     std::cout, std::cerr);
        }
        if (analyze->parsed()) {
            auto spec = load_spec(config_path, seed_override, workers_override);
            const std::string dir = out_dir.empty() ? spec.output_dir : out_dir;
            std::string curve = curve_path;
            if (curve.empty())
                curve = dir + (spec.fading ? "/curve_fading.csv" : "/curve_awgn.csv");
            return bcc::run_analyze(spec, curve, dir, force, std::cout, std::cerr);
        }
        if (report->parsed()) {
            have_direct = bp->count() > 0;
            if (have_direct) {
                bcc::ReportInputs in;
                in.name = "direct";
                in.beta_p_db = beta_p_db;
                in.alpha_s_db = alpha_s_db;
                in.beta_s_db = beta_s_db;
                const auto policy = report->count("--eta-max")
                                        ? bcc::EtaPolicy::explicit_value
                                        : bcc::EtaPolicy::equal_to_omega_min;
                return bcc::run_report({in}, policy, explicit_eta, out_dir, "", std::cout);
            }
            if (config_path.empty() || thresholds_path.empty())
                throw bcc::validation_error(
                    "report needs either --beta-p/--alpha-s/--beta-s or --config + --thresholds");
            auto spec = load_spec(config_path, seed_override, workers_override);
            return bcc::run_report_from_thresholds(
                spec, thresholds_path, out_dir.empty() ? spec.output_dir : out_dir, force,
                std::cout, std::cerr);
        }
        if (table1->parsed()) return bcc::run_reproduce_table1(out_dir, std::cout);
    } catch (const bcc::infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << " (margin " << e.margin_db << " dB)\n";
        return bcc::exit_infeasible;
    } catch (const bcc::validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return bcc::exit_validation;
    } catch (const bcc::grid_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return bcc::exit_validation;
    } catch (const bcc::construction_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return bcc::exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return bcc::exit_validation;
    }
    return bcc::exit_ok;
}
