#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bcc/degree.hpp"
#include "bcc/modem.hpp"
#include "bcc/montecarlo.hpp"
#include "bcc/outage.hpp"

namespace bcc {

inline constexpr const char* toolkit_version = "0.1.0";

// CLI exit codes (External Interfaces contract).
inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_infeasible = 3;
inline constexpr int exit_budget = 4;  // budget exhausted, artifacts written, warning emitted

// ============================================================================
// Declarative experiment description
// ============================================================================
//
// Parsed from a sectioned key-value text file ([design], [modulation],
// [simulation], [analysis], [outage], [output]). Fully resolved and
// serializable; the canonical serialization is hashed so every artifact can
// self-describe its provenance.
struct ExperimentSpec {
    // design
    std::string preset;  // "", "paper_4096", "regular_3_6"
    long n = 4096;
    double rate = 0.5;
    int degree_threshold = 16;
    std::optional<DegreeDistribution> nu;  // node-perspective variable distribution
    std::uint64_t seed = 1;
    int separation_effort = 8;

    // modulation
    std::size_t pc2_order = 2;
    LabelingKind labeling = LabelingKind::yarg;
    ParityModulation parity_mod = ParityModulation::bpsk;
    SnrConvention convention = SnrConvention::per_info_bit;

    // simulation
    std::vector<double> snr_grid_db;
    bool fading = false;
    StopRule stop;
    int max_iterations = 100;
    int workers = 0;

    // analysis
    double delta = 1e-4;
    double epsilon = 0.1;

    // outage
    EtaPolicy eta_policy = EtaPolicy::equal_to_omega_min;
    double eta_max = 0.1;

    // output
    std::string output_dir = "results";

    const DegreeDistribution& distribution() const;
    ModulationPlan plan() const;
    std::string canonical_text() const;
    std::string hash() const;  // 16 hex digits over the canonical text
    void validate() const;     // throws validation_error
};

ExperimentSpec parse_experiment_text(const std::string& text);
ExperimentSpec parse_experiment_file(const std::string& path);

std::uint64_t fnv1a64(const std::string& text);

// ============================================================================
// Subcommand runners (return CLI exit codes)
// ============================================================================

int run_design(const ExperimentSpec& spec, const std::string& out_dir, std::ostream& log);
int run_build(const ExperimentSpec& spec, const std::string& out_dir, std::ostream& log);
int run_simulate(const ExperimentSpec& spec, const std::string& out_dir, std::ostream& log,
                 std::ostream& warn);
int run_analyze(const ExperimentSpec& spec, const std::string& curve_path,
                const std::string& out_dir, bool force, std::ostream& log, std::ostream& warn);

// Threshold inputs for a report row, in dB.
struct ReportInputs {
    std::string name = "scheme";
    double beta_p_db = 0.0;
    double alpha_s_db = 0.0;
    double beta_s_db = 0.0;
};

int run_report(const std::vector<ReportInputs>& rows, EtaPolicy policy, double explicit_eta,
               const std::string& out_dir, const std::string& spec_hash, std::ostream& log);
int run_report_from_thresholds(const ExperimentSpec& spec, const std::string& thresholds_path,
                               const std::string& out_dir, bool force, std::ostream& log,
                               std::ostream& warn);

// The five bundled reference scenarios (BPSK and the 64/128/512/2048-QAM
// secret-bit modulations at beta_p = 0.75 dB).
std::vector<ReportInputs> reference_scenarios();
int run_reproduce_table1(const std::string& out_dir, std::ostream& log);

void print_report_table(const std::vector<std::pair<std::string, OutageReport>>& rows,
                        std::ostream& out);

}  // namespace bcc
