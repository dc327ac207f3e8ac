#include "bcc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "bcc/alist.hpp"

namespace fs = std::filesystem;

namespace bcc {

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::map<int, double> paper_4096_nu() {
    return {{2, 0.4946}, {3, 0.4054}, {16, 0.0835}, {17, 0.0151},
            {18, 0.0007}, {19, 0.0002}, {20, 0.0005}};
}

double parse_rate(const std::string& v) {
    const auto slash = v.find('/');
    if (slash != std::string::npos) {
        const double num = std::stod(v.substr(0, slash));
        const double den = std::stod(v.substr(slash + 1));
        if (den == 0.0) throw validation_error("config: rate denominator is zero");
        return num / den;
    }
    return std::stod(v);
}

std::vector<double> parse_grid(const std::string& v) {
    std::vector<double> grid;
    if (v.find(':') != std::string::npos) {
        double start, step, stop;
        char c1, c2;
        std::istringstream ss(v);
        if (!(ss >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' || step <= 0)
            throw validation_error("config: bad SNR grid '" + v + "' (want start:step:stop)");
        for (double x = start; x <= stop + 1e-9; x += step) grid.push_back(x);
    } else {
        std::string item;
        std::istringstream ss(v);
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) grid.push_back(std::stod(item));
        }
    }
    if (grid.empty()) throw validation_error("config: empty SNR grid");
    return grid;
}

std::map<int, double> parse_distribution(const std::string& v) {
    std::map<int, double> coeffs;
    std::string item;
    std::istringstream ss(v);
    while (ss >> item) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw validation_error("config: degree entries are degree:fraction, got '" + item +
                                   "'");
        coeffs[std::stoi(item.substr(0, colon))] += std::stod(item.substr(colon + 1));
    }
    if (coeffs.empty()) throw validation_error("config: empty degree distribution");
    return coeffs;
}

std::size_t parse_modulation(const std::string& v) {
    if (v == "bpsk") return 2;
    if (v.rfind("qam", 0) == 0) return static_cast<std::size_t>(std::stoul(v.substr(3)));
    throw validation_error("config: unknown modulation '" + v + "' (bpsk or qam<M>)");
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw validation_error("config: bad boolean '" + v + "'");
}

// Which design fields the config set explicitly; presets fill the rest.
struct ExplicitFields {
    bool n = false, rate = false, threshold = false, nu = false;
};

void apply_preset(ExperimentSpec& spec, const ExplicitFields& given) {
    if (spec.preset.empty()) return;
    if (spec.preset == "paper_4096") {
        if (!given.n) spec.n = 4096;
        if (!given.rate) spec.rate = 0.5;
        if (!given.threshold) spec.degree_threshold = 16;
        if (!given.nu)
            spec.nu = DegreeDistribution(Perspective::node, Side::variable, paper_4096_nu());
    } else if (spec.preset == "regular_3_6") {
        if (!given.rate) spec.rate = 0.5;
        if (!given.threshold) spec.degree_threshold = 3;
        if (!given.nu)
            spec.nu = DegreeDistribution(Perspective::node, Side::variable, {{3, 1.0}});
    } else {
        throw validation_error("config: unknown preset '" + spec.preset + "'");
    }
}

}  // namespace

const DegreeDistribution& ExperimentSpec::distribution() const {
    if (!nu) throw validation_error("experiment: no degree distribution configured");
    return *nu;
}

ModulationPlan ExperimentSpec::plan() const {
    return make_plan(pc2_order, labeling, parity_mod, convention);
}

std::string ExperimentSpec::canonical_text() const {
    std::ostringstream out;
    out.precision(17);
    out << "design.n=" << n << "\ndesign.rate=" << rate
        << "\ndesign.degree_threshold=" << degree_threshold << "\ndesign.seed=" << seed
        << "\ndesign.separation_effort=" << separation_effort << "\ndesign.nu=";
    if (nu)
        for (const auto& [d, f] : nu->coeffs()) out << d << ':' << f << ' ';
    out << "\nmodulation.pc2_order=" << pc2_order
        << "\nmodulation.labeling=" << (labeling == LabelingKind::gray ? "gray" : "yarg")
        << "\nmodulation.pc3=" << (parity_mod == ParityModulation::bpsk ? "bpsk" : "pc2")
        << "\nmodulation.convention="
        << (convention == SnrConvention::per_info_bit ? "info_bit" : "coded_bit")
        << "\nsimulation.snr_db=";
    for (double x : snr_grid_db) out << x << ' ';
    out << "\nsimulation.fading=" << fading
        << "\nsimulation.min_block_errors=" << stop.min_block_errors
        << "\nsimulation.max_frames=" << stop.max_frames
        << "\nsimulation.max_iterations=" << max_iterations << "\nanalysis.delta=" << delta
        << "\nanalysis.epsilon=" << epsilon << "\noutage.eta_policy="
        << (eta_policy == EtaPolicy::equal_to_omega_min ? "omega_min" : "explicit")
        << "\noutage.eta_max=" << eta_max << '\n';
    return out.str();
}

std::string ExperimentSpec::hash() const { return hex64(fnv1a64(canonical_text())); }

void ExperimentSpec::validate() const {
    if (n <= 0) throw validation_error("experiment: n must be positive");
    if (!(rate > 0.0 && rate < 1.0))
        throw validation_error("experiment: rate must be in (0,1)");
    const double k_real = static_cast<double>(n) * rate;
    if (std::abs(k_real - std::round(k_real)) > 1e-9)
        throw validation_error("experiment: n * rate must be an integer");
    distribution();  // present?
    build_constellation(pc2_order, labeling);  // supported order?
    if (max_iterations < 1) throw validation_error("experiment: max_iterations must be >= 1");
    if (stop.min_block_errors < 1 || stop.max_frames < 1)
        throw validation_error("experiment: stop rule must be positive");
    if (!(delta > 0.0 && epsilon > 0.0 && delta < 1.0 - epsilon))
        throw validation_error("experiment: need 0 < delta < 1-epsilon");
    if (eta_policy == EtaPolicy::explicit_value && !(eta_max > 0.0 && eta_max < 1.0))
        throw validation_error("experiment: explicit eta_max must be in (0,1)");
}

ExperimentSpec parse_experiment_text(const std::string& text) {
    ExperimentSpec spec;
    std::istringstream in(text);
    std::string line, section;
    std::string nu_inline, nu_file;
    bool have_grid = false;
    ExplicitFields given;
    while (std::getline(in, line)) {
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.erase(hash_pos);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.front() == '[') {
            if (line.back() != ']') throw validation_error("config: bad section '" + line + "'");
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw validation_error("config: expected key = value, got '" + line + "'");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            s = (a == std::string::npos) ? "" : s.substr(a, b - a + 1);
        };
        trim(key);
        trim(value);
        if (value.empty()) throw validation_error("config: empty value for '" + key + "'");

        const std::string full = section.empty() ? key : section + "." + key;
        if (full == "design.preset") spec.preset = value;
        else if (full == "design.n") {
            spec.n = std::stol(value);
            given.n = true;
        } else if (full == "design.rate") {
            spec.rate = parse_rate(value);
            given.rate = true;
        } else if (full == "design.degree_threshold") {
            spec.degree_threshold = std::stoi(value);
            given.threshold = true;
        } else if (full == "design.nu") nu_inline = value;
        else if (full == "design.nu_file") nu_file = value;
        else if (full == "design.seed") spec.seed = std::stoull(value);
        else if (full == "design.separation_effort") spec.separation_effort = std::stoi(value);
        else if (full == "modulation.pc2") spec.pc2_order = parse_modulation(value);
        else if (full == "modulation.labeling") {
            if (value == "gray") spec.labeling = LabelingKind::gray;
            else if (value == "yarg") spec.labeling = LabelingKind::yarg;
            else throw validation_error("config: labeling must be gray or yarg");
        } else if (full == "modulation.pc3") {
            if (value == "bpsk") spec.parity_mod = ParityModulation::bpsk;
            else if (value == "pc2") spec.parity_mod = ParityModulation::same_as_pc2;
            else throw validation_error("config: pc3 must be bpsk or pc2");
        } else if (full == "modulation.snr_convention") {
            if (value == "info_bit") spec.convention = SnrConvention::per_info_bit;
            else if (value == "coded_bit") spec.convention = SnrConvention::per_coded_bit;
            else throw validation_error("config: snr_convention must be info_bit or coded_bit");
        } else if (full == "simulation.snr_db") {
            spec.snr_grid_db = parse_grid(value);
            have_grid = true;
        } else if (full == "simulation.fading") spec.fading = parse_bool(value);
        else if (full == "simulation.min_block_errors") spec.stop.min_block_errors = std::stol(value);
        else if (full == "simulation.max_frames") spec.stop.max_frames = std::stol(value);
        else if (full == "simulation.max_iterations") spec.max_iterations = std::stoi(value);
        else if (full == "simulation.workers") spec.workers = std::stoi(value);
        else if (full == "analysis.delta") spec.delta = std::stod(value);
        else if (full == "analysis.epsilon") spec.epsilon = std::stod(value);
        else if (full == "outage.eta_policy") {
            if (value == "omega_min") spec.eta_policy = EtaPolicy::equal_to_omega_min;
            else if (value == "explicit") spec.eta_policy = EtaPolicy::explicit_value;
            else throw validation_error("config: eta_policy must be omega_min or explicit");
        } else if (full == "outage.eta_max") spec.eta_max = std::stod(value);
        else if (full == "output.dir") spec.output_dir = value;
        else throw validation_error("config: unknown key '" + full + "'");
    }

    given.nu = !nu_file.empty() || !nu_inline.empty();
    apply_preset(spec, given);
    if (!nu_file.empty()) {
        std::ifstream f(nu_file);
        if (!f) throw validation_error("config: cannot read nu_file " + nu_file);
        spec.nu = DegreeDistribution::from_text(f, Perspective::node, Side::variable);
    }
    if (!nu_inline.empty())
        spec.nu = DegreeDistribution(Perspective::node, Side::variable,
                                     parse_distribution(nu_inline));
    if (!have_grid) spec.snr_grid_db = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    spec.validate();
    return spec;
}

ExperimentSpec parse_experiment_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw validation_error("cannot read config " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_experiment_text(buf.str());
}

// ============================================================================
// Subcommand runners
// ============================================================================

namespace {

void write_text_file(const fs::path& path, const std::string& contents) {
    std::ofstream f(path);
    if (!f) throw validation_error("cannot write " + path.string());
    f << contents;
}

void write_distribution(const fs::path& path, const DegreeDistribution& dist,
                        const ExperimentSpec& spec) {
    std::ostringstream out;
    out << "# bccsim degree distribution v1\n# spec_hash=" << spec.hash()
        << "\n# seed=" << spec.seed << "\n# version=" << toolkit_version << '\n';
    dist.to_text(out);
    write_text_file(path, out.str());
}

nlohmann::json profile_json(const ProtectionProfile& p) {
    return {{"n", p.n},   {"k", p.k}, {"k1", p.k1}, {"k2", p.k2},
            {"r", p.r},   {"rate", p.rate}, {"degree_threshold", p.degree_threshold}};
}

}  // namespace

int run_design(const ExperimentSpec& spec, const std::string& out_dir, std::ostream& log) {
    fs::create_directories(out_dir);
    const auto& nu = spec.distribution();
    const auto lambda = node_to_edge(nu);
    const auto check = concentrated_check(nu, spec.rate);
    const auto profile = protection_classes(nu, spec.n, spec.rate, spec.degree_threshold);

    write_distribution(fs::path(out_dir) / "var_node.txt", nu, spec);
    write_distribution(fs::path(out_dir) / "var_edge.txt", lambda, spec);
    write_distribution(fs::path(out_dir) / "check_node.txt", check, spec);

    nlohmann::json j = profile_json(profile);
    j["spec_hash"] = spec.hash();
    j["seed"] = spec.seed;
    j["version"] = toolkit_version;
    write_text_file(fs::path(out_dir) / "profile.json", j.dump(2) + "\n");

    log << "design: n=" << profile.n << " k=" << profile.k << " k1=" << profile.k1
        << " k2=" << profile.k2 << " r=" << profile.r << '\n';
    log << "design: mean check degree " << nu.mean_degree() / (1.0 - spec.rate) << '\n';
    return exit_ok;
}

int run_build(const ExperimentSpec& spec, const std::string& out_dir, std::ostream& log) {
    fs::create_directories(out_dir);
    const auto& nu = spec.distribution();
    const auto check = concentrated_check(nu, spec.rate);
    const auto profile = protection_classes(nu, spec.n, spec.rate, spec.degree_threshold);
    const auto code = build_uep_code(nu, check, profile, spec.seed, spec.separation_effort);

    save_uep_code(code, (fs::path(out_dir) / "code.alist").string(),
                  (fs::path(out_dir) / "code.json").string(), spec.hash());
    log << "build: " << code.rows() << " x " << code.n() << ", " << code.edges() << " edges, "
        << code.stats().residual_4cycles << " residual 4-cycles, separation "
        << code.stats().separation_score << "/" << code.rows() << '\n';
    return exit_ok;
}

int run_simulate(const ExperimentSpec& spec, const std::string& out_dir, std::ostream& log,
                 std::ostream& warn) {
    fs::create_directories(out_dir);
    const auto code = load_uep_code_files((fs::path(out_dir) / "code.alist").string(),
                                          (fs::path(out_dir) / "code.json").string());
    const auto plan = spec.plan();

    SweepOptions opt;
    opt.stop = spec.stop;
    opt.fading = spec.fading;
    opt.master_seed = spec.seed;
    opt.max_iterations = spec.max_iterations;
    opt.workers = spec.workers;

    auto curve = run_sweep(code, plan, spec.snr_grid_db, opt);
    curve.spec_hash = spec.hash();

    const std::string stem = spec.fading ? "curve_fading" : "curve_awgn";
    {
        std::ofstream f(fs::path(out_dir) / (stem + ".csv"));
        curve.to_csv(f);
    }
    // gnuplot-ready two-column files per class
    auto write_dat = [&](const std::string& name, auto getter) {
        std::ofstream f(fs::path(out_dir) / (stem + "_" + name + ".dat"));
        f << "# spec_hash=" << spec.hash() << "\n# version=" << toolkit_version << '\n';
        for (const auto& pt : curve.points) f << pt.snr_db << ' ' << getter(pt) << '\n';
    };
    write_dat("p", [](const CurvePoint& pt) { return pt.p(); });
    write_dat("pp", [](const CurvePoint& pt) { return pt.pp(); });
    write_dat("ps", [](const CurvePoint& pt) { return pt.ps(); });

    for (const auto& pt : curve.points)
        log << "simulate: " << pt.snr_db << " dB  frames=" << pt.frames << " P=" << pt.p()
            << " Pp=" << pt.pp() << " Ps=" << pt.ps() << '\n';

    if (budget_exhausted(curve, spec.stop)) {
        warn << "warning: frame budget exhausted before reaching " << spec.stop.min_block_errors
             << " block errors on every tracked event; confidence intervals are wide\n";
        return exit_budget;
    }
    return exit_ok;
}

int run_analyze(const ExperimentSpec& spec, const std::string& curve_path,
                const std::string& out_dir, bool force, std::ostream& log, std::ostream& warn) {
    std::ifstream f(curve_path);
    if (!f) throw validation_error("cannot read curve " + curve_path);
    const auto curve = ErrorRateCurve::from_csv(f);
    if (!curve.spec_hash.empty() && curve.spec_hash != spec.hash()) {
        if (!force)
            throw validation_error("curve " + curve_path + " was produced by spec " +
                                   curve.spec_hash + ", not " + spec.hash() +
                                   " (use --force to override)");
        warn << "warning: spec hash mismatch overridden\n";
    }

    const auto t = extract_thresholds(curve, spec.delta, spec.epsilon);
    fs::create_directories(out_dir);
    nlohmann::json j = {{"beta_p_db", t.beta_p_db}, {"beta_s_db", t.beta_s_db},
                        {"alpha_s_db", t.alpha_s_db}, {"delta", t.delta},
                        {"epsilon", t.epsilon},       {"feasible", t.feasible},
                        {"spec_hash", spec.hash()},   {"seed", spec.seed},
                        {"version", toolkit_version}};
    write_text_file(fs::path(out_dir) / "thresholds.json", j.dump(2) + "\n");
    log << "analyze: beta_p=" << t.beta_p_db << " dB, beta_s=" << t.beta_s_db
        << " dB, alpha_s=" << t.alpha_s_db << " dB, feasible=" << (t.feasible ? "yes" : "no")
        << '\n';
    return t.feasible ? exit_ok : exit_infeasible;
}

namespace {

double round2(double x) { return std::round(x * 100.0) / 100.0; }

nlohmann::json report_json(const std::string& name, const OutageReport& rep) {
    return {{"scheme", name},
            {"beta_p_db", rep.beta_p_db},
            {"alpha_s_db", rep.alpha_s_db},
            {"beta_s_db", rep.beta_s_db},
            {"omega_r", rep.omega_r},
            {"omega_s", rep.omega_s},
            {"omega_min", rep.omega_min},
            {"eta_max", rep.eta_max},
            {"eve_opt_db", rep.eve_opt_db},
            {"bob_min_db", rep.bob_min_db},
            {"security_gap_db", rep.security_gap}};
}

}  // namespace

void print_report_table(const std::vector<std::pair<std::string, OutageReport>>& rows,
                        std::ostream& out) {
    out << "scheme      alpha_s  omega_min(eta_max)  eve_opt   beta_s  bob_min      S_g\n";
    char line[160];
    for (const auto& [name, rep] : rows) {
        std::snprintf(line, sizeof(line), "%-10s %8.2f %19.2f %8.2f %8.2f %8.2f %8.2f\n",
                      name.c_str(), round2(rep.alpha_s_db), rep.eta_max, round2(rep.eve_opt_db),
                      round2(rep.beta_s_db), round2(rep.bob_min_db), round2(rep.security_gap));
        out << line;
    }
}

int run_report(const std::vector<ReportInputs>& rows, EtaPolicy policy, double explicit_eta,
               const std::string& out_dir, const std::string& spec_hash, std::ostream& log) {
    std::vector<std::pair<std::string, OutageReport>> reports;
    for (const auto& in : rows) {
        reports.emplace_back(in.name,
                             full_report(SnrValue::from_db(in.beta_p_db),
                                         SnrValue::from_db(in.alpha_s_db),
                                         SnrValue::from_db(in.beta_s_db), policy, explicit_eta));
    }
    print_report_table(reports, log);

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        nlohmann::json j;
        j["version"] = toolkit_version;
        if (!spec_hash.empty()) j["spec_hash"] = spec_hash;
        j["rows"] = nlohmann::json::array();
        for (const auto& [name, rep] : reports) j["rows"].push_back(report_json(name, rep));
        write_text_file(fs::path(out_dir) / "report.json", j.dump(2) + "\n");
    }
    return exit_ok;
}

int run_report_from_thresholds(const ExperimentSpec& spec, const std::string& thresholds_path,
                               const std::string& out_dir, bool force, std::ostream& log,
                               std::ostream& warn) {
    std::ifstream f(thresholds_path);
    if (!f) throw validation_error("cannot read thresholds " + thresholds_path);
    nlohmann::json j;
    f >> j;
    const std::string embedded = j.value("spec_hash", "");
    if (!embedded.empty() && embedded != spec.hash()) {
        if (!force)
            throw validation_error("thresholds " + thresholds_path + " were produced by spec " +
                                   embedded + ", not " + spec.hash() +
                                   " (use --force to override)");
        warn << "warning: spec hash mismatch overridden\n";
    }
    ReportInputs in;
    in.name = "experiment";
    in.beta_p_db = j.at("beta_p_db").get<double>();
    in.alpha_s_db = j.at("alpha_s_db").get<double>();
    in.beta_s_db = j.at("beta_s_db").get<double>();
    return run_report({in}, spec.eta_policy, spec.eta_max, out_dir, spec.hash(), log);
}

std::vector<ReportInputs> reference_scenarios() {
    return {{"BPSK", 0.75, 2.95, 5.35},
            {"64-QAM", 0.75, 12.25, 14.12},
            {"128-QAM", 0.75, 15.78, 17.67},
            {"512-QAM", 0.75, 20.64, 22.94},
            {"2048-QAM", 0.75, 25.27, 28.49}};
}

int run_reproduce_table1(const std::string& out_dir, std::ostream& log) {
    return run_report(reference_scenarios(), EtaPolicy::equal_to_omega_min, 0.0, out_dir, "",
                      log);
}

}  // namespace bcc
