#include "bcc/montecarlo.hpp"

#include "bcc/outage.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace bcc {

double CurvePoint::ci(double est) const {
    if (frames <= 0) return 0.0;
    return 1.96 * std::sqrt(est * (1.0 - est) / static_cast<double>(frames));
}

void ErrorRateCurve::to_csv(std::ostream& out) const {
    out << "# bccsim curve v1\n";
    if (!spec_hash.empty()) out << "# spec_hash=" << spec_hash << '\n';
    out << "# seed=" << master_seed << '\n';
    out << "# fading=" << (fading ? 1 : 0) << '\n';
    out << "# convention=" << (convention == SnrConvention::per_info_bit ? "info_bit" : "coded_bit")
        << '\n';
    out << "# max_iterations=" << max_iterations << '\n';
    out << "snr_db,frames,frame_err,pc1_err,pc2_err,P,Pp,Ps,ci_p,ci_pp,ci_ps\n";
    char line[320];
    for (const auto& pt : points) {
        std::snprintf(line, sizeof(line), "%.4f,%ld,%ld,%ld,%ld,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                      pt.snr_db, pt.frames, pt.frame_errors, pt.pc1_errors, pt.pc2_errors,
                      pt.p(), pt.pp(), pt.ps(), pt.ci_p(), pt.ci_pp(), pt.ci_ps());
        out << line;
    }
}

ErrorRateCurve ErrorRateCurve::from_csv(std::istream& in) {
    ErrorRateCurve curve;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = line.substr(2, eq - 2);
            const std::string value = line.substr(eq + 1);
            if (key == "spec_hash") curve.spec_hash = value;
            else if (key == "seed") curve.master_seed = std::stoull(value);
            else if (key == "fading") curve.fading = value == "1";
            else if (key == "convention")
                curve.convention = value == "coded_bit" ? SnrConvention::per_coded_bit
                                                        : SnrConvention::per_info_bit;
            else if (key == "max_iterations") curve.max_iterations = std::stoi(value);
            continue;
        }
        if (!header_seen && line.rfind("snr_db,", 0) == 0) {
            header_seen = true;
            continue;
        }
        std::istringstream ls(line);
        CurvePoint pt;
        char comma;
        if (ls >> pt.snr_db >> comma >> pt.frames >> comma >> pt.frame_errors >> comma >>
            pt.pc1_errors >> comma >> pt.pc2_errors)
            curve.points.push_back(pt);
    }
    if (curve.points.empty()) throw validation_error("curve csv: no data points");
    return curve;
}

namespace {

struct FrameCounts {
    long frames = 0;
    long frame_errors = 0;
    long pc1_errors = 0;
    long pc2_errors = 0;

    void operator+=(const FrameCounts& other) {
        frames += other.frames;
        frame_errors += other.frame_errors;
        pc1_errors += other.pc1_errors;
        pc2_errors += other.pc2_errors;
    }
};

// One complete frame: random message, encode, modulate, channel, demap,
// decode, compare information bits.
FrameCounts simulate_frame(const UepCode& code, const ModulationPlan& plan, double n0,
                           bool fading, SpaDecoder& decoder, int max_iterations,
                           std::uint64_t point_seed, long frame_index) {
    const auto& profile = code.profile();

    FrameRng msg_rng(point_seed, frame_index, stream::message);
    std::vector<std::uint8_t> public_bits(profile.k1), secret_bits(profile.k2);
    for (auto& b : public_bits) b = msg_rng.bit();
    for (auto& b : secret_bits) b = msg_rng.bit();

    const auto codeword = encode(code, public_bits, secret_bits);
    const auto symbols = map_frame(codeword, code, plan);

    ChannelRealization real;
    real.n0 = n0;
    if (fading) {
        FrameRng fade_rng(point_seed, frame_index, stream::fading);
        real.h = sample_fading(fade_rng);
    }
    FrameRng noise_rng(point_seed, frame_index, stream::noise);
    const auto received = transmit(symbols, real, noise_rng);
    const auto llrs = demap_soft(received, real.h, n0, plan, code);
    const auto result = decoder.decode(llrs, max_iterations);

    bool pc1_err = false, pc2_err = false;
    for (int c : code.pc1_cols())
        if (result.hard_bits[c] != codeword[c]) {
            pc1_err = true;
            break;
        }
    for (int c : code.pc2_cols())
        if (result.hard_bits[c] != codeword[c]) {
            pc2_err = true;
            break;
        }

    FrameCounts counts;
    counts.frames = 1;
    counts.pc1_errors = pc1_err ? 1 : 0;
    counts.pc2_errors = pc2_err ? 1 : 0;
    counts.frame_errors = (pc1_err || pc2_err) ? 1 : 0;
    return counts;
}

constexpr long batch_size = 256;

}  // namespace

ErrorRateCurve run_sweep(const UepCode& code, const ModulationPlan& plan,
                         const std::vector<double>& snr_grid_db, const SweepOptions& options) {
    ErrorRateCurve curve;
    curve.master_seed = options.master_seed;
    curve.fading = options.fading;
    curve.convention = plan.convention;
    curve.max_iterations = options.max_iterations;

    int workers = options.workers;
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;

    for (std::size_t pi = 0; pi < snr_grid_db.size(); ++pi) {
        const double snr_db = snr_grid_db[pi];
        const double n0 = n0_from_snr(SnrValue::from_db(snr_db), plan, code.profile());
        const std::uint64_t point_seed = mix64(options.master_seed ^ mix64(0x5eedULL + pi));

        FrameCounts total;
        while (true) {
            const long remaining = options.stop.max_frames - total.frames;
            if (remaining <= 0) break;
            const long batch = std::min(batch_size, remaining);

            const long base_frame = total.frames;
            if (workers == 1 || batch < 8) {
                SpaDecoder decoder(code);
                for (long f = 0; f < batch; ++f)
                    total += simulate_frame(code, plan, n0, options.fading, decoder,
                                            options.max_iterations, point_seed, base_frame + f);
            } else {
                std::vector<FrameCounts> partial(workers);
                std::vector<std::thread> pool;
                for (int w = 0; w < workers; ++w) {
                    pool.emplace_back([&, w]() {
                        SpaDecoder decoder(code);
                        FrameCounts local;
                        for (long f = w; f < batch; f += workers)
                            local += simulate_frame(code, plan, n0, options.fading, decoder,
                                                    options.max_iterations, point_seed,
                                                    base_frame + f);
                        partial[w] = local;
                    });
                }
                for (auto& t : pool) t.join();
                for (const auto& p : partial) total += p;
            }

            const long rarest = std::min({total.frame_errors, total.pc1_errors,
                                          total.pc2_errors});
            if (rarest >= options.stop.min_block_errors) break;
        }

        CurvePoint pt;
        pt.snr_db = snr_db;
        pt.frames = total.frames;
        pt.frame_errors = total.frame_errors;
        pt.pc1_errors = total.pc1_errors;
        pt.pc2_errors = total.pc2_errors;
        curve.points.push_back(pt);
    }
    return curve;
}

bool budget_exhausted(const ErrorRateCurve& curve, const StopRule& stop) {
    for (const auto& pt : curve.points) {
        const long rarest = std::min({pt.frame_errors, pt.pc1_errors, pt.pc2_errors});
        if (rarest < stop.min_block_errors && pt.frames >= stop.max_frames) return true;
    }
    return false;
}

std::pair<long, long> run_uncoded_bpsk(double snr_db, long bits, std::uint64_t master_seed) {
    const auto bpsk = build_constellation(2, LabelingKind::gray);
    const double n0 = 1.0 / SnrValue::from_db(snr_db).linear();  // Eb = one symbol per bit
    long errors = 0;
    FrameRng msg_rng(master_seed, 0, stream::message);
    FrameRng noise_rng(master_seed, 0, stream::noise);
    const double sigma = std::sqrt(n0 * 0.5);
    for (long i = 0; i < bits; ++i) {
        const std::uint8_t bit = msg_rng.bit();
        const cplx sym = bpsk.point_for_label(bit);
        const cplx y(sym.real() + sigma * noise_rng.gaussian(),
                     sym.imag() + sigma * noise_rng.gaussian());
        const double llr = 4.0 * y.real() / n0;
        const std::uint8_t decided = llr < 0.0 ? 1 : 0;
        if (decided != bit) ++errors;
    }
    return {bits, errors};
}

namespace {

struct Series {
    std::vector<double> snr_db;
    std::vector<double> value;
};

// First downward crossing of `target`, interpolated in (dB, log10 value).
// Zero estimates cannot be bracketed in the log domain and are skipped.
double crossing_db(const Series& s, double target, const char* what) {
    const double lt = std::log10(target);
    int prev = -1;
    for (std::size_t i = 0; i < s.value.size(); ++i) {
        if (s.value[i] <= 0.0) continue;
        if (prev >= 0) {
            const double a = std::log10(s.value[prev]);
            const double b = std::log10(s.value[i]);
            if (a >= lt && lt >= b) {
                if (a == b) return s.snr_db[prev];
                const double t = (lt - a) / (b - a);
                return s.snr_db[prev] + t * (s.snr_db[i] - s.snr_db[prev]);
            }
        }
        prev = static_cast<int>(i);
    }
    throw grid_error(std::string("extract_thresholds: grid does not bracket the ") + what +
                     " crossing; extend the SNR grid");
}

}  // namespace

ThresholdSet extract_thresholds(const ErrorRateCurve& curve, double delta, double epsilon) {
    SecrecyTargets targets(delta, epsilon);  // validates the pair

    Series pp, ps;
    for (const auto& pt : curve.points) {
        pp.snr_db.push_back(pt.snr_db);
        pp.value.push_back(pt.pp());
        ps.snr_db.push_back(pt.snr_db);
        ps.value.push_back(pt.ps());
    }

    ThresholdSet t;
    t.delta = delta;
    t.epsilon = epsilon;
    t.beta_p_db = crossing_db(pp, delta, "P_p = delta");
    t.beta_s_db = crossing_db(ps, delta, "P_s = delta");
    t.alpha_s_db = crossing_db(ps, 1.0 - epsilon, "P_s = 1-epsilon");
    t.feasible = t.alpha_s_db > t.beta_p_db && t.beta_p_db <= t.beta_s_db;
    return t;
}

namespace {

// One estimate series with its exponential-weighted integral.
double integrate_series(const std::vector<double>& snr_linear, const std::vector<double>& est,
                        double mean, double cut_linear) {
    const std::size_t n = snr_linear.size();
    double acc = 0.0;

    // below the grid: P held at the first estimate
    const double x0 = std::min(snr_linear.front(), cut_linear);
    acc += est.front() * (1.0 - std::exp(-x0 / mean));

    auto weight = [&](double a, double b) { return std::exp(-a / mean) - std::exp(-b / mean); };

    for (std::size_t i = 0; i + 1 < n; ++i) {
        double a = snr_linear[i], b = snr_linear[i + 1];
        if (a >= cut_linear) break;
        b = std::min(b, cut_linear);
        const double pa = est[i], pb = est[i + 1];
        if (pa <= 0.0) continue;  // support already over
        if (pb <= 0.0) {
            // right endpoint unmeasurably small: hold the left value to the
            // knot, zero afterwards
            acc += pa * weight(a, b);
            continue;
        }
        // log10(P) linear in dB between the knots; Simpson in linear x
        const double la = std::log10(pa), lb = std::log10(pb);
        const double da = 10.0 * std::log10(a), db = 10.0 * std::log10(b);
        auto f = [&](double x) {
            const double xdb = 10.0 * std::log10(x);
            const double t = (xdb - da) / (db - da);
            const double p = std::pow(10.0, la + t * (lb - la));
            return p * std::exp(-x / mean) / mean;
        };
        constexpr int steps = 64;
        const double hstep = (b - a) / steps;
        double simpson = f(a) + f(b);
        for (int s = 1; s < steps; ++s) simpson += f(a + s * hstep) * (s % 2 ? 4.0 : 2.0);
        acc += simpson * hstep / 3.0;
    }

    // above the grid: P held at the last estimate until the cut
    if (snr_linear.back() < cut_linear)
        acc += est.back() * weight(snr_linear.back(), cut_linear);
    return acc;
}

}  // namespace

FadingPrediction predict_fading_bler(const ErrorRateCurve& awgn_curve, SnrValue mean_snr,
                                     std::optional<double> floor_cut_db) {
    if (awgn_curve.points.empty())
        throw validation_error("predict_fading_bler: empty curve");
    std::vector<double> x;
    for (const auto& pt : awgn_curve.points) x.push_back(SnrValue::from_db(pt.snr_db).linear());
    if (!std::is_sorted(x.begin(), x.end()))
        throw validation_error("predict_fading_bler: curve must be sorted by SNR");

    const double mean = mean_snr.linear();
    const double cut = floor_cut_db ? SnrValue::from_db(*floor_cut_db).linear()
                                    : std::numeric_limits<double>::infinity();

    auto series = [&](auto getter, double side) {
        std::vector<double> est;
        for (const auto& pt : awgn_curve.points) {
            double v = getter(pt) + side;
            est.push_back(std::clamp(v, 0.0, 1.0));
        }
        return integrate_series(x, est, mean, cut);
    };

    FadingPrediction out;
    auto p_of = [](const CurvePoint& pt) { return pt.p(); };
    auto pp_of = [](const CurvePoint& pt) { return pt.pp(); };
    auto ps_of = [](const CurvePoint& pt) { return pt.ps(); };
    out.p = series(p_of, 0.0);
    out.pp = series(pp_of, 0.0);
    out.ps = series(ps_of, 0.0);

    // CI envelopes (per-point shift by the binomial half-width)
    auto env = [&](auto getter, auto ci_getter, double sign) {
        std::vector<double> est;
        for (const auto& pt : awgn_curve.points)
            est.push_back(std::clamp(getter(pt) + sign * ci_getter(pt), 0.0, 1.0));
        return integrate_series(x, est, mean, cut);
    };
    out.p_lo = env(p_of, [](const CurvePoint& pt) { return pt.ci_p(); }, -1.0);
    out.p_hi = env(p_of, [](const CurvePoint& pt) { return pt.ci_p(); }, +1.0);
    out.pp_lo = env(pp_of, [](const CurvePoint& pt) { return pt.ci_pp(); }, -1.0);
    out.pp_hi = env(pp_of, [](const CurvePoint& pt) { return pt.ci_pp(); }, +1.0);
    out.ps_lo = env(ps_of, [](const CurvePoint& pt) { return pt.ci_ps(); }, -1.0);
    out.ps_hi = env(ps_of, [](const CurvePoint& pt) { return pt.ci_ps(); }, +1.0);

    out.tail_mass = std::exp(-x.back() / mean);
    out.coverage_warning = out.tail_mass > 0.01;
    return out;
}

}  // namespace bcc
