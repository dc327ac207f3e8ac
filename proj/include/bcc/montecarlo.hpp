#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bcc/code.hpp"
#include "bcc/decoder.hpp"
#include "bcc/modem.hpp"

namespace bcc {

// ============================================================================
// Monte Carlo error-rate estimation
// ============================================================================

struct CurvePoint {
    double snr_db = 0.0;
    long frames = 0;
    long frame_errors = 0;  // any of the k information bits wrong
    long pc1_errors = 0;
    long pc2_errors = 0;

    double p() const { return frames ? static_cast<double>(frame_errors) / frames : 0.0; }
    double pp() const { return frames ? static_cast<double>(pc1_errors) / frames : 0.0; }
    double ps() const { return frames ? static_cast<double>(pc2_errors) / frames : 0.0; }
    double ci_p() const { return ci(p()); }
    double ci_pp() const { return ci(pp()); }
    double ci_ps() const { return ci(ps()); }

private:
    // 95% binomial half-width, normal approximation
    double ci(double est) const;
};

struct ErrorRateCurve {
    std::vector<CurvePoint> points;
    std::uint64_t master_seed = 0;
    bool fading = false;
    SnrConvention convention = SnrConvention::per_info_bit;
    int max_iterations = 100;
    std::string spec_hash;  // optional self-description

    // CSV: metadata as '#' comments, then the fixed column header
    //   snr_db,frames,frame_err,pc1_err,pc2_err,P,Pp,Ps,ci_p,ci_pp,ci_ps
    void to_csv(std::ostream& out) const;
    static ErrorRateCurve from_csv(std::istream& in);
};

// Simulate until min_block_errors on the rarest tracked event (frame, PC1 and
// PC2 block errors all reach the floor) or max_frames, whichever first.
struct StopRule {
    long min_block_errors = 100;
    long max_frames = 10'000'000;
};

struct SweepOptions {
    StopRule stop;
    bool fading = false;
    std::uint64_t master_seed = 1;
    int max_iterations = 100;
    int workers = 0;  // 0 = hardware concurrency
};

// Frames are simulated in fixed-size batches with per-frame derived seeds and
// the stop rule evaluated at batch boundaries, so the counts are identical
// for any worker count.
ErrorRateCurve run_sweep(const UepCode& code, const ModulationPlan& plan,
                         const std::vector<double>& snr_grid_db, const SweepOptions& options);

// True if any point stopped on max_frames before reaching the error floor.
bool budget_exhausted(const ErrorRateCurve& curve, const StopRule& stop);

// Decoder-bypass sanity path: uncoded BPSK over AWGN, hard decisions from the
// demapped LLR signs. Returns {bits, bit_errors}.
std::pair<long, long> run_uncoded_bpsk(double snr_db, long bits, std::uint64_t master_seed);

// ============================================================================
// Threshold extraction
// ============================================================================

struct ThresholdSet {
    double beta_p_db = 0.0;   // P_p crosses delta
    double beta_s_db = 0.0;   // P_s crosses delta
    double alpha_s_db = 0.0;  // P_s crosses 1 - epsilon
    double delta = 0.0;
    double epsilon = 0.0;
    bool feasible = false;    // alpha_s > beta_p and beta_p <= beta_s
};

// Crossings by linear interpolation in (SNR dB, log10 BLER); throws
// grid_error when the grid does not bracket a crossing (never extrapolates).
ThresholdSet extract_thresholds(const ErrorRateCurve& curve, double delta, double epsilon);

// ============================================================================
// Fading prediction from a measured AWGN curve
// ============================================================================
//
// Integrates P(x) * (1/g) exp(-x/g) dx over x >= 0 with log-interpolated P
// between knots, P held at the first value below the grid, held at the last
// value above it (cut to zero past floor_cut_db when given). The estimate is
// bracketed by integrating the CI envelopes.

struct FadingPrediction {
    double p = 0.0, p_lo = 0.0, p_hi = 0.0;
    double pp = 0.0, pp_lo = 0.0, pp_hi = 0.0;
    double ps = 0.0, ps_lo = 0.0, ps_hi = 0.0;
    double tail_mass = 0.0;        // exponential weight beyond the grid
    bool coverage_warning = false;  // tail_mass > 1%
};

FadingPrediction predict_fading_bler(const ErrorRateCurve& awgn_curve, SnrValue mean_snr,
                                     std::optional<double> floor_cut_db = std::nullopt);

}  // namespace bcc
