#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "bcc/channel.hpp"
#include "bcc/code.hpp"
#include "bcc/errors.hpp"

namespace bcc {

enum class ConstellationKind { bpsk, square_qam, cross_qam };
enum class LabelingKind { gray, yarg };

// ============================================================================
// Constellations
// ============================================================================
//
// Unit average symbol energy. labels[i] is the log2(M)-bit label of points[i]
// and is a bijection onto {0,1}^bits. Gray uses the binary-reflected code per
// axis (adjacent points differ in exactly one bit); Yarg uses an anti-Gray
// axis sequence built by alternating each Gray word with its complement, so
// adjacent points differ in the maximum possible number of per-axis bits.
struct Constellation {
    std::size_t order = 0;  // M
    ConstellationKind kind = ConstellationKind::bpsk;
    unsigned bits = 0;  // log2(M)
    std::vector<cplx> points;
    std::vector<std::uint32_t> labels;
    std::vector<std::uint32_t> index_by_label;

    cplx point_for_label(std::uint32_t label) const { return points[index_by_label[label]]; }

    // CSV dump for inspection/plotting: index,label,re,im
    void dump_csv(std::ostream& out) const;
};

// M = 2 (BPSK), M = 2^(2m) square QAM, or M = 2^(2m+1) cross QAM with m >= 2
// (32 ... 4096 supported). Anything else is rejected.
Constellation build_constellation(std::size_t order, LabelingKind labeling);

// Per-axis label sequences (exposed for tests).
std::uint32_t gray_axis_label(std::uint32_t position);
std::uint32_t yarg_axis_label(std::uint32_t position, unsigned bits);

// ============================================================================
// Per-class modulation plan and framing
// ============================================================================

enum class ParityModulation { bpsk, same_as_pc2 };
enum class SnrConvention { per_info_bit, per_coded_bit };

// PC1 is always BPSK. PC2 carries the configured constellation; PC3
// (redundancy) defaults to BPSK and can instead ride the PC2 constellation.
struct ModulationPlan {
    Constellation pc1;
    Constellation pc2;
    Constellation pc3;
    SnrConvention convention = SnrConvention::per_info_bit;
    double max_llr = 50.0;
};

ModulationPlan make_plan(std::size_t pc2_order, LabelingKind labeling,
                         ParityModulation parity = ParityModulation::bpsk,
                         SnrConvention convention = SnrConvention::per_info_bit);

// Deterministic frame layout: PC1 symbols, then PC3, then PC2 (grouped bits,
// zero-padded up to one symbol).
struct FrameLayout {
    long pc1_symbols = 0;
    long pc3_symbols = 0;
    long pc2_symbols = 0;
    long total_symbols = 0;
    unsigned pc2_bits = 1;
    unsigned pc3_bits = 1;
    long pc2_padding = 0;
    long pc3_padding = 0;
};

FrameLayout frame_layout(const ModulationPlan& plan, const ProtectionProfile& profile);

// codeword (n bits) -> symbol sequence per the plan's framing
std::vector<cplx> map_frame(std::span<const std::uint8_t> codeword, const UepCode& code,
                            const ModulationPlan& plan);

// Exact per-bit LLRs (log-domain ratio of summed Gaussian likelihoods over
// the constellation, conditioned on the fading coefficient), clipped to
// +-plan.max_llr. Positive LLR favors bit 0. max_log selects the max-log
// approximation instead of the exact sum.
std::vector<double> demap_soft(std::span<const cplx> received, cplx h, double n0,
                               const ModulationPlan& plan, const UepCode& code,
                               bool max_log = false);

// N0 for a target SNR per bit under the plan's convention: E_b equals frame
// symbols (unit energy) per information bit (or per coded bit), N0 = E_b/snr.
double n0_from_snr(SnrValue snr, const ModulationPlan& plan, const ProtectionProfile& profile);
SnrValue snr_from_n0(double n0, const ModulationPlan& plan, const ProtectionProfile& profile);

}  // namespace bcc
