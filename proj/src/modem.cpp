#include "bcc/modem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace bcc {

std::uint32_t gray_axis_label(std::uint32_t position) { return position ^ (position >> 1); }

// Anti-Gray axis sequence: alternate each (bits-1)-bit Gray word, shifted
// left, with its complement. Adjacent positions differ in bits or bits-1
// label bits, which is maximal.
std::uint32_t yarg_axis_label(std::uint32_t position, unsigned bits) {
    if (bits == 0) return 0;
    const std::uint32_t mask = (bits >= 32) ? ~0u : ((1u << bits) - 1u);
    const std::uint32_t base = gray_axis_label(position >> 1) << 1;
    return (position & 1u) ? (~base & mask) : base;
}

namespace {

std::uint32_t axis_label(std::uint32_t position, unsigned bits, LabelingKind labeling) {
    return labeling == LabelingKind::gray ? gray_axis_label(position)
                                          : yarg_axis_label(position, bits);
}

void finish(Constellation& c) {
    double energy = 0.0;
    for (const auto& p : c.points) energy += std::norm(p);
    const double scale = 1.0 / std::sqrt(energy / static_cast<double>(c.order));
    for (auto& p : c.points) p *= scale;
    c.index_by_label.assign(c.order, 0);
    for (std::size_t i = 0; i < c.order; ++i) c.index_by_label[c.labels[i]] = static_cast<std::uint32_t>(i);
}

Constellation build_bpsk() {
    Constellation c;
    c.order = 2;
    c.kind = ConstellationKind::bpsk;
    c.bits = 1;
    c.points = {cplx(1.0, 0.0), cplx(-1.0, 0.0)};
    c.labels = {0u, 1u};
    finish(c);
    return c;
}

Constellation build_square(std::size_t order, LabelingKind labeling) {
    Constellation c;
    c.order = order;
    c.kind = ConstellationKind::square_qam;
    unsigned total_bits = 0;
    while ((1u << total_bits) < order) ++total_bits;
    c.bits = total_bits;
    const unsigned m = total_bits / 2;
    const std::uint32_t side = 1u << m;
    c.points.resize(order);
    c.labels.resize(order);
    for (std::uint32_t y = 0; y < side; ++y) {
        for (std::uint32_t x = 0; x < side; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * side + x;
            c.points[idx] = cplx(2.0 * x - (side - 1.0), 2.0 * y - (side - 1.0));
            c.labels[idx] = (axis_label(x, m, labeling) << m) | axis_label(y, m, labeling);
        }
    }
    finish(c);
    return c;
}

// Cross constellation: side-s square (s = 3*2^(m-1)) with q x q corners cut
// (q = 2^(m-2)). Labels come from a 2^(m+1) x 2^m product-labeled rectangle:
// the central columns map onto the middle band, the q outermost columns on
// each side fold onto the top/bottom row extensions.
Constellation build_cross(std::size_t order, LabelingKind labeling) {
    Constellation c;
    c.order = order;
    c.kind = ConstellationKind::cross_qam;
    unsigned total_bits = 0;
    while ((1u << total_bits) < order) ++total_bits;
    c.bits = total_bits;
    const unsigned m = (total_bits - 1) / 2;  // total_bits = 2m + 1, m >= 2
    const std::uint32_t w = 1u << (m + 1);
    const std::uint32_t h = 1u << m;
    const std::uint32_t q = 1u << (m - 2);
    const std::uint32_t s = 3u << (m - 1);

    c.points.resize(order);
    c.labels.resize(order);
    std::size_t idx = 0;
    for (std::uint32_t v = 0; v < h; ++v) {
        for (std::uint32_t u = 0; u < w; ++u) {
            std::uint32_t gx, gy;
            if (u < q) {  // left block -> top extension
                gx = q + v;
                gy = s - q + u;
            } else if (u >= w - q) {  // right block -> bottom extension
                gx = q + v;
                gy = q - 1 - (u - (w - q));
            } else {  // central band
                gx = u - q;
                gy = v + q;
            }
            c.points[idx] = cplx(2.0 * gx - (s - 1.0), 2.0 * gy - (s - 1.0));
            c.labels[idx] = (axis_label(u, m + 1, labeling) << m) | axis_label(v, m, labeling);
            ++idx;
        }
    }
    finish(c);
    return c;
}

}  // namespace

Constellation build_constellation(std::size_t order, LabelingKind labeling) {
    if (order == 2) return build_bpsk();
    if (order < 4 || order > 4096 || (order & (order - 1)) != 0)
        throw validation_error("build_constellation: unsupported order " + std::to_string(order));
    unsigned total_bits = 0;
    while ((1u << total_bits) < order) ++total_bits;
    if (total_bits % 2 == 0) return build_square(order, labeling);
    if (total_bits < 5)
        throw validation_error("build_constellation: no cross geometry for order " +
                               std::to_string(order));
    return build_cross(order, labeling);
}

void Constellation::dump_csv(std::ostream& out) const {
    out << "index,label,re,im\n";
    for (std::size_t i = 0; i < order; ++i)
        out << i << ',' << labels[i] << ',' << points[i].real() << ',' << points[i].imag()
            << '\n';
}

ModulationPlan make_plan(std::size_t pc2_order, LabelingKind labeling, ParityModulation parity,
                         SnrConvention convention) {
    ModulationPlan plan;
    plan.pc1 = build_constellation(2, labeling);
    plan.pc2 = build_constellation(pc2_order, labeling);
    plan.pc3 = (parity == ParityModulation::bpsk) ? build_constellation(2, labeling) : plan.pc2;
    plan.convention = convention;
    return plan;
}

FrameLayout frame_layout(const ModulationPlan& plan, const ProtectionProfile& profile) {
    FrameLayout l;
    l.pc2_bits = plan.pc2.bits;
    l.pc3_bits = plan.pc3.bits;
    l.pc1_symbols = profile.k1;  // PC1 is BPSK by construction
    l.pc3_symbols = (profile.r + l.pc3_bits - 1) / l.pc3_bits;
    l.pc3_padding = l.pc3_symbols * l.pc3_bits - profile.r;
    l.pc2_symbols = (profile.k2 + l.pc2_bits - 1) / l.pc2_bits;
    l.pc2_padding = l.pc2_symbols * l.pc2_bits - profile.k2;
    l.total_symbols = l.pc1_symbols + l.pc3_symbols + l.pc2_symbols;
    return l;
}

namespace {

// Gather class bits (MSB first within a symbol), zero-padding the tail.
void map_segment(const std::vector<int>& cols, std::span<const std::uint8_t> codeword,
                 const Constellation& mod, std::vector<cplx>& out) {
    const unsigned bits = mod.bits;
    std::uint32_t label = 0;
    unsigned have = 0;
    for (int col : cols) {
        label = (label << 1) | (codeword[col] & 1u);
        if (++have == bits) {
            out.push_back(mod.point_for_label(label));
            label = 0;
            have = 0;
        }
    }
    if (have > 0) {
        label <<= (bits - have);  // pad with zero bits
        out.push_back(mod.point_for_label(label));
    }
}

}  // namespace

std::vector<cplx> map_frame(std::span<const std::uint8_t> codeword, const UepCode& code,
                            const ModulationPlan& plan) {
    if (static_cast<long>(codeword.size()) != code.n())
        throw validation_error("map_frame: codeword length mismatch");
    const FrameLayout l = frame_layout(plan, code.profile());
    std::vector<cplx> out;
    out.reserve(l.total_symbols);
    map_segment(code.pc1_cols(), codeword, plan.pc1, out);
    map_segment(code.pc3_cols(), codeword, plan.pc3, out);
    map_segment(code.pc2_cols(), codeword, plan.pc2, out);
    return out;
}

namespace {

// Exact bit LLRs for one received symbol: log-sum-exp over the constellation
// split by bit value. llr[b] uses MSB-first bit order, matching the mapper.
void demap_symbol(cplx y, cplx h, double n0, const Constellation& mod, bool max_log,
                  double max_llr, double* llr_out) {
    const unsigned bits = mod.bits;
    const std::size_t M = mod.order;
    thread_local std::vector<double> metric;
    metric.resize(M);
    for (std::size_t i = 0; i < M; ++i) metric[i] = -std::norm(y - h * mod.points[i]) / n0;

    for (unsigned b = 0; b < bits; ++b) {
        const std::uint32_t bit_mask = 1u << (bits - 1 - b);
        double max0 = -std::numeric_limits<double>::infinity();
        double max1 = max0;
        for (std::size_t i = 0; i < M; ++i) {
            if (mod.labels[i] & bit_mask) {
                max1 = std::max(max1, metric[i]);
            } else {
                max0 = std::max(max0, metric[i]);
            }
        }
        double llr;
        if (max_log) {
            llr = max0 - max1;
        } else {
            double sum0 = 0.0, sum1 = 0.0;
            for (std::size_t i = 0; i < M; ++i) {
                if (mod.labels[i] & bit_mask)
                    sum1 += std::exp(metric[i] - max1);
                else
                    sum0 += std::exp(metric[i] - max0);
            }
            llr = (max0 + std::log(sum0)) - (max1 + std::log(sum1));
        }
        llr_out[b] = std::clamp(llr, -max_llr, max_llr);
    }
}

void demap_segment(const std::vector<int>& cols, std::span<const cplx>& received,
                   std::size_t& pos, cplx h, double n0, const Constellation& mod, bool max_log,
                   double max_llr, std::vector<double>& llrs) {
    const unsigned bits = mod.bits;
    double symbol_llrs[16];
    std::size_t col_pos = 0;
    const std::size_t n_symbols = (cols.size() + bits - 1) / bits;
    for (std::size_t si = 0; si < n_symbols; ++si) {
        demap_symbol(received[pos++], h, n0, mod, max_log, max_llr, symbol_llrs);
        for (unsigned b = 0; b < bits && col_pos < cols.size(); ++b, ++col_pos)
            llrs[cols[col_pos]] = symbol_llrs[b];  // padding bits fall off the end
    }
}

}  // namespace

std::vector<double> demap_soft(std::span<const cplx> received, cplx h, double n0,
                               const ModulationPlan& plan, const UepCode& code, bool max_log) {
    if (!(n0 > 0.0)) throw validation_error("demap_soft: N0 must be positive");
    const FrameLayout l = frame_layout(plan, code.profile());
    if (static_cast<long>(received.size()) != l.total_symbols)
        throw validation_error("demap_soft: frame length mismatch");

    std::vector<double> llrs(code.n(), 0.0);
    std::size_t pos = 0;
    demap_segment(code.pc1_cols(), received, pos, h, n0, plan.pc1, max_log, plan.max_llr, llrs);
    demap_segment(code.pc3_cols(), received, pos, h, n0, plan.pc3, max_log, plan.max_llr, llrs);
    demap_segment(code.pc2_cols(), received, pos, h, n0, plan.pc2, max_log, plan.max_llr, llrs);
    return llrs;
}

double n0_from_snr(SnrValue snr, const ModulationPlan& plan, const ProtectionProfile& profile) {
    const FrameLayout l = frame_layout(plan, profile);
    const double bits = (plan.convention == SnrConvention::per_info_bit)
                            ? static_cast<double>(profile.k)
                            : static_cast<double>(profile.n);
    const double eb = static_cast<double>(l.total_symbols) / bits;
    return eb / snr.linear();
}

SnrValue snr_from_n0(double n0, const ModulationPlan& plan, const ProtectionProfile& profile) {
    if (!(n0 > 0.0)) throw validation_error("snr_from_n0: N0 must be positive");
    const FrameLayout l = frame_layout(plan, profile);
    const double bits = (plan.convention == SnrConvention::per_info_bit)
                            ? static_cast<double>(profile.k)
                            : static_cast<double>(profile.n);
    const double eb = static_cast<double>(l.total_symbols) / bits;
    return SnrValue::from_linear(eb / n0);
}

}  // namespace bcc
