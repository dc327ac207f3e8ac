#include "bcc/decoder.hpp"

#include <algorithm>
#include <cmath>

namespace bcc {

namespace {

constexpr double msg_clip = 50.0;
constexpr double tanh_guard = 1.0 - 1e-15;  // keeps atanh finite

inline double clip(double x) { return std::clamp(x, -msg_clip, msg_clip); }

}  // namespace

SpaDecoder::SpaDecoder(const UepCode& code) : code_(code) {
    const long rows = code.rows();
    row_ptr_.assign(rows + 1, 0);
    for (long r = 0; r < rows; ++r) row_ptr_[r + 1] = row_ptr_[r] + code.row_degree(r);
    const long edges = row_ptr_[rows];
    edge_col_.reserve(edges);
    col_edges_.assign(code.n(), {});
    for (long r = 0; r < rows; ++r) {
        for (int c : code.row_cols(r)) {
            col_edges_[c].push_back(static_cast<long>(edge_col_.size()));
            edge_col_.push_back(c);
        }
    }
    v2c_.assign(edges, 0.0);
    c2v_.assign(edges, 0.0);
    tanh_.assign(edges, 0.0);
    posterior_.assign(code.n(), 0.0);
    hard_.assign(code.n(), 0);
}

DecodeResult SpaDecoder::decode(std::span<const double> channel_llrs, int max_iterations) {
    const long n = code_.n();
    const long rows = code_.rows();

    // Ties (posterior exactly 0) decide bit 0 but block convergence: a zero
    // posterior carries no decision, so e.g. an all-zero (erased) input never
    // reports success even though the all-zero word satisfies every check.
    auto hard_decide = [&](const std::vector<double>& llrs) {
        bool definite = true;
        for (long v = 0; v < n; ++v) {
            hard_[v] = llrs[v] < 0.0 ? 1 : 0;
            definite &= llrs[v] != 0.0;
        }
        return definite;
    };
    auto syndrome_ok = [&]() {
        for (long r = 0; r < rows; ++r) {
            std::uint8_t parity = 0;
            for (long e = row_ptr_[r]; e < row_ptr_[r + 1]; ++e) parity ^= hard_[edge_col_[e]];
            if (parity) return false;
        }
        return true;
    };

    // channel decisions may already satisfy every check
    for (long v = 0; v < n; ++v) posterior_[v] = channel_llrs[v];
    if (hard_decide(posterior_) && syndrome_ok()) return {hard_, 0, true};

    for (long e = 0; e < static_cast<long>(edge_col_.size()); ++e)
        v2c_[e] = channel_llrs[edge_col_[e]];

    for (int it = 1; it <= max_iterations; ++it) {
        // check-node update: extrinsic tanh products via forward/backward pass
        for (long e = 0; e < static_cast<long>(edge_col_.size()); ++e)
            tanh_[e] = std::tanh(clip(v2c_[e]) * 0.5);
        for (long r = 0; r < rows; ++r) {
            const long lo = row_ptr_[r], hi = row_ptr_[r + 1];
            const long deg = hi - lo;
            if (deg == 1) {
                c2v_[lo] = 0.0;
                continue;
            }
            double fwd = 1.0;
            for (long e = lo; e < hi; ++e) {
                c2v_[e] = fwd;  // product of tanh over edges before e
                fwd *= tanh_[e];
            }
            double bwd = 1.0;
            for (long e = hi - 1; e >= lo; --e) {
                const double prod = std::clamp(c2v_[e] * bwd, -tanh_guard, tanh_guard);
                c2v_[e] = 2.0 * std::atanh(prod);
                bwd *= tanh_[e];
            }
        }

        // variable-node update and posterior
        for (long v = 0; v < n; ++v) {
            double sum = channel_llrs[v];
            for (long e : col_edges_[v]) sum += c2v_[e];
            posterior_[v] = sum;
            for (long e : col_edges_[v]) v2c_[e] = clip(sum - c2v_[e]);
        }

        if (hard_decide(posterior_) && syndrome_ok()) return {hard_, it, true};
    }
    return {hard_, max_iterations, false};
}

}  // namespace bcc
