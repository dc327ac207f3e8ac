#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bcc/code.hpp"

namespace bcc {

struct DecodeResult {
    std::vector<std::uint8_t> hard_bits;
    int iterations_used = 0;
    bool converged = false;  // zero syndrome
};

// Flooding-schedule LLR-domain sum-product decoder with tanh-rule check
// updates and syndrome-based early stopping. Holds per-frame scratch, so use
// one instance per worker thread. Deterministic; ties (posterior exactly 0)
// decide bit 0.
class SpaDecoder {
public:
    explicit SpaDecoder(const UepCode& code);

    DecodeResult decode(std::span<const double> channel_llrs, int max_iterations = 100);

private:
    const UepCode& code_;
    // edge arrays in row-major order
    std::vector<long> row_ptr_;
    std::vector<int> edge_col_;
    std::vector<std::vector<long>> col_edges_;
    std::vector<double> v2c_, c2v_, tanh_, posterior_;
    std::vector<std::uint8_t> hard_;
};

}  // namespace bcc
