#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bcc/degree.hpp"
#include "bcc/errors.hpp"

namespace bcc {

// ============================================================================
// UEP LDPC code: sparse parity-check matrix + protection classes
// ============================================================================
//
// Column layout is systematic: [0, k1) = PC1 (public), [k1, k) = PC2
// (secret), [k, n) = PC3 (redundancy). The PC3 columns carry a zigzag
// (bidiagonal) chain -- parity column j sits in rows j and j+1, the last one
// in row r-1 only -- so encoding is a single back-substitution pass. Parity
// columns whose target degree exceeds the chain get extra edges strictly
// below the diagonal, which keeps the back-substitution order valid.

struct BuildStats {
    long residual_4cycles = 0;        // 4-cycle census after construction
    long column_degree_misses = 0;    // columns whose degree differs from target
    long row_degree_misses = 0;       // rows whose degree differs from target
    int separation_score = 0;         // rows touching both PC1 and PC2
    long edges = 0;
};

class UepCode {
public:
    UepCode(long n, long rows, ProtectionProfile profile,
            std::vector<std::vector<int>> col_rows, std::uint64_t seed);

    long n() const { return n_; }
    long rows() const { return rows_; }
    long edges() const { return static_cast<long>(row_idx_.size()); }
    const ProtectionProfile& profile() const { return profile_; }
    std::uint64_t seed() const { return seed_; }

    const std::vector<int>& pc1_cols() const { return pc1_cols_; }
    const std::vector<int>& pc2_cols() const { return pc2_cols_; }
    const std::vector<int>& pc3_cols() const { return pc3_cols_; }

    std::span<const int> row_cols(long row) const {
        return {row_idx_.data() + row_ptr_[row], row_idx_.data() + row_ptr_[row + 1]};
    }
    std::span<const int> col_rows(long col) const {
        return {col_idx_.data() + col_ptr_[col], col_idx_.data() + col_ptr_[col + 1]};
    }
    int col_degree(long col) const { return static_cast<int>(col_ptr_[col + 1] - col_ptr_[col]); }
    int row_degree(long row) const { return static_cast<int>(row_ptr_[row + 1] - row_ptr_[row]); }

    const BuildStats& stats() const { return stats_; }
    BuildStats& stats() { return stats_; }

    // h * c^T over GF(2)
    bool syndrome_zero(std::span<const std::uint8_t> codeword) const;

private:
    long n_;
    long rows_;
    ProtectionProfile profile_;
    std::uint64_t seed_;
    std::vector<int> pc1_cols_, pc2_cols_, pc3_cols_;
    std::vector<long> row_ptr_, col_ptr_;
    std::vector<int> row_idx_, col_idx_;
    BuildStats stats_;
};

// Deterministic for fixed inputs and seed. separation_effort bounds both the
// candidate retries per edge (4-cycle and class-mixing avoidance) and the
// post-placement swap repair budget.
UepCode build_uep_code(const DegreeDistribution& nu, const DegreeDistribution& check,
                       const ProtectionProfile& profile, std::uint64_t seed,
                       int separation_effort = 8);

// Systematic encoder: public bits land on PC1 columns, secret on PC2, parity
// by back-substitution through the zigzag chain.
std::vector<std::uint8_t> encode(const UepCode& code, std::span<const std::uint8_t> public_bits,
                                 std::span<const std::uint8_t> secret_bits);

// Number of parity-check rows adjacent to both PC1 and PC2 columns.
int separation_score(const UepCode& code);

// Exact 4-cycle census (pairs of columns sharing two rows).
long count_4cycles(const UepCode& code);

// Variable nodes touched by at least one 4-cycle (girth < 6 at that node).
long nodes_in_4cycles(const UepCode& code);

// Largest-remainder apportionment of fractional degree targets onto `count`
// nodes; exposed for tests.
std::map<int, long> apportion_degrees(const DegreeDistribution& dist, long count);

}  // namespace bcc
