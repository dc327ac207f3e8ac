#include "bcc/code.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "bcc/channel.hpp"

namespace bcc {

namespace {

std::uint64_t pair_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

// Incremental working state of the Tanner graph under construction. Keeps a
// running 4-cycle count: pair (r1,r2) held by m columns contributes C(m,2).
struct Graph {
    long n, rows;
    std::vector<std::vector<int>> col_rows;   // per column, unsorted
    std::vector<std::vector<int>> row_cols;   // per row, unsorted
    std::unordered_map<std::uint64_t, int> row_pairs;  // (r1,r2) -> #columns containing both
    long cycles = 0;

    Graph(long n_, long rows_) : n(n_), rows(rows_), col_rows(n_), row_cols(rows_) {}

    bool adjacent(int col, int row) const {
        const auto& rs = col_rows[col];
        return std::find(rs.begin(), rs.end(), row) != rs.end();
    }

    // Would adding (col,row) close a 4-cycle? True iff some other column
    // already shares a row pair with this column through `row`.
    bool creates_4cycle(int col, int row) const {
        for (int r : col_rows[col]) {
            auto it = row_pairs.find(pair_key(r, row));
            if (it != row_pairs.end() && it->second > 0) return true;
        }
        return false;
    }

    void add_edge(int col, int row) {
        for (int r : col_rows[col]) {
            int& m = row_pairs[pair_key(r, row)];
            cycles += m;  // C(m+1,2) - C(m,2)
            m += 1;
        }
        col_rows[col].push_back(row);
        row_cols[row].push_back(col);
    }

    void remove_edge(int col, int row) {
        auto& cr = col_rows[col];
        cr.erase(std::find(cr.begin(), cr.end(), row));
        auto& rc = row_cols[row];
        rc.erase(std::find(rc.begin(), rc.end(), col));
        for (int r : col_rows[col]) {
            int& m = row_pairs[pair_key(r, row)];
            m -= 1;
            cycles -= m;  // C(m,2) - C(m+1,2) with m already decremented
        }
    }
};

}  // namespace

std::map<int, long> apportion_degrees(const DegreeDistribution& dist, long count) {
    std::map<int, long> out;
    std::vector<std::pair<double, int>> remainders;  // (fractional part, degree)
    long assigned = 0;
    for (const auto& [degree, fraction] : dist.coeffs()) {
        const double quota = fraction * static_cast<double>(count);
        const long base = static_cast<long>(std::floor(quota + 1e-12));
        out[degree] = base;
        assigned += base;
        remainders.push_back({quota - static_cast<double>(base), degree});
    }
    // hand out the remaining nodes by largest fractional part, higher degree
    // first on ties, so the result is deterministic
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second > b.second;
    });
    for (std::size_t i = 0; assigned < count && i < remainders.size(); ++i, ++assigned)
        out[remainders[i].second] += 1;
    while (assigned > count) {  // possible only through accumulated FP excess
        for (auto it = out.begin(); it != out.end() && assigned > count; ++it)
            if (it->second > 0) {
                it->second -= 1;
                --assigned;
            }
    }
    return out;
}

UepCode::UepCode(long n, long rows, ProtectionProfile profile,
                 std::vector<std::vector<int>> col_rows, std::uint64_t seed)
    : n_(n), rows_(rows), profile_(profile), seed_(seed) {
    for (long c = 0; c < profile_.k1; ++c) pc1_cols_.push_back(static_cast<int>(c));
    for (long c = profile_.k1; c < profile_.k; ++c) pc2_cols_.push_back(static_cast<int>(c));
    for (long c = profile_.k; c < n_; ++c) pc3_cols_.push_back(static_cast<int>(c));

    col_ptr_.assign(n_ + 1, 0);
    for (long c = 0; c < n_; ++c) {
        std::sort(col_rows[c].begin(), col_rows[c].end());
        col_ptr_[c + 1] = col_ptr_[c] + static_cast<long>(col_rows[c].size());
    }
    col_idx_.reserve(col_ptr_[n_]);
    std::vector<long> row_deg(rows_, 0);
    for (long c = 0; c < n_; ++c)
        for (int r : col_rows[c]) {
            col_idx_.push_back(r);
            row_deg[r] += 1;
        }
    row_ptr_.assign(rows_ + 1, 0);
    for (long r = 0; r < rows_; ++r) row_ptr_[r + 1] = row_ptr_[r] + row_deg[r];
    row_idx_.assign(row_ptr_[rows_], 0);
    std::vector<long> fill = row_ptr_;
    for (long c = 0; c < n_; ++c)  // column-major walk keeps each row's list sorted
        for (int r : col_rows[c]) row_idx_[fill[r]++] = static_cast<int>(c);
    stats_.edges = static_cast<long>(row_idx_.size());
}

bool UepCode::syndrome_zero(std::span<const std::uint8_t> codeword) const {
    for (long r = 0; r < rows_; ++r) {
        std::uint8_t parity = 0;
        for (int c : row_cols(r)) parity ^= codeword[c] & 1u;
        if (parity) return false;
    }
    return true;
}

namespace {

struct Placer {
    Graph& g;
    FrameRng& rng;
    std::vector<int>& capacity;       // remaining row capacity
    const std::vector<int>& row_class;  // 0 none, 1 prefer PC1, 2 prefer PC2
    int effort;

    // Place one edge for `col`. prefer_class 1/2 biases toward matching rows,
    // 0 means no preference. min_row restricts candidates (parity top-ups).
    // prefer_capacity steers toward rows with the most room, which keeps the
    // constrained top-up tail placeable. Optional edges are refused rather
    // than placed into a 4-cycle. Returns the chosen row or -1.
    int place(int col, int prefer_class, int min_row, bool allow_overflow,
              bool prefer_capacity = false, bool optional_edge = false) {
        const long rows = g.rows;
        int best = -1;
        long best_score = 1L << 40;
        const int tries = std::max(1, effort);
        for (int t = 0; t < tries * 4 && t < 4 * static_cast<int>(rows); ++t) {
            const int row = min_row + static_cast<int>(rng.below(rows - min_row));
            if (capacity[row] <= 0 || g.adjacent(col, row)) continue;
            const long score = score_row(col, row, prefer_class, prefer_capacity);
            if (score < best_score) {
                best_score = score;
                best = row;
            }
        }
        if (best < 0) {
            // deterministic fallback scan over rows with remaining capacity
            for (int row = min_row; row < rows; ++row) {
                if (capacity[row] <= 0 || g.adjacent(col, row)) continue;
                const long score = score_row(col, row, prefer_class, prefer_capacity);
                if (score < best_score) {
                    best_score = score;
                    best = row;
                }
            }
        }
        if (best < 0 && allow_overflow) {
            // all rows with capacity already touch this column: overflow into
            // the least-loaded non-adjacent row
            int load = 1 << 30;
            for (int row = min_row; row < rows; ++row) {
                if (g.adjacent(col, row)) continue;
                const int l = static_cast<int>(g.row_cols[row].size());
                if (l < load) {
                    load = l;
                    best = row;
                }
            }
            if (best >= 0) {
                g.add_edge(col, best);
                return best;
            }
            return -1;
        }
        if (best < 0) return -1;
        if (optional_edge && g.creates_4cycle(col, best)) return -1;
        g.add_edge(col, best);
        capacity[best] -= 1;
        return best;
    }

    long score_row(int col, int row, int prefer_class, bool prefer_capacity) const {
        long s = 0;
        if (g.creates_4cycle(col, row)) s += 1L << 20;
        if (prefer_class != 0 && row_class[row] != prefer_class) s += 1L << 10;
        if (prefer_capacity) s -= capacity[row];
        return s;
    }
};

// Bounded 2-opt repair: swap the row partners of two information-column
// edges whenever that lowers the 4-cycle count. Column and row degrees are
// invariant under the swap; the zigzag chain is never touched.
void repair_4cycles(Graph& g, FrameRng& rng, long k, int rounds) {
    for (int round = 0; round < rounds && g.cycles > 0; ++round) {
        bool progress = false;
        for (long c = 0; c < k && g.cycles > 0; ++c) {
            for (std::size_t ri = 0; ri < g.col_rows[c].size(); ++ri) {
                const int bad_row = g.col_rows[c][ri];
                bool offending = false;
                for (int r2 : g.col_rows[c]) {
                    if (r2 == bad_row) continue;
                    auto it = g.row_pairs.find(pair_key(bad_row, r2));
                    if (it != g.row_pairs.end() && it->second >= 2) {
                        offending = true;
                        break;
                    }
                }
                if (!offending) continue;

                const long before = g.cycles;
                auto try_swap = [&](int other_col, int other_row) {
                    if (other_col == c || other_row == bad_row) return false;
                    if (g.adjacent(static_cast<int>(c), other_row) ||
                        g.adjacent(other_col, bad_row))
                        return false;
                    g.remove_edge(static_cast<int>(c), bad_row);
                    g.remove_edge(other_col, other_row);
                    g.add_edge(static_cast<int>(c), other_row);
                    g.add_edge(other_col, bad_row);
                    if (g.cycles < before) return true;
                    g.remove_edge(static_cast<int>(c), other_row);
                    g.remove_edge(other_col, bad_row);
                    g.add_edge(static_cast<int>(c), bad_row);
                    g.add_edge(other_col, other_row);
                    return false;
                };

                bool fixed = false;
                for (int attempt = 0; attempt < 96 && !fixed; ++attempt) {
                    const int other_col = static_cast<int>(rng.below(k));
                    if (g.col_rows[other_col].empty()) continue;
                    const auto& orows = g.col_rows[other_col];
                    fixed = try_swap(other_col, orows[rng.below(orows.size())]);
                }
                // deterministic sweep once random partners run dry
                for (long oc = 0; oc < k && !fixed; ++oc)
                    for (std::size_t oi = 0; oi < g.col_rows[oc].size() && !fixed; ++oi)
                        fixed = try_swap(static_cast<int>(oc), g.col_rows[oc][oi]);
                progress |= fixed;
            }
        }
        if (!progress) return;  // stuck, report the residual
    }
}

}  // namespace

UepCode build_uep_code(const DegreeDistribution& nu, const DegreeDistribution& check,
                       const ProtectionProfile& profile, std::uint64_t seed,
                       int separation_effort) {
    if (nu.perspective() != Perspective::node || nu.side() != Side::variable)
        throw validation_error("build: nu must be a node-perspective variable distribution");
    if (check.perspective() != Perspective::node || check.side() != Side::check)
        throw validation_error("build: check must be a node-perspective check distribution");
    if (profile.n <= 0 || profile.k1 + profile.k2 != profile.k || profile.k + profile.r != profile.n)
        throw validation_error("build: inconsistent protection profile");

    const long n = profile.n;
    const long r = profile.r;
    const long k = profile.k;

    // --- column degree targets: largest-remainder histogram, sorted slots ---
    const auto hist = apportion_degrees(nu, n);
    std::vector<int> slots;
    slots.reserve(n);
    for (auto it = hist.rbegin(); it != hist.rend(); ++it)
        for (long i = 0; i < it->second; ++i) slots.push_back(it->first);
    if (static_cast<long>(slots.size()) != n)
        throw construction_error("build: degree apportionment does not cover n columns");

    // info columns take the k highest-degree slots (first k1 of them are PC1);
    // parity columns take the rest, largest targets on the earliest columns so
    // top-up edges have room below the diagonal
    std::vector<int> col_target(n, 0);
    for (long c = 0; c < n; ++c) col_target[c] = slots[c];

    // intended parity degrees: zigzag base plus below-diagonal top-ups where
    // rows exist for them
    long topup_edges = 0;
    std::vector<int> parity_topup(r, 0);
    for (long j = 0; j < r; ++j) {
        const int base = (j + 1 < r) ? 2 : 1;
        const int want = col_target[k + j] - base;
        const int room = static_cast<int>(r - j - 2);  // rows j+2 .. r-1
        parity_topup[j] = std::clamp(want, 0, std::max(0, room));
        topup_edges += parity_topup[j];
    }
    long target_edges = 2 * (r - 1) + 1 + topup_edges;
    for (long c = 0; c < k; ++c) target_edges += col_target[c];

    // row degree targets: apportion the check distribution, then repair the
    // total to the realizable edge count. Each row may move one degree off
    // its apportioned value; a larger gap means the sequences are
    // incompatible.
    auto row_hist = apportion_degrees(check, r);
    std::vector<int> base_row_target;
    base_row_target.reserve(r);
    for (const auto& [degree, count] : row_hist)
        for (long i = 0; i < count; ++i) base_row_target.push_back(degree);
    const long row_sum = std::accumulate(base_row_target.begin(), base_row_target.end(), 0L);
    const long delta = target_edges - row_sum;
    if (delta > r || delta < -r)
        throw construction_error("build: column degree total " + std::to_string(target_edges) +
                                 " cannot be met by the check distribution (" +
                                 std::to_string(row_sum) + " after apportionment)");
    std::sort(base_row_target.begin(), base_row_target.end());
    if (delta > 0)
        for (long i = 0; i < delta; ++i) base_row_target[i] += 1;
    else
        for (long i = 0; i < -delta; ++i) {
            if (base_row_target[r - 1 - i] <= 1)
                throw construction_error("build: column and row degree totals cannot be "
                                         "balanced");
            base_row_target[r - 1 - i] -= 1;
        }

    // PC1/PC2 row preference stripes, proportional to edge mass
    long pc1_mass = 0, pc2_mass = 0;
    for (long c = 0; c < profile.k1; ++c) pc1_mass += col_target[c];
    for (long c = profile.k1; c < k; ++c) pc2_mass += col_target[c];
    std::vector<int> row_class(r, 0);
    if (separation_effort > 0 && pc1_mass > 0 && pc2_mass > 0) {
        const long total = pc1_mass + pc2_mass;
        for (long row = 0; row < r; ++row) {
            const bool pc2_row = ((row + 1) * pc2_mass) / total > (row * pc2_mass) / total;
            row_class[row] = pc2_row ? 2 : 1;
        }
    }

    // one full placement under a salted generator
    auto attempt_build = [&](std::uint64_t salt, Graph& g, long& col_misses,
                             long& row_misses) {
        FrameRng rng(mix64(seed ^ mix64(salt)));

        for (long j = 0; j < r; ++j) {
            const int col = static_cast<int>(k + j);
            g.add_edge(col, static_cast<int>(j));
            if (j + 1 < r) g.add_edge(col, static_cast<int>(j + 1));
        }

        // shuffle target degrees across physical rows, then make sure every
        // row can hold its structural zigzag edges
        std::vector<int> row_target = base_row_target;
        for (long i = r - 1; i > 0; --i) {
            const long j = static_cast<long>(rng.below(static_cast<std::uint64_t>(i + 1)));
            std::swap(row_target[i], row_target[j]);
        }
        for (long row = 0; row < r; ++row) {
            const int structural = static_cast<int>(g.row_cols[row].size());
            while (row_target[row] < structural) {
                const auto max_it = std::max_element(row_target.begin(), row_target.end());
                if (*max_it <= structural)
                    throw construction_error("build: row degrees cannot accommodate the zigzag");
                *max_it -= 1;
                row_target[row] += 1;
            }
        }

        std::vector<int> capacity(r, 0);
        for (long row = 0; row < r; ++row)
            capacity[row] = row_target[row] - static_cast<int>(g.row_cols[row].size());

        Placer placer{g, rng, capacity, row_class, separation_effort};

        // parity top-ups (below-diagonal extras keep back-substitution valid),
        // most constrained columns first so the tail never starves; a top-up
        // is an optional edge, never worth closing a 4-cycle for
        for (long j = r - 1; j >= 0; --j) {
            for (int e = 0; e < parity_topup[j]; ++e)
                if (placer.place(static_cast<int>(k + j), 0, static_cast<int>(j + 2), false,
                                 true, true) < 0)
                    break;
        }

        // information columns, PC1 (high degree) first
        for (long c = 0; c < k; ++c) {
            const int prefer = (separation_effort > 0) ? (c < profile.k1 ? 1 : 2) : 0;
            for (int e = 0; e < col_target[c]; ++e) {
                if (placer.place(static_cast<int>(c), prefer, 0, true) < 0)
                    throw construction_error("build: no admissible row left for an "
                                             "information column edge");
            }
        }

        repair_4cycles(g, rng, k, std::max(4, separation_effort * 8));

        col_misses = 0;
        for (long c = 0; c < n; ++c)
            if (static_cast<int>(g.col_rows[c].size()) != col_target[c]) col_misses += 1;
        row_misses = 0;
        for (long row = 0; row < r; ++row)
            if (static_cast<int>(g.row_cols[row].size()) != row_target[row]) row_misses += 1;
    };

    // keep the best of a few salted attempts (fewest residual 4-cycles)
    const int attempts = std::clamp(separation_effort / 6, 1, 8);
    Graph best(0, 0);
    long best_col_misses = 0, best_row_misses = 0;
    for (int a = 0; a < attempts; ++a) {
        Graph g(n, r);
        long col_misses = 0, row_misses = 0;
        attempt_build(static_cast<std::uint64_t>(a), g, col_misses, row_misses);
        if (a == 0 || g.cycles < best.cycles) {
            best = std::move(g);
            best_col_misses = col_misses;
            best_row_misses = row_misses;
        }
        if (best.cycles == 0) break;
    }

    UepCode code(n, r, profile, std::move(best.col_rows), seed);
    code.stats().residual_4cycles = count_4cycles(code);
    code.stats().column_degree_misses = best_col_misses;
    code.stats().row_degree_misses = best_row_misses;
    code.stats().separation_score = separation_score(code);
    return code;
}

std::vector<std::uint8_t> encode(const UepCode& code, std::span<const std::uint8_t> public_bits,
                                 std::span<const std::uint8_t> secret_bits) {
    const auto& p = code.profile();
    if (static_cast<long>(public_bits.size()) != p.k1)
        throw validation_error("encode: public payload must be k1 bits");
    if (static_cast<long>(secret_bits.size()) != p.k2)
        throw validation_error("encode: secret payload must be k2 bits");

    std::vector<std::uint8_t> cw(code.n(), 0);
    for (long i = 0; i < p.k1; ++i) cw[code.pc1_cols()[i]] = public_bits[i] & 1u;
    for (long i = 0; i < p.k2; ++i) cw[code.pc2_cols()[i]] = secret_bits[i] & 1u;

    // back-substitution: row j determines parity column k + j
    for (long j = 0; j < code.rows(); ++j) {
        const int self = static_cast<int>(p.k + j);
        std::uint8_t parity = 0;
        for (int c : code.row_cols(j))
            if (c != self) parity ^= cw[c];
        cw[self] = parity;
    }
    return cw;
}

int separation_score(const UepCode& code) {
    const long k1 = code.profile().k1;
    const long k = code.profile().k;
    int mixed = 0;
    for (long row = 0; row < code.rows(); ++row) {
        bool has1 = false, has2 = false;
        for (int c : code.row_cols(row)) {
            if (c < k1)
                has1 = true;
            else if (c < k)
                has2 = true;
        }
        if (has1 && has2) mixed += 1;
    }
    return mixed;
}

long count_4cycles(const UepCode& code) {
    std::unordered_map<std::uint64_t, int> pairs;
    for (long c = 0; c < code.n(); ++c) {
        const auto rows = code.col_rows(c);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = i + 1; j < rows.size(); ++j)
                pairs[pair_key(rows[i], rows[j])] += 1;
    }
    long cycles = 0;
    for (const auto& [key, m] : pairs)
        if (m >= 2) cycles += static_cast<long>(m) * (m - 1) / 2;
    return cycles;
}

long nodes_in_4cycles(const UepCode& code) {
    std::unordered_map<std::uint64_t, int> pairs;
    for (long c = 0; c < code.n(); ++c) {
        const auto rows = code.col_rows(c);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = i + 1; j < rows.size(); ++j)
                pairs[pair_key(rows[i], rows[j])] += 1;
    }
    std::unordered_set<int> touched;
    for (long c = 0; c < code.n(); ++c) {
        const auto rows = code.col_rows(c);
        bool in_cycle = false;
        for (std::size_t i = 0; i < rows.size() && !in_cycle; ++i)
            for (std::size_t j = i + 1; j < rows.size() && !in_cycle; ++j)
                if (pairs[pair_key(rows[i], rows[j])] >= 2) in_cycle = true;
        if (in_cycle) touched.insert(static_cast<int>(c));
    }
    return static_cast<long>(touched.size());
}

}  // namespace bcc
