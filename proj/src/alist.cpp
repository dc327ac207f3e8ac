#include "bcc/alist.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bcc {

void write_alist(const UepCode& code, std::ostream& out) {
    const long n = code.n();
    const long m = code.rows();
    int max_col = 0, max_row = 0;
    for (long c = 0; c < n; ++c) max_col = std::max(max_col, code.col_degree(c));
    for (long r = 0; r < m; ++r) max_row = std::max(max_row, code.row_degree(r));

    out << n << ' ' << m << '\n' << max_col << ' ' << max_row << '\n';
    for (long c = 0; c < n; ++c) out << code.col_degree(c) << (c + 1 < n ? ' ' : '\n');
    for (long r = 0; r < m; ++r) out << code.row_degree(r) << (r + 1 < m ? ' ' : '\n');
    for (long c = 0; c < n; ++c) {
        int written = 0;
        for (int r : code.col_rows(c)) {
            out << (written++ ? " " : "") << (r + 1);
        }
        for (; written < max_col; ++written) out << (written ? " 0" : "0");
        out << '\n';
    }
    for (long r = 0; r < m; ++r) {
        int written = 0;
        for (int c : code.row_cols(r)) {
            out << (written++ ? " " : "") << (c + 1);
        }
        for (; written < max_row; ++written) out << (written ? " 0" : "0");
        out << '\n';
    }
}

void write_sidecar(const UepCode& code, std::ostream& out, const std::string& spec_hash) {
    nlohmann::json j;
    j["seed"] = code.seed();
    if (!spec_hash.empty()) j["spec_hash"] = spec_hash;
    const auto& p = code.profile();
    j["profile"] = {{"n", p.n},       {"k", p.k},   {"k1", p.k1},
                    {"k2", p.k2},     {"r", p.r},   {"rate", p.rate},
                    {"degree_threshold", p.degree_threshold}};
    j["pc1"] = code.pc1_cols();
    j["pc2"] = code.pc2_cols();
    j["pc3"] = code.pc3_cols();
    j["stats"] = {{"edges", code.stats().edges},
                  {"residual_4cycles", code.stats().residual_4cycles},
                  {"column_degree_misses", code.stats().column_degree_misses},
                  {"row_degree_misses", code.stats().row_degree_misses},
                  {"separation_score", code.stats().separation_score}};
    out << j.dump(2) << '\n';
}

UepCode load_uep_code(std::istream& alist_in, std::istream& sidecar_in) {
    long n = 0, m = 0;
    int max_col = 0, max_row = 0;
    if (!(alist_in >> n >> m >> max_col >> max_row) || n <= 0 || m <= 0)
        throw validation_error("alist: bad header");

    std::vector<int> col_deg(n), row_deg(m);
    for (long c = 0; c < n; ++c) alist_in >> col_deg[c];
    for (long r = 0; r < m; ++r) alist_in >> row_deg[r];

    // Entries are 1-based, so zeros can only be padding; skipping them makes
    // the reader accept both the padded and unpadded alist variants.
    std::vector<std::vector<int>> col_rows(n);
    for (long c = 0; c < n; ++c) {
        int collected = 0;
        while (collected < col_deg[c]) {
            int v = 0;
            if (!(alist_in >> v)) throw validation_error("alist: truncated column list");
            if (v == 0) continue;
            if (v < 1 || v > m) throw validation_error("alist: bad column entry");
            col_rows[c].push_back(v - 1);
            ++collected;
        }
    }
    // row lists are redundant with the column lists; skip the remainder

    nlohmann::json j;
    sidecar_in >> j;
    ProtectionProfile p;
    p.n = j.at("profile").at("n").get<long>();
    p.k = j.at("profile").at("k").get<long>();
    p.k1 = j.at("profile").at("k1").get<long>();
    p.k2 = j.at("profile").at("k2").get<long>();
    p.r = j.at("profile").at("r").get<long>();
    p.rate = j.at("profile").at("rate").get<double>();
    p.degree_threshold = j.at("profile").at("degree_threshold").get<int>();
    if (p.n != n || p.r != m)
        throw validation_error("alist/sidecar: dimensions disagree");

    UepCode code(n, m, p, std::move(col_rows), j.at("seed").get<std::uint64_t>());
    if (j.contains("stats")) {
        code.stats().residual_4cycles = j["stats"].value("residual_4cycles", 0L);
        code.stats().column_degree_misses = j["stats"].value("column_degree_misses", 0L);
        code.stats().row_degree_misses = j["stats"].value("row_degree_misses", 0L);
        code.stats().separation_score = j["stats"].value("separation_score", 0);
    }
    return code;
}

void save_uep_code(const UepCode& code, const std::string& alist_path,
                   const std::string& sidecar_path, const std::string& spec_hash) {
    std::ofstream a(alist_path);
    if (!a) throw validation_error("cannot write " + alist_path);
    write_alist(code, a);
    std::ofstream s(sidecar_path);
    if (!s) throw validation_error("cannot write " + sidecar_path);
    write_sidecar(code, s, spec_hash);
}

UepCode load_uep_code_files(const std::string& alist_path, const std::string& sidecar_path) {
    std::ifstream a(alist_path);
    if (!a) throw validation_error("cannot read " + alist_path + " (run `build` first)");
    std::ifstream s(sidecar_path);
    if (!s) throw validation_error("cannot read " + sidecar_path + " (run `build` first)");
    return load_uep_code(a, s);
}

}  // namespace bcc
