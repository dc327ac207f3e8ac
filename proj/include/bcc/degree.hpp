#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "bcc/errors.hpp"

namespace bcc {

enum class Perspective { edge, node };
enum class Side { variable, check };

// ============================================================================
// Degree distributions
// ============================================================================
//
// A distribution is a map degree -> fraction over node degrees >= 2, from
// either the edge or the node perspective, for variable or check nodes.
// Construction validates: every fraction in [0,1], sum equal to 1. A sum off
// by more than 1e-6 is rejected; between 1e-9 and 1e-6 the coefficients are
// renormalized and the instance is flagged.
class DegreeDistribution {
public:
    DegreeDistribution(Perspective perspective, Side side, std::map<int, double> coeffs);

    Perspective perspective() const { return perspective_; }
    Side side() const { return side_; }
    const std::map<int, double>& coeffs() const { return coeffs_; }
    int max_degree() const { return max_degree_; }
    bool renormalized() const { return renormalized_; }

    double fraction(int degree) const;

    // First raw moment sum_d d * f(d). From the node perspective this is the
    // mean node degree (edges per node).
    double mean_degree() const;

    // Plain-text interchange: one "degree fraction" pair per line, '#'
    // comments ignored.
    static DegreeDistribution from_text(std::istream& in, Perspective p, Side s);
    void to_text(std::ostream& out) const;

private:
    Perspective perspective_;
    Side side_;
    std::map<int, double> coeffs_;
    int max_degree_ = 0;
    bool renormalized_ = false;
};

// Protection-class sizing for one code: k1 public (PC1), k2 secret (PC2),
// r redundancy (PC3).
struct ProtectionProfile {
    long n = 0;
    long k = 0;
    long k1 = 0;
    long k2 = 0;
    long r = 0;
    int degree_threshold = 0;
    double rate = 0.0;  // k / n, exact
};

// nu_i = (lambda_i / i) / sum_j (lambda_j / j)
DegreeDistribution edge_to_node(const DegreeDistribution& lambda);

// lambda_i = nu_i * i / sum_j (nu_j * j)
DegreeDistribution node_to_edge(const DegreeDistribution& nu);

// Concentrated two-degree check distribution around the mean check degree
// c_m = sum_j nu_j * j / (1 - R): weight ceil(c_m)-c_m on floor(c_m) and
// c_m-floor(c_m) on ceil(c_m). Integer c_m collapses to the single term.
DegreeDistribution concentrated_check(const DegreeDistribution& nu, double rate);

// PC1 holds the information bits whose variable-node degree is at least
// degree_threshold: k1 = round(n * sum_{d >= threshold} nu_d), clamped to k.
ProtectionProfile protection_classes(const DegreeDistribution& nu, long n, double rate,
                                     int degree_threshold);

}  // namespace bcc
