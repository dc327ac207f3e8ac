#include "bcc/degree.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace bcc {

namespace {

constexpr double sum_reject = 1e-6;
constexpr double sum_renorm = 1e-9;

}  // namespace

DegreeDistribution::DegreeDistribution(Perspective perspective, Side side,
                                       std::map<int, double> coeffs)
    : perspective_(perspective), side_(side), coeffs_(std::move(coeffs)) {
    // drop exact zeros so max_degree reflects the support
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (it->second == 0.0)
            it = coeffs_.erase(it);
        else
            ++it;
    }
    if (coeffs_.empty())
        throw validation_error("degree distribution: empty support");

    double sum = 0.0;
    for (const auto& [degree, fraction] : coeffs_) {
        if (degree < 2)
            throw validation_error("degree distribution: degrees must be >= 2, got " +
                                   std::to_string(degree));
        if (!(fraction >= 0.0 && fraction <= 1.0))
            throw validation_error("degree distribution: fraction out of [0,1] at degree " +
                                   std::to_string(degree));
        sum += fraction;
    }
    const double off = std::abs(sum - 1.0);
    if (off > sum_reject)
        throw validation_error("degree distribution: coefficients sum to " +
                               std::to_string(sum) + ", not 1");
    if (off > sum_renorm) {
        for (auto& [degree, fraction] : coeffs_) fraction /= sum;
        renormalized_ = true;
    }
    max_degree_ = coeffs_.rbegin()->first;
}

double DegreeDistribution::fraction(int degree) const {
    auto it = coeffs_.find(degree);
    return it == coeffs_.end() ? 0.0 : it->second;
}

double DegreeDistribution::mean_degree() const {
    double m = 0.0;
    for (const auto& [degree, fraction] : coeffs_) m += degree * fraction;
    return m;
}

DegreeDistribution DegreeDistribution::from_text(std::istream& in, Perspective p, Side s) {
    std::map<int, double> coeffs;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        int degree;
        double fraction;
        if (ls >> degree >> fraction) coeffs[degree] += fraction;
    }
    return DegreeDistribution(p, s, std::move(coeffs));
}

void DegreeDistribution::to_text(std::ostream& out) const {
    for (const auto& [degree, fraction] : coeffs_) out << degree << ' ' << fraction << '\n';
}

DegreeDistribution edge_to_node(const DegreeDistribution& lambda) {
    if (lambda.perspective() != Perspective::edge)
        throw validation_error("edge_to_node: input must be edge-perspective");
    double denom = 0.0;
    for (const auto& [degree, fraction] : lambda.coeffs()) denom += fraction / degree;
    std::map<int, double> out;
    for (const auto& [degree, fraction] : lambda.coeffs())
        out[degree] = (fraction / degree) / denom;
    return DegreeDistribution(Perspective::node, lambda.side(), std::move(out));
}

DegreeDistribution node_to_edge(const DegreeDistribution& nu) {
    if (nu.perspective() != Perspective::node)
        throw validation_error("node_to_edge: input must be node-perspective");
    double denom = 0.0;
    for (const auto& [degree, fraction] : nu.coeffs()) denom += fraction * degree;
    std::map<int, double> out;
    for (const auto& [degree, fraction] : nu.coeffs())
        out[degree] = fraction * degree / denom;
    return DegreeDistribution(Perspective::edge, nu.side(), std::move(out));
}

DegreeDistribution concentrated_check(const DegreeDistribution& nu, double rate) {
    if (nu.perspective() != Perspective::node || nu.side() != Side::variable)
        throw validation_error("concentrated_check: input must be a node-perspective "
                               "variable distribution");
    if (!(rate > 0.0 && rate < 1.0))
        throw validation_error("concentrated_check: rate must be in (0,1)");

    const double cm = nu.mean_degree() / (1.0 - rate);
    const double lo = std::floor(cm);
    const double hi = std::ceil(cm);
    std::map<int, double> out;
    if (lo == hi) {
        // integer mean: the a/b weights are 0/0, take the single term
        out[static_cast<int>(cm)] = 1.0;
    } else {
        out[static_cast<int>(lo)] = hi - cm;
        out[static_cast<int>(hi)] = cm - lo;
    }
    return DegreeDistribution(Perspective::node, Side::check, std::move(out));
}

ProtectionProfile protection_classes(const DegreeDistribution& nu, long n, double rate,
                                     int degree_threshold) {
    if (nu.perspective() != Perspective::node)
        throw validation_error("protection_classes: input must be node-perspective");
    if (n <= 0) throw validation_error("protection_classes: n must be positive");
    if (!(rate > 0.0 && rate < 1.0))
        throw validation_error("protection_classes: rate must be in (0,1)");
    const double k_real = static_cast<double>(n) * rate;
    if (std::abs(k_real - std::round(k_real)) > 1e-9)
        throw validation_error("protection_classes: n * rate must be an integer");
    const long k = std::lround(k_real);

    if (degree_threshold < nu.coeffs().begin()->first)
        throw infeasible_error("protection_classes: threshold lies below the whole degree "
                               "support, every bit would land in PC1");

    double high = 0.0;
    for (const auto& [degree, fraction] : nu.coeffs())
        if (degree >= degree_threshold) high += fraction;

    long k1 = std::lround(static_cast<double>(n) * high);
    if (k1 > k) k1 = k;  // clamp, PC2 becomes empty

    ProtectionProfile p;
    p.n = n;
    p.k = k;
    p.k1 = k1;
    p.k2 = k - k1;
    p.r = n - k;
    p.degree_threshold = degree_threshold;
    p.rate = rate;
    return p;
}

}  // namespace bcc
