#pragma once

#include "bcc/channel.hpp"
#include "bcc/errors.hpp"

namespace bcc {

// ============================================================================
// Closed-form outage and security-gap analytics for quasi-static Rayleigh
// fading. All formulas evaluate in linear SNR; dB only at the boundaries.
// ============================================================================

// Reliability threshold delta and security threshold epsilon; requires
// 0 < delta < 1 - epsilon < 1.
struct SecrecyTargets {
    double delta;
    double epsilon;

    SecrecyTargets(double d, double e) : delta(d), epsilon(e) {
        if (!(d > 0.0 && e > 0.0 && d < 1.0 - e && 1.0 - e < 1.0))
            throw validation_error("SecrecyTargets: need 0 < delta < 1-epsilon < 1");
    }
};

struct FeasibilityResult {
    bool feasible = false;   // strict: alpha_s > beta_p
    double margin_db = 0.0;  // alpha_s - beta_p in dB
};

// The eavesdropper window [beta_p, alpha_s] must be non-empty with margin.
FeasibilityResult check_feasibility(SnrValue beta_p, SnrValue alpha_s);

// eta = 1 - exp(-beta_s / mean_bob)
double bob_outage(SnrValue beta_s, SnrValue mean_bob);

// Smallest mean SNR keeping Bob's outage at or below eta_max:
// gamma_min = -beta_s / ln(1 - eta_max)
SnrValue min_bob_snr(SnrValue beta_s, double eta_max);

struct EveOutage {
    double reliability = 0.0;  // omega_r: below beta_p, public part undecodable
    double secrecy = 0.0;      // omega_s: above alpha_s, secret part exposed
    double total = 0.0;        // omega = omega_r + omega_s (disjoint events)
};

EveOutage eve_outage(SnrValue beta_p, SnrValue alpha_s, SnrValue mean_eve);

// d omega / d mean = (alpha_s e^(-alpha_s/mean) - beta_p e^(-beta_p/mean)) / mean^2
double eve_outage_derivative(SnrValue beta_p, SnrValue alpha_s, SnrValue mean_eve);

// Stationary point of omega: (beta_p - alpha_s) / ln(beta_p / alpha_s).
// Continuous extension at alpha_s -> beta_p is beta_p itself.
SnrValue optimal_eve_snr(SnrValue beta_p, SnrValue alpha_s);

// Linear ratio reported as a dB difference.
double security_gap_db(SnrValue min_bob, SnrValue opt_eve);

enum class EtaPolicy {
    equal_to_omega_min,  // eta_max = omega_min truncated to two decimals
    explicit_value,
};

struct OutageReport {
    double beta_p_db = 0.0, alpha_s_db = 0.0, beta_s_db = 0.0;  // inputs
    double omega_r = 0.0, omega_s = 0.0, omega_min = 0.0;
    double eta_max = 0.0;
    double eve_opt_db = 0.0;
    double bob_min_db = 0.0;
    double security_gap = 0.0;  // dB, full precision
};

// Full pipeline from the three threshold SNRs: optimal Eve SNR, minimum Eve
// outage, Bob's SNR floor under the eta policy, and the resulting security
// gap. The equal_to_omega_min policy applies the cap at two-decimal
// precision, which is how the reference table's Bob column is defined.
OutageReport full_report(SnrValue beta_p, SnrValue alpha_s, SnrValue beta_s,
                         EtaPolicy policy = EtaPolicy::equal_to_omega_min,
                         double explicit_eta = 0.0);

}  // namespace bcc
