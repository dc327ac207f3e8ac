#include "bcc/outage.hpp"

#include <cmath>

namespace bcc {

FeasibilityResult check_feasibility(SnrValue beta_p, SnrValue alpha_s) {
    FeasibilityResult r;
    r.margin_db = alpha_s.db() - beta_p.db();
    r.feasible = alpha_s.linear() > beta_p.linear();
    return r;
}

double bob_outage(SnrValue beta_s, SnrValue mean_bob) {
    return 1.0 - std::exp(-beta_s.linear() / mean_bob.linear());
}

SnrValue min_bob_snr(SnrValue beta_s, double eta_max) {
    if (!(eta_max > 0.0 && eta_max < 1.0))
        throw validation_error("min_bob_snr: eta_max must be in (0,1)");
    return SnrValue::from_linear(-beta_s.linear() / std::log1p(-eta_max));
}

EveOutage eve_outage(SnrValue beta_p, SnrValue alpha_s, SnrValue mean_eve) {
    EveOutage o;
    o.reliability = 1.0 - std::exp(-beta_p.linear() / mean_eve.linear());
    o.secrecy = std::exp(-alpha_s.linear() / mean_eve.linear());
    o.total = o.reliability + o.secrecy;
    return o;
}

double eve_outage_derivative(SnrValue beta_p, SnrValue alpha_s, SnrValue mean_eve) {
    const double g = mean_eve.linear();
    const double a = alpha_s.linear();
    const double b = beta_p.linear();
    return (a * std::exp(-a / g) - b * std::exp(-b / g)) / (g * g);
}

SnrValue optimal_eve_snr(SnrValue beta_p, SnrValue alpha_s) {
    const double b = beta_p.linear();
    const double a = alpha_s.linear();
    if (!(b < a))
        throw infeasible_error("optimal_eve_snr: requires beta_p < alpha_s",
                               alpha_s.db() - beta_p.db());
    return SnrValue::from_linear((b - a) / std::log(b / a));
}

double security_gap_db(SnrValue min_bob, SnrValue opt_eve) {
    return min_bob.db() - opt_eve.db();
}

namespace {

// two-decimal truncation, guarded against values sitting just under a tick
double trunc2(double x) { return std::floor(x * 100.0 + 1e-9) / 100.0; }

}  // namespace

OutageReport full_report(SnrValue beta_p, SnrValue alpha_s, SnrValue beta_s, EtaPolicy policy,
                         double explicit_eta) {
    const auto feas = check_feasibility(beta_p, alpha_s);
    if (!feas.feasible)
        throw infeasible_error("full_report: alpha_s must exceed beta_p", feas.margin_db);

    OutageReport rep;
    rep.beta_p_db = beta_p.db();
    rep.alpha_s_db = alpha_s.db();
    rep.beta_s_db = beta_s.db();

    const SnrValue eve_opt = optimal_eve_snr(beta_p, alpha_s);
    const EveOutage at_opt = eve_outage(beta_p, alpha_s, eve_opt);
    rep.omega_r = at_opt.reliability;
    rep.omega_s = at_opt.secrecy;
    rep.omega_min = at_opt.total;
    rep.eve_opt_db = eve_opt.db();

    rep.eta_max = (policy == EtaPolicy::equal_to_omega_min) ? trunc2(rep.omega_min)
                                                            : explicit_eta;
    if (!(rep.eta_max > 0.0 && rep.eta_max < 1.0))
        throw validation_error("full_report: eta policy produced a cap outside (0,1)");

    const SnrValue bob_min = min_bob_snr(beta_s, rep.eta_max);
    rep.bob_min_db = bob_min.db();
    rep.security_gap = security_gap_db(bob_min, eve_opt);
    return rep;
}

}  // namespace bcc
