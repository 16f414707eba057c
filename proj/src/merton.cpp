#include "perpput/merton.hpp"

#include <cmath>

namespace perpput {

MertonSolution merton_solution(double sigma0, const MarketParams& market) {
    if (!(sigma0 > 0.0)) throw ModelError("merton: sigma0 > 0 required");
    const double gamma = 2.0 * market.rate / (sigma0 * sigma0);
    return {gamma, market.strike * gamma / (1.0 + gamma), sigma0, market.strike};
}

MertonSolution merton_from_gamma(double gamma, const MarketParams& market) {
    if (!(gamma > 0.0)) throw ModelError("merton: gamma > 0 required");
    return {gamma, market.strike * gamma / (1.0 + gamma),
            std::sqrt(2.0 * market.rate / gamma), market.strike};
}

double merton_value(const MertonSolution& sol, double S) {
    if (!(S > 0.0)) throw DomainError("merton_value: S > 0 required");
    if (S <= sol.rho_gamma) return sol.strike - S;
    return sol.strike / (1.0 + sol.gamma) * std::pow(S / sol.rho_gamma, -sol.gamma);
}

double gamma_minus(const VolatilityModel& model, double r) {
    return 2.0 * r / sigma_squared(model, 0.0);
}

double gamma_plus(const VolatilityModel& model, double r, const Tolerance& tol) {
    const double gm = gamma_minus(model, r);
    const double hm = h_max(model);
    // sigma(1 + gamma) must be defined, which restricts Frey to 1 + gamma < 1/mu.
    double hi = gm;
    if (1.0 + hi >= hm) {
        if (hm <= 1.0)
            throw NoBracketError("gamma_plus: sigma(1+gamma) undefined for every gamma > 0");
        hi = (hm - 1.0) * (1.0 - 1e-9);
    }
    auto g = [&](double gamma) {
        return gamma * sigma_squared(model, 1.0 + gamma) - 2.0 * r;
    };
    // g is increasing with g(0+) < 0; g(gamma-) >= 0 since sigma is
    // non-decreasing, and g -> +inf toward the Frey domain edge.
    while (g(hi) < 0.0) {
        const double next = std::isfinite(hm) ? hm - 1.0 - 0.5 * (hm - 1.0 - hi) : 2.0 * hi;
        if (!(next > hi) || next - hi < 1e-14 * next)
            throw NoBracketError("gamma_plus: failed to bracket the root");
        hi = next;
    }
    return find_root_monotone(g, 1e-12, hi, tol);
}

BoundsReport check_bounds(const VolatilityModel& model, const MarketParams& market,
                          const PriceCurve& curve, double slack) {
    BoundsReport report;
    const double r = market.rate;
    const MertonSolution lower_env = merton_from_gamma(gamma_minus(model, r), market);
    report.rho_upper = lower_env.rho_gamma;

    MertonSolution upper_env{0.0, 0.0, 0.0, 0.0};
    try {
        upper_env = merton_from_gamma(gamma_plus(model, r), market);
        report.upper_available = true;
        report.rho_lower = upper_env.rho_gamma;
    } catch (const NoBracketError&) {
        report.upper_available = false;
    }

    bool ok = curve.rho <= report.rho_upper + slack;
    if (report.upper_available) ok = ok && report.rho_lower - slack <= curve.rho;

    double worst_lo = std::numeric_limits<double>::infinity();
    double worst_hi = std::numeric_limits<double>::infinity();
    for (const auto& rec : curve.records) {
        worst_lo = std::min(worst_lo, rec.V - merton_value(lower_env, rec.S));
        if (report.upper_available)
            worst_hi = std::min(worst_hi, merton_value(upper_env, rec.S) - rec.V);
    }
    report.worst_lower_margin = worst_lo;
    report.worst_upper_margin = report.upper_available ? worst_hi : 0.0;
    ok = ok && worst_lo >= -slack;
    if (report.upper_available) ok = ok && worst_hi >= -slack;
    report.pass = ok;
    return report;
}

}  // namespace perpput
