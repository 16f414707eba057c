#include "perpput/sensitivity.hpp"

#include <cmath>

namespace perpput {

SensitivityExpansion expansion(ModelFamily family, double sigma0,
                               const MarketParams& market, double power_law_a) {
    if (!(sigma0 > 0.0)) throw ModelError("expansion: sigma0 > 0 required");
    double a = 0.0;
    double mu_scale = 1.0;
    switch (family) {
        case ModelFamily::RAPM:
            a = 1.0 / 3.0;
            break;
        case ModelFamily::Frey:
        case ModelFamily::ModifiedFrey:
            a = 1.0;
            mu_scale = 2.0;
            break;
        case ModelFamily::AmsterLinear:
            a = 1.0;
            break;
        case ModelFamily::Constant:
            a = 0.0;
            break;
        case ModelFamily::PowerLaw:
            if (!(power_law_a >= 0.0)) throw ModelError("expansion: exponent a >= 0 required");
            a = power_law_a;
            break;
    }
    const double gamma = 2.0 * market.rate / (sigma0 * sigma0);
    const double E = market.strike;
    const double rho0 = E * gamma / (1.0 + gamma);
    const double drho = -mu_scale * E / (a + 1.0) * gamma * std::pow(1.0 + gamma, a - 2.0);
    return {rho0, drho, a, mu_scale};
}

double linear_approx(const SensitivityExpansion& exp, double mu) {
    return exp.rho0 + mu * exp.drho_dmu;
}

VolatilityModel family_model(ModelFamily family, double sigma0, double mu,
                             double power_law_a) {
    switch (family) {
        case ModelFamily::Frey:
            return Frey(sigma0, mu);
        case ModelFamily::ModifiedFrey:
            return ModifiedFrey(sigma0, mu, 10);
        case ModelFamily::RAPM:
            return RAPM(sigma0, mu);
        case ModelFamily::AmsterLinear:
            return AmsterLinear(sigma0, 0.0, mu);
        case ModelFamily::Constant:
            return Constant(sigma0 * std::sqrt(1.0 + mu));
        case ModelFamily::PowerLaw:
            if (power_law_a == 0.0) return Constant(sigma0 * std::sqrt(1.0 + mu));
            throw ModelError("family_model: power-law exponent a != 0 has no concrete model");
    }
    throw ModelError("family_model: unsupported family");
}

SensitivityReport validate_expansion(ModelFamily family, double sigma0,
                                     const MarketParams& market,
                                     std::span<const double> h_list,
                                     const Tolerance& tol) {
    SensitivityReport report{expansion(family, sigma0, market), 0.0, {}};
    auto rho_at = [&](double mu) {
        return solve_rho_u(family_model(family, sigma0, mu), market, tol).rho;
    };
    const double rho0 = report.expansion.rho0;

    for (const double h : h_list) {
        if (!(h > 0.0)) throw DomainError("validate_expansion: steps must be positive");
        const double rho_h = rho_at(h);
        const double lin = linear_approx(report.expansion, h);
        report.rows.push_back({h, rho_h, lin, rho_h - lin});
    }

    // One-sided differences only: mu < 0 leaves the model domain. Richardson
    // over (h, h/2) removes the leading O(h) error term.
    const double h = h_list.empty() ? 1e-4 : h_list.back();
    const double d1 = (rho_at(h) - rho0) / h;
    const double d2 = (rho_at(0.5 * h) - rho0) / (0.5 * h);
    report.observed_slope = 2.0 * d2 - d1;
    return report;
}

}  // namespace perpput
