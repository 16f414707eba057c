#pragma once

#include <span>

#include "perpput/boundary.hpp"

namespace perpput {

/// Model families whose forward map matches the normal form
///   (1/2) sigma(H)^2 H = (1/2) sigma0^2 (1 + mu_eff H^a) H + O(mu_eff^2),
/// with mu_eff = mu_scale * mu in the family's native parameter mu.
enum class ModelFamily { Constant, Frey, ModifiedFrey, RAPM, AmsterLinear, PowerLaw };

/// First-order expansion of the free boundary in the model parameter mu.
struct SensitivityExpansion {
    double rho0;      // boundary at mu = 0, E gamma/(1+gamma)
    double drho_dmu;  // d rho / d mu at 0, in the model's native mu
    double a;         // exponent of the normal form
    double mu_scale;  // native mu -> normal-form mu factor
};

/// rho(mu) = rho0 - mu (E/(a+1)) gamma (1+gamma)^(a-2) mu_scale + O(mu^2).
///
/// Family mappings: RAPM a = 1/3, scale 1; Frey and ModifiedFrey a = 1,
/// scale 2 (from (1 - mu H)^-2 = 1 + 2 mu H + O(mu^2)); AmsterLinear with
/// Le = 0 a = 1, scale 1 (native parameter kappa); Constant/PowerLaw(0)
/// a = 0, scale 1 (sigma^2 = sigma0^2 (1 + mu)); PowerLaw uses the caller's
/// exponent a directly.
SensitivityExpansion expansion(ModelFamily family, double sigma0,
                               const MarketParams& market, double power_law_a = 0.0);

/// rho0 + mu * drho_dmu.
double linear_approx(const SensitivityExpansion& exp, double mu);

struct SensitivityRow {
    double mu;
    double rho_exact;
    double rho_linear;
    double gap;
};

struct SensitivityReport {
    SensitivityExpansion expansion;
    double observed_slope = 0.0;  // Richardson-extrapolated forward difference
    std::vector<SensitivityRow> rows;
};

/// Computes exact rho(h) with the boundary solver for each step in h_list,
/// estimates the slope at mu = 0 by one-sided differences with Richardson
/// extrapolation over (h, h/2), and tabulates exact vs linear values.
SensitivityReport validate_expansion(ModelFamily family, double sigma0,
                                     const MarketParams& market,
                                     std::span<const double> h_list,
                                     const Tolerance& tol = {});

/// Concrete model instance of a family at native parameter mu
/// (PowerLaw is supported for a = 0 only, as Constant with sigma0^2 (1+mu)).
VolatilityModel family_model(ModelFamily family, double sigma0, double mu,
                             double power_law_a = 0.0);

}  // namespace perpput
