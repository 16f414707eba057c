#pragma once

#include "perpput/pricer.hpp"

namespace perpput {

/// Closed-form constant-volatility perpetual put with exponent gamma = 2r/sigma0^2.
struct MertonSolution {
    double gamma;      // dimensionless exponent
    double rho_gamma;  // E * gamma / (1 + gamma)
    double sigma0;
    double strike;
};

/// Merton solution for constant volatility sigma0.
MertonSolution merton_solution(double sigma0, const MarketParams& market);

/// Merton solution for a given exponent gamma (sigma0^2 = 2r/gamma).
MertonSolution merton_from_gamma(double gamma, const MarketParams& market);

/// V_gamma(S): E/(1+gamma) (S/rho_gamma)^-gamma above the boundary,
/// intrinsic E - S below.
double merton_value(const MertonSolution& sol, double S);

/// Lower-envelope exponent gamma- = 2r/sigma(0)^2.
double gamma_minus(const VolatilityModel& model, double r);

/// Upper-envelope exponent: the unique root of gamma * sigma(1+gamma)^2 = 2r.
///
/// Throws NoBracketError when sigma(1+gamma) is undefined for every
/// candidate gamma (Frey with 1 + gamma >= 1/mu).
double gamma_plus(const VolatilityModel& model, double r, const Tolerance& tol = {});

struct BoundsReport {
    bool pass = false;
    bool upper_available = false;
    double rho_lower = 0.0;        // rho_{gamma+} when available
    double rho_upper = 0.0;        // rho_{gamma-}
    double worst_lower_margin = 0.0;  // min over grid of V - V_{gamma-}
    double worst_upper_margin = 0.0;  // min over grid of V_{gamma+} - V
};

/// Checks V_{gamma-} <= V <= V_{gamma+} on the curve's grid and
/// rho_{gamma+} <= rho <= rho_{gamma-}, within the given slack.
BoundsReport check_bounds(const VolatilityModel& model, const MarketParams& market,
                          const PriceCurve& curve, double slack);

}  // namespace perpput
