#pragma once

#include <span>
#include <vector>

#include "perpput/boundary.hpp"

namespace perpput {

/// State of the transformed variable U(x) = r V/S - r dV/dS at x = ln S.
struct TransformedState {
    double x;
    double u;
};

struct PriceRecord {
    double S;
    double V;
    double U;  // transformed variable at ln S (0 in the exercise region)
    double H;  // beta(U)
};

struct PriceCurve {
    std::vector<PriceRecord> records;
    double rho = 0.0;
    VolatilityModel model;
    MarketParams market;
};

/// G(U) = int_{rE/rho}^{U} 1/(u + r beta(u)) du; increasing, G(rE/rho) = 0.
double G(const VolatilityModel& model, const MarketParams& market, double rho,
         double U, const Tolerance& tol = {});

/// Integrates dU/dx = -U - r beta(U) from x0 = ln rho, U(x0) = rE/rho.
std::vector<TransformedState> U_of_x_ode(const VolatilityModel& model,
                                         const MarketParams& market, double rho,
                                         double x_end, const Tolerance& tol = {});

/// U(x) = G^{-1}(-(x - x0)) by monotone root-finding on (0, rE/rho].
double U_of_x_root(const VolatilityModel& model, const MarketParams& market,
                   double rho, double x, const Tolerance& tol = {});

/// Put price V(S) = (S/r) int_0^{U(ln S)} u/(u + r beta(u)) du for S > rho,
/// intrinsic E - S for S <= rho.
double price(const VolatilityModel& model, const MarketParams& market, double rho,
             double S, const Tolerance& tol = {});

/// Same price through the H-substituted integral
///   V(S) = (S/r) int_0^{beta(U(ln S))} f(H) f'(H) / (f(H) + r H) dH.
double price_h(const VolatilityModel& model, const MarketParams& market, double rho,
               double S, const Tolerance& tol = {});

/// Solves the boundary once and marches the transform ODE once across the
/// grid, evaluating (S, V, U, H) at every grid point.
PriceCurve price_curve(const VolatilityModel& model, const MarketParams& market,
                       std::span<const double> s_grid, const Tolerance& tol = {});

/// Central finite-difference residual of the stationary equation
///   (1/2) sigma(S V'')^2 S^2 V'' + r S V' - r V
/// at interior grid index i of a computed curve.
double pde_residual(const VolatilityModel& model, const MarketParams& market,
                    const PriceCurve& curve, std::size_t i);

}  // namespace perpput
