#pragma once

#include "perpput/volatility.hpp"

namespace perpput {

struct MarketParams {
    double strike;  // E
    double rate;    // r

    MarketParams(double strike_, double rate_) : strike(strike_), rate(rate_) {
        if (!(strike > 0.0)) throw ModelError("market: strike E > 0 required");
        if (!(rate > 0.0)) throw ModelError("market: interest rate r > 0 required");
    }
};

enum class BoundaryMethod { USpace, HSpace };

struct FreeBoundarySolution {
    double rho = 0.0;       // early exercise boundary, 0 < rho < E
    double residual = 0.0;  // value of the implicit equation minus 1 at rho
    BoundaryMethod method = BoundaryMethod::USpace;
    int iterations = 0;
    long evaluations = 0;  // integrand evaluations spent in the solve
};

/// phi(y) = int_0^y beta(u) / (u + r beta(u)) du; strictly increasing,
/// phi(0) = 0. The free boundary satisfies phi(rE/rho) = 1.
double phi(const VolatilityModel& model, const MarketParams& market, double y,
           const Tolerance& tol = {});

/// Solves phi(rE/rho) = 1 for rho by monotone root-finding in y = rE/rho.
FreeBoundarySolution solve_rho_u(const VolatilityModel& model, const MarketParams& market,
                                 const Tolerance& tol = {});

/// Same boundary via the H-substituted integral
///   int_0^{H*} H f'(H) / (f(H) + r H) dH = 1,  f(H) = (1/2) sigma(H)^2 H,
/// solved for the upper limit H*; then rho = rE / f(H*). No beta inversion
/// appears in the integrand.
FreeBoundarySolution solve_rho_h(const VolatilityModel& model, const MarketParams& market,
                                 const Tolerance& tol = {});

}  // namespace perpput
