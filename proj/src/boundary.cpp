#include "perpput/boundary.hpp"

#include <cmath>

namespace perpput {

namespace {

Tolerance inner_tolerance(const Tolerance& tol) {
    Tolerance inner = tol;
    // Quadrature must out-resolve the residual the root-finder targets.
    inner.abs_tol = 0.1 * tol.abs_tol;
    inner.rel_tol = 0.1 * tol.rel_tol;
    return inner;
}

void require_valid(const VolatilityModel& model) {
    const auto violations = validate(model);
    if (!violations.empty())
        throw ModelError("boundary: model failed admissibility: " + violations.front());
}

}  // namespace

double phi(const VolatilityModel& model, const MarketParams& market, double y,
           const Tolerance& tol) {
    if (!(y >= 0.0)) throw DomainError("phi: y >= 0 required");
    const double r = market.rate;
    const auto q = integrate(
        [&](double u) {
            const double b = beta(model, u, tol);
            return b / (u + r * b);
        },
        0.0, y, tol);
    return q.value;
}

FreeBoundarySolution solve_rho_u(const VolatilityModel& model, const MarketParams& market,
                                 const Tolerance& tol) {
    require_valid(model);
    const double r = market.rate;
    const double E = market.strike;
    const Tolerance quad_tol = inner_tolerance(tol);

    long evaluations = 0;
    int iterations = 0;
    auto residual = [&](double y) {
        ++iterations;
        const auto q = integrate(
            [&](double u) {
                const double b = beta(model, u, quad_tol);
                return b / (u + r * b);
            },
            0.0, y, quad_tol);
        evaluations += q.evaluations;
        return q.value - 1.0;
    };

    // Merton lower-envelope guess: phi(rE/rho_{gamma-}) <= 1 since beta <= beta-.
    // The lower endpoint starts at 0 (phi(0) = 0) so the bracket stays valid
    // even when the guess is exact up to quadrature noise (constant sigma).
    const double gamma_minus = 2.0 * r / sigma_squared(model, 0.0);
    double y_lo = 0.0;
    double y_hi = r * (1.0 + gamma_minus) / gamma_minus;
    while (residual(y_hi) < 0.0) {
        y_lo = y_hi;
        y_hi *= 2.0;
        if (y_hi > 1e12) throw BudgetError("solve_rho_u: bracket expansion failed");
    }

    double y_star = find_root_monotone(residual, y_lo, y_hi, tol);
    // Newton polish: phi'(y) = beta(y)/(y + r beta(y)) is available in closed
    // form, so the residual can be driven to the quadrature noise floor even
    // when the bracketed solve stops on interval width.
    for (int i = 0; i < 3; ++i) {
        const double res = residual(y_star);
        if (std::abs(res) <= 10.0 * quad_tol.abs_tol) break;
        const double b = beta(model, y_star, quad_tol);
        const double slope = b / (y_star + r * b);
        if (!(slope > 0.0) || !std::isfinite(slope)) break;
        y_star -= res / slope;
    }
    FreeBoundarySolution sol;
    sol.rho = r * E / y_star;
    sol.residual = residual(y_star);
    sol.method = BoundaryMethod::USpace;
    sol.iterations = iterations;
    sol.evaluations = evaluations;
    return sol;
}

FreeBoundarySolution solve_rho_h(const VolatilityModel& model, const MarketParams& market,
                                 const Tolerance& tol) {
    require_valid(model);
    const double r = market.rate;
    const double E = market.strike;
    const double hm = h_max(model);
    const Tolerance quad_tol = inner_tolerance(tol);

    long evaluations = 0;
    int iterations = 0;
    // Integrand f'(H)/((1/2) sigma(H)^2 + r), the H * ... / (... + rH) form
    // with the common factor H cancelled; regular at H = 0.
    auto residual = [&](double H_star) {
        ++iterations;
        const auto q = integrate(
            [&](double H) {
                return forward_derivative(model, H) / (0.5 * sigma_squared(model, H) + r);
            },
            0.0, H_star, quad_tol);
        evaluations += q.evaluations;
        return q.value - 1.0;
    };

    double hi = std::isfinite(hm) ? 0.5 * hm : 1.0;
    while (residual(hi) < 0.0) {
        hi = std::isfinite(hm) ? hm - 0.5 * (hm - hi) : 2.0 * hi;
        if (std::isfinite(hm) ? hm - hi < 1e-13 * hm : hi > 1e12)
            throw BudgetError("solve_rho_h: bracket expansion failed");
    }

    double H_star = find_root_monotone(residual, 0.0, hi, tol);
    // Newton polish with the analytic integrand as the derivative.
    for (int i = 0; i < 3; ++i) {
        const double res = residual(H_star);
        if (std::abs(res) <= 10.0 * quad_tol.abs_tol) break;
        const double slope =
            forward_derivative(model, H_star) / (0.5 * sigma_squared(model, H_star) + r);
        if (!(slope > 0.0) || !std::isfinite(slope)) break;
        double next = H_star - res / slope;
        if (std::isfinite(hm) && next >= hm) next = 0.5 * (H_star + hm);
        if (!(next > 0.0)) next = 0.5 * H_star;
        H_star = next;
    }
    FreeBoundarySolution sol;
    sol.rho = r * E / forward(model, H_star);
    sol.residual = residual(H_star);
    sol.method = BoundaryMethod::HSpace;
    sol.iterations = iterations;
    sol.evaluations = evaluations;
    return sol;
}

}  // namespace perpput
