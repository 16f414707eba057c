#include "perpput/pricer.hpp"

#include <algorithm>
#include <cmath>

namespace perpput {

namespace {

double value_integral(const VolatilityModel& model, double r, double U_star,
                      const Tolerance& tol) {
    return integrate(
               [&](double u) {
                   const double b = beta(model, u, tol);
                   return u / (u + r * b);
               },
               0.0, U_star, tol)
        .value;
}

// The value formulas multiply an integral in U by S/r, so the inner
// tolerances must be tightened by that factor to deliver tol on V itself.
Tolerance deamplified(const Tolerance& tol, double S, double r) {
    Tolerance inner = tol;
    inner.abs_tol = tol.abs_tol / std::max(1.0, S / r);
    return inner;
}

}  // namespace

double G(const VolatilityModel& model, const MarketParams& market, double rho,
         double U, const Tolerance& tol) {
    if (!(U > 0.0)) throw DomainError("G: U > 0 required (G(0+) = -inf)");
    const double r = market.rate;
    const double U0 = r * market.strike / rho;
    auto integrand = [&](double u) { return 1.0 / (u + r * beta(model, u, tol)); };
    if (U >= U0) return integrate(integrand, U0, U, tol).value;
    return -integrate(integrand, U, U0, tol).value;
}

std::vector<TransformedState> U_of_x_ode(const VolatilityModel& model,
                                         const MarketParams& market, double rho,
                                         double x_end, const Tolerance& tol) {
    const double x0 = std::log(rho);
    if (!(x_end >= x0)) throw DomainError("U_of_x_ode: x_end >= ln(rho) required");
    const double u0 = market.rate * market.strike / rho;
    const double r = market.rate;
    auto rhs = [&](double, double u) {
        const double uc = std::max(u, 0.0);
        return -uc - r * beta(model, uc, tol);
    };
    const auto traj = solve_ivp(rhs, x0, u0, x_end, tol);
    std::vector<TransformedState> out;
    out.reserve(traj.size());
    for (const auto& p : traj) out.push_back({p.x, p.u});
    return out;
}

double U_of_x_root(const VolatilityModel& model, const MarketParams& market,
                   double rho, double x, const Tolerance& tol) {
    const double x0 = std::log(rho);
    if (!(x >= x0)) throw DomainError("U_of_x_root: x >= ln(rho) required");
    const double U0 = market.rate * market.strike / rho;
    if (x == x0) return U0;

    const double target = -(x - x0);
    // beta(u) <= M1 u gives G(U) <= -ln(U0/U)/(1 + gamma-), so this U_lo
    // is guaranteed to satisfy G(U_lo) <= target.
    const double gamma_minus = 2.0 * market.rate / sigma_squared(model, 0.0);
    double u_lo = U0 * std::exp(-(1.0 + gamma_minus) * (x - x0));
    while (G(model, market, rho, u_lo, tol) > target) u_lo *= 0.5;

    return find_root_monotone(
        [&](double U) { return G(model, market, rho, U, tol) - target; }, u_lo, U0, tol);
}

double price(const VolatilityModel& model, const MarketParams& market, double rho,
             double S, const Tolerance& tol) {
    if (!(S > 0.0)) throw DomainError("price: S > 0 required");
    if (S <= rho) return market.strike - S;
    const Tolerance inner = deamplified(tol, S, market.rate);
    const double U_star = U_of_x_root(model, market, rho, std::log(S), inner);
    return S / market.rate * value_integral(model, market.rate, U_star, inner);
}

double price_h(const VolatilityModel& model, const MarketParams& market, double rho,
               double S, const Tolerance& tol) {
    if (!(S > rho)) throw DomainError("price_h: S > rho required");
    const double r = market.rate;
    const Tolerance inner = deamplified(tol, S, r);
    const double U_star = U_of_x_root(model, market, rho, std::log(S), inner);
    const double H_star = beta(model, U_star, inner);
    // f(H)/(f(H) + rH) reduced to (1/2)sigma^2 / ((1/2)sigma^2 + r), which is
    // regular at H = 0.
    const auto q = integrate(
        [&](double H) {
            const double half_s2 = 0.5 * sigma_squared(model, H);
            return forward_derivative(model, H) * half_s2 / (half_s2 + r);
        },
        0.0, H_star, inner);
    return S / r * q.value;
}

PriceCurve price_curve(const VolatilityModel& model, const MarketParams& market,
                       std::span<const double> s_grid, const Tolerance& tol) {
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        if (!(s_grid[i] > 0.0) || (i > 0 && !(s_grid[i] > s_grid[i - 1])))
            throw DomainError("price_curve: S grid must be positive and increasing");
    }
    const auto sol = solve_rho_u(model, market, tol);
    const double rho = sol.rho;
    const double r = market.rate;
    const double E = market.strike;

    auto rhs = [&](double, double u) {
        const double uc = std::max(u, 0.0);
        return -uc - r * beta(model, uc, tol);
    };

    PriceCurve curve{{}, rho, model, market};
    curve.records.reserve(s_grid.size());
    double x_cur = std::log(rho);
    double u_cur = r * E / rho;
    for (const double S : s_grid) {
        PriceRecord rec{S, 0.0, 0.0, 0.0};
        if (S <= rho) {
            // Exercise region: V is intrinsic, so U = rV/S - r V' = rE/S.
            rec.V = E - S;
            rec.U = r * E / S;
        } else {
            const double x = std::log(S);
            u_cur = solve_ivp(rhs, x_cur, u_cur, x, tol).back().u;
            x_cur = x;
            rec.U = u_cur;
            rec.V = S / r * value_integral(model, r, u_cur, deamplified(tol, S, r));
        }
        rec.H = beta(model, rec.U, tol);
        curve.records.push_back(rec);
    }
    return curve;
}

double pde_residual(const VolatilityModel& model, const MarketParams& market,
                    const PriceCurve& curve, std::size_t i) {
    const auto& rec = curve.records;
    if (i == 0 || i + 1 >= rec.size())
        throw GridError("pde_residual: interior grid index required");
    if (rec[i - 1].S < curve.rho)
        throw DomainError("pde_residual: stencil reaches into the exercise region");
    const double h1 = rec[i].S - rec[i - 1].S;
    const double h2 = rec[i + 1].S - rec[i].S;
    if (h1 > 1e-2 * rec[i].S || h2 > 1e-2 * rec[i].S)
        throw GridError("pde_residual: grid spacing exceeds 1e-2 * S");

    const double S = rec[i].S;
    const double V = rec[i].V;
    const double denom = h1 * h2 * (h1 + h2);
    const double Vp = (h1 * h1 * rec[i + 1].V + (h2 * h2 - h1 * h1) * V -
                       h2 * h2 * rec[i - 1].V) / denom;
    const double Vpp = 2.0 * (h1 * rec[i + 1].V - (h1 + h2) * V + h2 * rec[i - 1].V) / denom;
    const double H = S * Vpp;
    const double r = market.rate;
    return 0.5 * sigma_squared(model, std::max(H, 0.0)) * S * S * Vpp + r * S * Vp - r * V;
}

}  // namespace perpput
