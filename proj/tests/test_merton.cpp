#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "perpput/merton.hpp"

using namespace perpput;

namespace {
const MarketParams kMarket{100.0, 0.1};
constexpr double kGamma = 20.0 / 9.0;
}  // namespace

TEST_CASE("merton_solution: boundary and value matching") {
    const auto sol = merton_solution(0.3, kMarket);
    CHECK(sol.gamma == doctest::Approx(kGamma).epsilon(1e-14));
    CHECK(sol.rho_gamma == doctest::Approx(100.0 * kGamma / (1.0 + kGamma)).epsilon(1e-14));
    CHECK(merton_value(sol, 100.0) == doctest::Approx(13.5909).epsilon(1e-5));
    CHECK(merton_value(sol, sol.rho_gamma) ==
          doctest::Approx(100.0 - sol.rho_gamma).epsilon(1e-12));
    CHECK(merton_value(sol, 1e7) < 1e-8);
}

TEST_CASE("merton_value: smooth pasting of the closed form") {
    const auto sol = merton_solution(0.3, kMarket);
    const double h = 1e-7 * sol.rho_gamma;
    const double right = (merton_value(sol, sol.rho_gamma + h) -
                          merton_value(sol, sol.rho_gamma)) / h;
    const double left = (merton_value(sol, sol.rho_gamma) -
                         merton_value(sol, sol.rho_gamma - h)) / h;
    CHECK(right == doctest::Approx(-1.0).epsilon(1e-5));
    CHECK(left == doctest::Approx(-1.0).epsilon(1e-5));
}

TEST_CASE("merton_value: convex and decreasing") {
    const auto sol = merton_solution(0.3, kMarket);
    double prev_v = merton_value(sol, 10.0);
    double prev_slope = -std::numeric_limits<double>::infinity();
    for (double S = 15.0; S <= 400.0; S += 5.0) {
        const double v = merton_value(sol, S);
        const double slope = (v - prev_v) / 5.0;
        CHECK(v < prev_v);
        CHECK(slope >= prev_slope - 1e-12);
        prev_v = v;
        prev_slope = slope;
    }
}

TEST_CASE("gamma_minus: depends only on sigma(0)") {
    for (double mu : {0.0, 0.05, 0.22})
        CHECK(gamma_minus(Frey(0.3, mu), 0.1) == doctest::Approx(kGamma).epsilon(1e-14));
    CHECK(gamma_minus(Constant(0.3), 0.1) == doctest::Approx(2.2222).epsilon(1e-4));
    // sigma(0)^2 = sigma0^2 (1 - Le) = 0.09 * 0.81.
    CHECK(gamma_minus(AmsterLinear(0.3, 0.19, 0.1), 0.1) ==
          doctest::Approx(0.2 / (0.09 * 0.81)).epsilon(1e-12));
    CHECK(gamma_minus(AmsterLinear(0.3, 0.19, 0.1), 0.1) ==
          doctest::Approx(2.7435).epsilon(1e-4));
}

TEST_CASE("gamma_plus: constant volatility gives gamma- again") {
    CHECK(gamma_plus(Constant(0.3), 0.1) == doctest::Approx(kGamma).epsilon(1e-9));
    // sigma = 0.6 constant: gamma = 2r/sigma^2 = 0.5556.
    CHECK(gamma_plus(Constant(0.6), 0.1) == doctest::Approx(0.5556).epsilon(1e-3));
}

TEST_CASE("gamma_plus: residual oracle and ordering") {
    for (const auto& m : std::vector<VolatilityModel>{Frey(0.3, 0.05), Frey(0.3, 0.1),
                                                      RAPM(0.3, 1.0),
                                                      AmsterLinear(0.3, 0.2, 0.5)}) {
        const double gp = gamma_plus(m, 0.1);
        CHECK(std::abs(gp * sigma_squared(m, 1.0 + gp) - 0.2) <= 1e-10);
        CHECK(gp <= gamma_minus(m, 0.1) + 1e-12);
        CHECK(gp > 0.0);
    }
}

TEST_CASE("gamma_plus: unavailable when sigma(1+gamma) is undefined") {
    // Frey with mu >= 1 has h_max <= 1, so 1 + gamma is never admissible.
    CHECK_THROWS_AS(gamma_plus(Frey(0.3, 1.5), 0.1), NoBracketError);
}

TEST_CASE("envelope ordering: lower gamma gives the higher merton value") {
    const auto lo = merton_from_gamma(0.555, kMarket);
    const auto hi = merton_from_gamma(2.222, kMarket);
    for (double S = 10.0; S <= 400.0; S += 10.0)
        CHECK(merton_value(hi, S) <= merton_value(lo, S) + 1e-12);
    CHECK(hi.rho_gamma >= lo.rho_gamma);
}

TEST_CASE("check_bounds: constant model collapses the envelope") {
    const Constant m(0.3);
    std::vector<double> grid;
    const double rho = solve_rho_u(m, kMarket).rho;
    for (int i = 0; i < 40; ++i) grid.push_back(rho + (400.0 - rho) * i / 39.0);
    const auto curve = price_curve(m, kMarket, grid);
    const auto report = check_bounds(m, kMarket, curve, 1e-6 * kMarket.strike);
    CHECK(report.pass);
    CHECK(report.upper_available);
    CHECK(report.rho_lower == doctest::Approx(report.rho_upper).epsilon(1e-9));
}

TEST_CASE("check_bounds: frey and rapm curves sit inside the envelopes") {
    for (const auto& m : std::vector<VolatilityModel>{Frey(0.3, 0.1), RAPM(0.3, 1.0)}) {
        const double rho = solve_rho_u(m, kMarket).rho;
        std::vector<double> grid;
        for (int i = 0; i < 100; ++i) grid.push_back(rho + (400.0 - rho) * i / 99.0);
        const auto curve = price_curve(m, kMarket, grid);
        const auto report = check_bounds(m, kMarket, curve, 1e-6 * kMarket.strike);
        CHECK(report.pass);
        CHECK(report.upper_available);
        CHECK(curve.rho >= report.rho_lower - 1e-9);
        CHECK(curve.rho <= report.rho_upper + 1e-9);
        CHECK(report.rho_upper == doctest::Approx(68.9655).epsilon(1e-6));
    }
}
