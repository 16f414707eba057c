// Acceptance gate: one pass/fail line per criterion, exit 0 only if all pass.
//
// Reference values for the golden tables come from the published tabulation
// of the Frey, modified Frey (N = 10) and RAPM models at E = 100, r = 0.1,
// sigma0 = 0.3.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "perpput/merton.hpp"
#include "perpput/sensitivity.hpp"

using namespace perpput;
using clock_type = std::chrono::steady_clock;

namespace {

const MarketParams kMarket{100.0, 0.1};
int g_failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                detail.empty() ? "" : " — ", detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct TableRow {
    double mu;
    double rho;
    double v_at_e;
};

// Returns worst absolute deviation over the sweep (rho and V(E) jointly)
// and appends per-row deltas to the detail string.
double table_deviation(const std::function<VolatilityModel(double)>& make,
                       const std::vector<TableRow>& rows, std::string* detail) {
    double worst = 0.0;
    for (const auto& row : rows) {
        const auto model = make(row.mu);
        const auto sol = solve_rho_u(model, kMarket);
        const double v = price(model, kMarket, sol.rho, kMarket.strike);
        const double d_rho = std::abs(sol.rho - row.rho);
        const double d_v = std::abs(v - row.v_at_e);
        worst = std::max({worst, d_rho, d_v});
        if ((d_rho > 0.01 || d_v > 0.01) && detail) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "mu=%g: rho=%.4f (table %.4f), V=%.4f (table %.4f); ", row.mu,
                          sol.rho, row.rho, v, row.v_at_e);
            *detail += buf;
        }
    }
    return worst;
}

const std::vector<TableRow> kFreyTable = {
    {0.00, 68.9655, 13.5909}, {0.01, 68.2852, 13.8005}, {0.05, 65.7246, 14.6167},
    {0.10, 62.8036, 15.5961}, {0.15, 60.1175, 16.5389}, {0.20, 57.6177, 17.4510},
    {0.22, 56.6627, 17.8083}};

const std::vector<TableRow> kModFreyTable = {
    {0.0, 68.9655, 13.5909}, {0.1, 62.8037, 15.5961}, {0.5, 45.3007, 22.4529},
    {1.0, 31.0862, 29.5719}, {2.0, 16.3126, 41.0654}, {4.0, 8.3818, 56.1777},
    {8.0, 5.4556, 70.2259}};

const std::vector<TableRow> kRapmTable = {
    {0.0, 68.9655, 13.5909}, {0.1, 66.7331, 14.5761}, {0.5, 59.6973, 17.9398},
    {1.0, 53.3234, 21.3434}, {2.0, 44.5408, 26.6857}, {4.0, 34.0899, 34.3393},
    {8.0, 23.6125, 44.1774}};

void criterion_1() {
    const auto t0 = clock_type::now();
    const Constant m(0.3);
    const auto sol = solve_rho_u(m, kMarket);
    const double v = price(m, kMarket, sol.rho, 100.0);
    const double elapsed = seconds_since(t0);
    const double gamma = 20.0 / 9.0;
    const double rho_exact = 100.0 * gamma / (1.0 + gamma);
    const double v_exact = (100.0 / (1.0 + gamma));  // V(E) = E/(1+gamma) (E/rho)^-gamma
    const double v_closed = v_exact * std::pow(100.0 / rho_exact, -gamma);
    const bool pass = std::abs(sol.rho - rho_exact) <= 1e-4 &&
                      std::abs(v - v_closed) <= 1e-4 &&
                      std::abs(sol.rho - 68.9655) <= 0.01 &&
                      std::abs(v - 13.5909) <= 0.01 && elapsed < 0.1;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "rho=%.6f V(E)=%.6f in %.3fs", sol.rho, v, elapsed);
    report(1, "constant-volatility closed form", pass, buf);
}

void criterion_2() {
    const auto t0 = clock_type::now();
    std::string detail;
    const double worst = table_deviation(
        [](double mu) { return VolatilityModel(Frey(0.3, mu)); }, kFreyTable, &detail);
    const double elapsed = seconds_since(t0);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst deviation %.2e in %.2fs", worst, elapsed);
    report(2, "frey sweep vs published table", worst <= 0.01 && elapsed < 5.0,
           detail + buf);
}

void criterion_3() {
    std::string detail;
    const double worst = table_deviation(
        [](double mu) { return VolatilityModel(ModifiedFrey(0.3, mu, 10)); }, kModFreyTable,
        &detail);
    report(3, "modified frey sweep vs published table", worst <= 0.01, detail);
}

void criterion_4() {
    std::string detail;
    const double worst = table_deviation(
        [](double mu) { return VolatilityModel(RAPM(0.3, mu)); }, kRapmTable, &detail);
    report(4, "rapm sweep vs published table", worst <= 0.01, detail);
}

void criterion_5() {
    double worst_rho = 0.0, worst_price = 0.0;
    std::vector<VolatilityModel> models;
    for (const auto& row : kFreyTable) models.push_back(Frey(0.3, row.mu));
    for (const auto& row : kModFreyTable) models.push_back(ModifiedFrey(0.3, row.mu, 10));
    for (const auto& row : kRapmTable) models.push_back(RAPM(0.3, row.mu));
    for (const auto& m : models) {
        const auto u = solve_rho_u(m, kMarket);
        const auto h = solve_rho_h(m, kMarket);
        worst_rho = std::max(worst_rho, std::abs(u.rho - h.rho));
        for (const double S : {1.01 * u.rho, 100.0, 200.0}) {
            const double v = price(m, kMarket, u.rho, S);
            const double vh = price_h(m, kMarket, u.rho, S);
            worst_price = std::max(worst_price, std::abs(v - vh));
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max |rho_u - rho_h| = %.2e, max |V - V_h| = %.2e",
                  worst_rho, worst_price);
    report(5, "u-space and H-space formulations agree",
           worst_rho <= 1e-6 * kMarket.strike && worst_price <= 1e-6 * kMarket.strike, buf);
}

void criterion_6() {
    bool pass = true;
    std::string detail;
    for (const auto& m :
         std::vector<VolatilityModel>{Constant(0.3), Frey(0.3, 0.1), RAPM(0.3, 1.0)}) {
        const double rho = solve_rho_u(m, kMarket).rho;
        std::vector<double> grid;
        const int n = 2000;
        for (int i = 0; i < n; ++i)
            grid.push_back(rho + (4.0 * kMarket.strike - rho) * i / (n - 1));
        const auto curve = price_curve(m, kMarket, grid);

        // One-sided derivative at the boundary from the first three grid
        // values (second-order one-sided difference on the uniform grid).
        const double h = grid[1] - grid[0];
        const double slope = (-3.0 * curve.records[0].V + 4.0 * curve.records[1].V -
                              curve.records[2].V) / (2.0 * h);
        const bool pasting = std::abs(slope + 1.0) <= 1e-3;
        const bool matching = std::abs(curve.records[0].V - (kMarket.strike - rho)) <= 1e-8;

        bool residual_ok = true;
        double worst_rel = 0.0;
        for (const int idx : {2, 10, 50, 100, 200, 400, 700, 1000, 1400, 1800}) {
            const double res = pde_residual(m, kMarket, curve, idx);
            const double rel = std::abs(res) / (kMarket.rate * curve.records[idx].V);
            worst_rel = std::max(worst_rel, rel);
            residual_ok = residual_ok && rel <= 1e-3;
        }
        if (!(pasting && matching && residual_ok)) {
            pass = false;
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%s: slope=%.6f residual_rel=%.2e; ",
                          model_name(m).c_str(), slope, worst_rel);
            detail += buf;
        }
    }
    report(6, "smooth pasting and stationary-equation residual", pass, detail);
}

void criterion_7() {
    bool pass = true;
    std::string detail;
    for (const auto& m : std::vector<VolatilityModel>{Frey(0.3, 0.1), RAPM(0.3, 1.0)}) {
        const double rho = solve_rho_u(m, kMarket).rho;
        std::vector<double> grid;
        for (int i = 0; i < 100; ++i)
            grid.push_back(rho + (4.0 * kMarket.strike - rho) * i / 99.0);
        const auto curve = price_curve(m, kMarket, grid);
        const auto rep = check_bounds(m, kMarket, curve, 1e-6 * kMarket.strike);
        const bool ok = rep.pass && rep.upper_available &&
                        std::abs(rep.rho_upper - 68.9655) <= 1e-4 &&
                        rho >= rep.rho_lower - 1e-6 && rho <= rep.rho_upper + 1e-6;
        if (!ok) {
            pass = false;
            detail += model_name(m) + " envelope violated; ";
        }
    }
    report(7, "merton sub/super-solution envelopes", pass, detail);
}

void criterion_8() {
    bool pass = true;
    std::string detail;
    for (const auto family : {ModelFamily::RAPM, ModelFamily::Frey}) {
        const std::vector<double> hs = {1e-4};
        const auto rep = validate_expansion(family, 0.3, kMarket, hs);
        const double rel = std::abs(rep.observed_slope - rep.expansion.drho_dmu) /
                           std::abs(rep.expansion.drho_dmu);
        if (rel > 0.01) {
            pass = false;
            char buf[120];
            std::snprintf(buf, sizeof(buf), "family slope %.4f vs formula %.4f; ",
                          rep.observed_slope, rep.expansion.drho_dmu);
            detail += buf;
        }
    }
    for (const double mu : {0.0, 0.5, 1.0}) {
        const auto m = family_model(ModelFamily::Constant, 0.3, mu);
        const double rho = solve_rho_u(m, kMarket).rho;
        const double exact = 100.0 / (1.0 + 0.45 * (1.0 + mu));
        if (std::abs(rho - exact) > 1e-8) {
            pass = false;
            detail += "a=0 closed form mismatch; ";
        }
    }
    report(8, "first-order boundary sensitivity", pass, detail);
}

void criterion_9() {
    const std::vector<VolatilityModel> variants = {
        Constant(0.3),        Frey(0.3, 0.1),
        ModifiedFrey(0.3, 0.5, 10), RAPM(0.3, 1.0),
        AmsterLinear(0.3, 0.2, 0.1), BaksteinHowison(0.3, 0.1, 0.2, 0.5)};
    bool pass = true;
    std::string detail;
    for (const auto& m : variants) {
        const double M1 = 2.0 / sigma_squared(m, 0.0);
        double prev = -1.0;
        for (int i = 0; i < 50; ++i) {
            const double u = 1e-6 * std::pow(1e9, i / 49.0);
            const double b = beta(m, u);
            const bool ok = std::abs(forward(m, b) - u) <= 1e-9 * std::max(1.0, u) &&
                            b > prev && b <= M1 * u * (1.0 + 1e-12);
            if (!ok) {
                pass = false;
                detail += model_name(m) + " beta invariant failed; ";
                break;
            }
            prev = b;
        }
    }
    const Constant ref(0.3);
    const std::vector<VolatilityModel> degenerate = {
        Frey(0.3, 0.0), ModifiedFrey(0.3, 0.0, 10), RAPM(0.3, 0.0),
        AmsterLinear(0.3, 0.0, 0.0), BaksteinHowison(0.3, 0.0, 0.0, 0.5)};
    for (const auto& m : degenerate) {
        for (int i = 0; i < 50; ++i) {
            const double H = 1e-6 * std::pow(1e9, i / 49.0);
            if (std::abs(sigma_squared(m, H) - sigma_squared(ref, H)) > 1e-12 * 0.09) {
                pass = false;
                detail += model_name(m) + " degenerate mismatch; ";
                break;
            }
        }
    }
    report(9, "volatility inverse-map property suite", pass, detail);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
