// Command-line front end: boundary, price, curve, table, sensitivity, validate.
//
// Exit codes: 0 success, 1 check failure, 2 invalid input/model,
// 3 numerical budget exceeded.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "perpput/merton.hpp"
#include "perpput/sensitivity.hpp"

using json = nlohmann::ordered_json;
using namespace perpput;

namespace {

struct CommonOpts {
    std::string model_name = "constant";
    double sigma0 = 0.3;
    double mu = 0.0;
    int truncation = 10;
    double leland = 0.0;
    double kappa = 0.0;
    double gamma_ba = 0.0;
    double lambda = 0.0;
    double alpha = 0.0;
    double strike = 100.0;
    double rate = 0.1;
    double tol = 1e-10;
    std::string format = "csv";
    std::string out_path;

    VolatilityModel model() const {
        return make_model(model_name,
                          {{"sigma0", sigma0},
                           {"mu", mu},
                           {"N", static_cast<double>(truncation)},
                           {"Le", leland},
                           {"kappa", kappa},
                           {"gamma", gamma_ba},
                           {"lambda", lambda},
                           {"alpha", alpha}});
    }
    MarketParams market() const { return MarketParams(strike, rate); }
    Tolerance tolerance() const { return Tolerance{tol, tol, 200}; }

    json config_json() const {
        return {{"model", model_name}, {"sigma0", sigma0},   {"mu", mu},
                {"N", truncation},     {"Le", leland},       {"kappa", kappa},
                {"gamma", gamma_ba},   {"lambda", lambda},   {"alpha", alpha},
                {"E", strike},         {"r", rate},          {"tol", tol}};
    }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--model", o.model_name,
                    "constant | frey | modified-frey | rapm | amster | bakstein-howison");
    cmd->add_option("--sigma0", o.sigma0, "base volatility");
    cmd->add_option("--mu", o.mu, "nonlinearity parameter");
    cmd->add_option("--N", o.truncation, "modified-frey series truncation");
    cmd->add_option("--Le", o.leland, "amster Leland number");
    cmd->add_option("--kappa", o.kappa, "amster slope");
    cmd->add_option("--gamma", o.gamma_ba, "bakstein-howison bid-ask parameter");
    cmd->add_option("--lambda", o.lambda, "bakstein-howison market depth");
    cmd->add_option("--alpha", o.alpha, "bakstein-howison price transform");
    cmd->add_option("--E", o.strike, "strike");
    cmd->add_option("--r", o.rate, "interest rate");
    cmd->add_option("--tol", o.tol, "absolute/relative tolerance");
    cmd->add_option("--format", o.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out_path, "output path (default stdout)");
    cmd->set_config("--config");
}

void emit(const CommonOpts& o, const std::string& text) {
    if (o.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(o.out_path);
        if (!f) throw std::runtime_error("cannot open output path " + o.out_path);
        f << text;
    }
}

void emit_json(const CommonOpts& o, const json& results, const json& checks) {
    json doc{{"config", o.config_json()}, {"results", results}, {"checks", checks}};
    emit(o, doc.dump(2) + "\n");
}

std::string fmt(double v, int decimals = 10) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

int run_boundary(const CommonOpts& o) {
    const auto model = o.model();
    const auto market = o.market();
    const auto u = solve_rho_u(model, market, o.tolerance());
    const auto h = solve_rho_h(model, market, o.tolerance());
    const double delta = std::abs(u.rho - h.rho);
    if (o.format == "json") {
        emit_json(o,
                  {{"rho", u.rho},
                   {"residual", u.residual},
                   {"method", "u-space"},
                   {"rho_h", h.rho},
                   {"agreement_delta", delta}},
                  {{"method_agreement", delta <= 1e-6 * market.strike}});
    } else {
        std::ostringstream s;
        s << "rho,residual,method,rho_h,agreement_delta\n"
          << fmt(u.rho) << "," << fmt(u.residual, 12) << ",u-space," << fmt(h.rho) << ","
          << fmt(delta, 12) << "\n";
        emit(o, s.str());
    }
    return 0;
}

int run_price(const CommonOpts& o, double S_query) {
    const auto model = o.model();
    const auto market = o.market();
    const double S = S_query > 0.0 ? S_query : market.strike;
    const auto sol = solve_rho_u(model, market, o.tolerance());
    const double v = price(model, market, sol.rho, S, o.tolerance());
    const double vh = S > sol.rho ? price_h(model, market, sol.rho, S, o.tolerance()) : v;
    if (o.format == "json") {
        emit_json(o,
                  {{"S", S}, {"rho", sol.rho}, {"V", v}, {"V_h", vh},
                   {"delta", std::abs(v - vh)}},
                  {{"method_agreement", std::abs(v - vh) <= 1e-6 * market.strike}});
    } else {
        std::ostringstream s;
        s << "S,rho,V,V_h,delta\n"
          << fmt(S, 6) << "," << fmt(sol.rho) << "," << fmt(v) << "," << fmt(vh) << ","
          << fmt(std::abs(v - vh), 12) << "\n";
        emit(o, s.str());
    }
    return 0;
}

int run_curve(const CommonOpts& o, double s_min, double s_max, int s_points,
              std::vector<double> s_list) {
    const auto model = o.model();
    const auto market = o.market();
    const auto sol = solve_rho_u(model, market, o.tolerance());
    if (s_list.empty()) {
        const double lo = s_min > 0.0 ? s_min : sol.rho;
        const double hi = s_max > 0.0 ? s_max : 3.0 * market.strike;
        if (s_points < 2 || !(hi > lo)) throw ModelError("curve: need s-max > s-min, s-points >= 2");
        for (int i = 0; i < s_points; ++i)
            s_list.push_back(lo + (hi - lo) * i / (s_points - 1));
    }
    const auto curve = price_curve(model, market, s_list, o.tolerance());

    const MertonSolution lower_env =
        merton_from_gamma(gamma_minus(model, market.rate), market);
    std::optional<MertonSolution> upper_env;
    try {
        upper_env = merton_from_gamma(gamma_plus(model, market.rate), market);
    } catch (const NoBracketError&) {
    }

    if (o.format == "json") {
        json rows = json::array();
        for (const auto& rec : curve.records) {
            json row{{"S", rec.S},
                     {"V", rec.V},
                     {"U", rec.U},
                     {"H", rec.H},
                     {"intrinsic", std::max(market.strike - rec.S, 0.0)},
                     {"merton_lo", merton_value(lower_env, rec.S)}};
            if (upper_env) row["merton_hi"] = merton_value(*upper_env, rec.S);
            rows.push_back(row);
        }
        emit_json(o, {{"rho", curve.rho}, {"points", rows}},
                  {{"upper_envelope_available", upper_env.has_value()}});
    } else {
        std::ostringstream s;
        s << "S,V,U,H,intrinsic,merton_lo,merton_hi\n";
        for (const auto& rec : curve.records) {
            s << fmt(rec.S, 6) << "," << fmt(rec.V) << "," << fmt(rec.U) << ","
              << fmt(rec.H) << "," << fmt(std::max(market.strike - rec.S, 0.0)) << ","
              << fmt(merton_value(lower_env, rec.S)) << ",";
            if (upper_env) s << fmt(merton_value(*upper_env, rec.S));
            s << "\n";
        }
        emit(o, s.str());
    }
    return 0;
}

int run_table(const CommonOpts& o, const std::vector<double>& mu_list) {
    const auto market = o.market();
    int exit_code = 0;
    json rows = json::array();
    std::ostringstream s;
    s << "mu,rho,V_at_E\n";
    for (const double mu : mu_list) {
        if (!(mu >= 0.0)) throw ModelError("table: mu values must be non-negative");
        try {
            CommonOpts row_opts = o;
            row_opts.mu = mu;
            const auto model = row_opts.model();
            const auto sol = solve_rho_u(model, market, o.tolerance());
            const double v = price(model, market, sol.rho, market.strike, o.tolerance());
            s << fmt(mu, 4) << "," << fmt(sol.rho, 4) << "," << fmt(v, 4) << "\n";
            rows.push_back({{"mu", mu}, {"rho", sol.rho}, {"V_at_E", v}});
        } catch (const NumericsError& e) {
            std::cerr << "warning: mu = " << mu << " failed: " << e.what() << "\n";
            s << fmt(mu, 4) << ",,\n";
            rows.push_back({{"mu", mu}, {"rho", nullptr}, {"V_at_E", nullptr}});
            exit_code = dynamic_cast<const BudgetError*>(&e) ? 3 : 2;
        }
    }
    if (o.format == "json")
        emit_json(o, {{"rows", rows}}, {{"all_rows_solved", exit_code == 0}});
    else
        emit(o, s.str());
    return exit_code;
}

ModelFamily family_of(const std::string& name) {
    if (name == "frey") return ModelFamily::Frey;
    if (name == "modified-frey") return ModelFamily::ModifiedFrey;
    if (name == "rapm") return ModelFamily::RAPM;
    if (name == "amster") return ModelFamily::AmsterLinear;
    if (name == "constant") return ModelFamily::Constant;
    if (name == "power-law") return ModelFamily::PowerLaw;
    throw ModelError("sensitivity: unsupported family '" + name + "'");
}

int run_sensitivity(const CommonOpts& o, std::vector<double> mu_grid, double a) {
    const auto market = o.market();
    const ModelFamily family = family_of(o.model_name);
    if (mu_grid.empty()) mu_grid = {0.001, 0.01, 0.05, 0.1};
    const auto report =
        validate_expansion(family, o.sigma0, market, mu_grid, o.tolerance());
    const auto& e = report.expansion;
    (void)a;

    if (o.format == "json") {
        json rows = json::array();
        for (const auto& row : report.rows)
            rows.push_back({{"mu", row.mu},
                            {"rho_exact", row.rho_exact},
                            {"rho_linear", row.rho_linear},
                            {"gap", row.gap}});
        emit_json(o,
                  {{"rho0", e.rho0},
                   {"drho_dmu", e.drho_dmu},
                   {"a", e.a},
                   {"mu_scale", e.mu_scale},
                   {"observed_slope", report.observed_slope},
                   {"rows", rows}},
                  {{"slope_relative_gap",
                    std::abs(report.observed_slope - e.drho_dmu) / std::abs(e.drho_dmu)}});
    } else {
        std::ostringstream s;
        s << "mu,rho_exact,rho_linear,gap,rho0,drho_dmu,a,mu_scale\n";
        for (const auto& row : report.rows)
            s << fmt(row.mu, 6) << "," << fmt(row.rho_exact, 6) << ","
              << fmt(row.rho_linear, 6) << "," << fmt(row.gap, 6) << "," << fmt(e.rho0, 6)
              << "," << fmt(e.drho_dmu, 6) << "," << fmt(e.a, 6) << ","
              << fmt(e.mu_scale, 6) << "\n";
        emit(o, s.str());
    }
    return 0;
}

int run_validate(const CommonOpts& o) {
    const auto model = o.model();
    const auto market = o.market();
    const Tolerance tol = o.tolerance();
    json checks;
    bool all_pass = true;

    const auto violations = validate(model);
    checks["model_admissible"] = violations.empty();
    if (!violations.empty()) checks["violations"] = violations;
    all_pass = all_pass && violations.empty();

    const auto u = solve_rho_u(model, market, tol);
    const auto h = solve_rho_h(model, market, tol);
    const double agreement = std::abs(u.rho - h.rho);
    checks["rho_agreement_delta"] = agreement;
    const bool agree = agreement <= 1e-6 * market.strike;
    checks["rho_agreement"] = agree;
    all_pass = all_pass && agree;

    // Smooth pasting: second-order one-sided difference just above rho.
    const double rho = u.rho;
    const double hstep = 1e-5 * rho;
    const double v0 = market.strike - rho;
    const double v1 = price(model, market, rho, rho + hstep, tol);
    const double v2 = price(model, market, rho, rho + 2.0 * hstep, tol);
    const double slope = (-3.0 * v0 + 4.0 * v1 - v2) / (2.0 * hstep);
    checks["smooth_pasting_slope"] = slope;
    const bool pasting = std::abs(slope + 1.0) <= 1e-4;
    checks["smooth_pasting"] = pasting;
    all_pass = all_pass && pasting;

    // PDE residual on a fine local grid around S = max(E, 1.5 rho).
    {
        const double S_mid = std::max(market.strike, 1.5 * rho);
        std::vector<double> grid;
        for (int i = -2; i <= 2; ++i) grid.push_back(S_mid * (1.0 + 1e-3 * i));
        const auto curve = price_curve(model, market, grid, tol);
        const double res = pde_residual(model, market, curve, 2);
        const double scale = market.rate * curve.records[2].V;
        checks["pde_residual_relative"] = std::abs(res) / scale;
        const bool ok = std::abs(res) <= 1e-3 * scale;
        checks["pde_residual"] = ok;
        all_pass = all_pass && ok;
    }

    // Comparison envelopes on a coarse grid.
    {
        std::vector<double> grid;
        for (int i = 0; i < 50; ++i)
            grid.push_back(rho + (4.0 * market.strike - rho) * i / 49.0);
        const auto curve = price_curve(model, market, grid, tol);
        const auto report = check_bounds(model, market, curve, 1e-6 * market.strike);
        checks["comparison_bounds"] = report.pass;
        checks["upper_envelope_available"] = report.upper_available;
        all_pass = all_pass && report.pass;
    }

    if (const auto* f = std::get_if<Frey>(&model); f && f->mu > 0.22)
        checks["advisory"] = "mu above the tabulated range for the frey model";

    emit_json(o, {{"rho", u.rho}, {"rho_h", h.rho}}, checks);
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Perpetual American put pricing under nonlinear volatility"};
    app.require_subcommand(1);

    CommonOpts opts;
    double S_query = -1.0;
    double s_min = -1.0, s_max = -1.0;
    int s_points = 100;
    std::vector<double> s_list, mu_list, mu_grid;
    double power_a = 0.0;

    auto* cmd_boundary = app.add_subcommand("boundary", "free boundary position");
    add_common(cmd_boundary, opts);

    auto* cmd_price = app.add_subcommand("price", "option price at a single S");
    add_common(cmd_price, opts);
    cmd_price->add_option("--S", S_query, "asset price (default E)");

    auto* cmd_curve = app.add_subcommand("curve", "price curve over an S grid");
    add_common(cmd_curve, opts);
    cmd_curve->add_option("--s-min", s_min, "grid start (default rho)");
    cmd_curve->add_option("--s-max", s_max, "grid end (default 3E)");
    cmd_curve->add_option("--s-points", s_points, "grid size");
    cmd_curve->add_option("--s-list", s_list, "explicit S values")->delimiter(',');

    auto* cmd_table = app.add_subcommand("table", "rho and V(E) over a mu sweep");
    add_common(cmd_table, opts);
    cmd_table->add_option("--mu-list", mu_list, "mu values")->delimiter(',');

    auto* cmd_sens = app.add_subcommand("sensitivity", "first-order boundary expansion");
    add_common(cmd_sens, opts);
    cmd_sens->add_option("--mu-grid", mu_grid, "mu values for the comparison table")
        ->delimiter(',');
    cmd_sens->add_option("--a", power_a, "power-law exponent");

    auto* cmd_validate = app.add_subcommand("validate", "admissibility and cross-checks");
    add_common(cmd_validate, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_boundary->parsed()) return run_boundary(opts);
        if (cmd_price->parsed()) return run_price(opts, S_query);
        if (cmd_curve->parsed()) return run_curve(opts, s_min, s_max, s_points, s_list);
        if (cmd_table->parsed()) return run_table(opts, mu_list);
        if (cmd_sens->parsed()) return run_sensitivity(opts, mu_grid, power_a);
        if (cmd_validate->parsed()) return run_validate(opts);
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
