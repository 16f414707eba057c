#include "perpput/volatility.hpp"

#include <cmath>
#include <numbers>

namespace perpput {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& msg) {
    if (!ok) throw ModelError(msg);
}

}  // namespace

Constant::Constant(double sigma0_) : sigma0(sigma0_) {
    require(sigma0 > 0.0, "constant: sigma0 > 0 required");
}

Frey::Frey(double sigma0_, double mu_) : sigma0(sigma0_), mu(mu_) {
    require(sigma0 > 0.0, "frey: sigma0 > 0 required");
    require(mu >= 0.0, "frey: mu >= 0 required");
}

ModifiedFrey::ModifiedFrey(double sigma0_, double mu_, int truncation_)
    : sigma0(sigma0_), mu(mu_), truncation(truncation_) {
    require(sigma0 > 0.0, "modified-frey: sigma0 > 0 required");
    require(mu >= 0.0, "modified-frey: mu >= 0 required");
    require(truncation >= 1, "modified-frey: N >= 1 required");
}

RAPM::RAPM(double sigma0_, double mu_) : sigma0(sigma0_), mu(mu_) {
    require(sigma0 > 0.0, "rapm: sigma0 > 0 required");
    require(mu >= 0.0, "rapm: mu >= 0 required");
}

AmsterLinear::AmsterLinear(double sigma0_, double leland_, double kappa_)
    : sigma0(sigma0_), leland(leland_), kappa(kappa_) {
    require(sigma0 > 0.0, "amster: sigma0 > 0 required");
    require(leland >= 0.0 && leland < 1.0, "amster: Le in [0,1) required so that sigma(0)^2 > 0");
    require(kappa >= 0.0, "amster: kappa >= 0 required");
}

BaksteinHowison::BaksteinHowison(double sigma0_, double gamma_ba_, double lambda_, double alpha_)
    : sigma0(sigma0_), gamma_ba(gamma_ba_), lambda(lambda_), alpha(alpha_) {
    require(sigma0 > 0.0, "bakstein-howison: sigma0 > 0 required");
    require(gamma_ba >= 0.0, "bakstein-howison: gamma >= 0 required");
    require(lambda >= 0.0, "bakstein-howison: lambda >= 0 required");
    require(alpha >= 0.0 && alpha <= 1.0, "bakstein-howison: alpha in [0,1] required");
}

double BaksteinHowison::leland_number() const {
    return 2.0 * gamma_ba * std::sqrt(2.0 / std::numbers::pi);
}

double h_max(const VolatilityModel& model) {
    if (const auto* f = std::get_if<Frey>(&model))
        return f->mu > 0.0 ? 1.0 / f->mu : kInf;
    return kInf;
}

namespace {

void check_h(const VolatilityModel& model, double H) {
    if (!(H >= 0.0)) throw DomainError("volatility: H >= 0 required");
    if (H >= h_max(model))
        throw DomainError("volatility: H = " + std::to_string(H) +
                          " outside admissible range [0, " + std::to_string(h_max(model)) + ")");
}

// P(H) = 1 + sum_{n=1}^N (mu H)^n and its derivative, Horner form.
double mf_poly(const ModifiedFrey& m, double H) {
    const double z = m.mu * H;
    double p = 0.0;
    for (int n = 0; n < m.truncation; ++n) p = z * (1.0 + p);
    return 1.0 + p;
}

double mf_poly_derivative(const ModifiedFrey& m, double H) {
    const double z = m.mu * H;
    double d = 0.0;
    for (int n = m.truncation; n >= 1; --n) d = d * z + n;
    return m.mu * d;
}

// Coefficients of the Bakstein-Howison quadratic sigma^2/sigma0^2 = A + B H + C H^2.
struct BhCoeffs {
    double A, B, C;
};

BhCoeffs bh_coeffs(const BaksteinHowison& m) {
    const double s = std::sqrt(2.0 / std::numbers::pi);
    const double om = (1.0 - m.alpha) * (1.0 - m.alpha);
    return {1.0 + m.gamma_ba * m.gamma_ba * om + 2.0 * s * m.gamma_ba,
            2.0 * m.lambda + 2.0 * s * m.lambda * om * m.gamma_ba,
            m.lambda * m.lambda * om};
}

}  // namespace

double sigma_squared(const VolatilityModel& model, double H) {
    check_h(model, H);
    return std::visit(
        [H](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            const double s2 = m.sigma0 * m.sigma0;
            if constexpr (std::is_same_v<T, Constant>) {
                return s2;
            } else if constexpr (std::is_same_v<T, Frey>) {
                const double d = 1.0 - m.mu * H;
                return s2 / (d * d);
            } else if constexpr (std::is_same_v<T, ModifiedFrey>) {
                const double p = mf_poly(m, H);
                return s2 * p * p;
            } else if constexpr (std::is_same_v<T, RAPM>) {
                return s2 * (1.0 + m.mu * std::cbrt(H));
            } else if constexpr (std::is_same_v<T, AmsterLinear>) {
                return s2 * (1.0 - m.leland + m.kappa * H);
            } else {
                const BhCoeffs c = bh_coeffs(m);
                return s2 * (c.A + c.B * H + c.C * H * H);
            }
        },
        model);
}

double forward(const VolatilityModel& model, double H) {
    return 0.5 * sigma_squared(model, H) * H;
}

double forward_derivative(const VolatilityModel& model, double H) {
    check_h(model, H);
    return std::visit(
        [H](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            const double half = 0.5 * m.sigma0 * m.sigma0;
            if constexpr (std::is_same_v<T, Constant>) {
                return half;
            } else if constexpr (std::is_same_v<T, Frey>) {
                const double d = 1.0 - m.mu * H;
                return half * (1.0 + m.mu * H) / (d * d * d);
            } else if constexpr (std::is_same_v<T, ModifiedFrey>) {
                const double p = mf_poly(m, H);
                return half * (p * p + 2.0 * p * mf_poly_derivative(m, H) * H);
            } else if constexpr (std::is_same_v<T, RAPM>) {
                return half * (1.0 + 4.0 / 3.0 * m.mu * std::cbrt(H));
            } else if constexpr (std::is_same_v<T, AmsterLinear>) {
                return half * (1.0 - m.leland + 2.0 * m.kappa * H);
            } else {
                const BhCoeffs c = bh_coeffs(m);
                return half * (c.A + 2.0 * c.B * H + 3.0 * c.C * H * H);
            }
        },
        model);
}

double beta(const VolatilityModel& model, double u, const Tolerance& tol) {
    if (!(u >= 0.0)) throw DomainError("beta: u >= 0 required");
    if (u == 0.0) return 0.0;
    if (const auto* c = std::get_if<Constant>(&model))
        return 2.0 * u / (c->sigma0 * c->sigma0);

    const double hm = h_max(model);
    double hi = 2.0 * u / sigma_squared(model, 0.0);
    if (std::isfinite(hm)) hi = std::min(hi, hm * (1.0 - 1e-14));
    // Polynomial models can overflow at the generic bracket endpoint; shrink
    // until the forward map is representable (it stays >= u by monotonicity).
    while (!std::isfinite(forward(model, hi)) && forward(model, 0.5 * hi) >= u) hi *= 0.5;
    // sigma non-decreasing guarantees forward(2u/sigma(0)^2) >= u; widen
    // geometrically if a model ever violates that.
    while (forward(model, hi) < u) {
        hi = std::isfinite(hm) ? hm - 0.5 * (hm - hi) : 2.0 * hi;
        if (!(hi > 0.0) || !std::isfinite(forward(model, hi)))
            throw BudgetError("beta: failed to bracket the inverse at u = " + std::to_string(u));
    }
    const double scale = std::max(1.0, u);
    Tolerance inner = tol;
    inner.abs_tol = tol.abs_tol * scale;
    double H = find_root_monotone([&](double H) { return forward(model, H) - u; }, 0.0, hi, inner);

    // Newton polish with the analytic derivative. The bracketed solve can
    // stop on interval width alone, which leaves a residual proportional to
    // the local slope; a few Newton steps push it to rounding level so that
    // quadratures over beta are not tolerance-limited by inversion noise.
    for (int i = 0; i < 5; ++i) {
        const double res = forward(model, H) - u;
        if (std::abs(res) <= 8.0 * std::numeric_limits<double>::epsilon() * u) break;
        const double slope = forward_derivative(model, H);
        if (!(slope > 0.0) || !std::isfinite(slope)) break;
        double next = H - res / slope;
        if (!(next > 0.0)) next = 0.5 * H;
        if (std::isfinite(hm) && next >= hm) next = 0.5 * (H + hm);
        H = next;
    }
    return H;
}

std::vector<std::string> validate(const VolatilityModel& model) {
    std::vector<std::string> violations;
    const double s0sq = sigma_squared(model, 0.0);
    if (!(s0sq > 0.0)) violations.push_back("sigma(0)^2 = " + std::to_string(s0sq) + " is not positive");

    const double hm = h_max(model);
    const double lo = 1e-6;
    const double hi = std::isfinite(hm) ? hm * (1.0 - 1e-6) : 1e6;
    constexpr int kSamples = 200;
    double prev_s2 = s0sq;
    double prev_fwd = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        const double H = lo * std::pow(hi / lo, static_cast<double>(i) / (kSamples - 1));
        double s2 = 0.0, fw = 0.0;
        try {
            s2 = sigma_squared(model, H);
            fw = forward(model, H);
        } catch (const NumericsError& e) {
            violations.push_back(std::string("evaluation failed at H = ") + std::to_string(H) +
                                 ": " + e.what());
            break;
        }
        if (!std::isfinite(s2) || !std::isfinite(fw)) {
            violations.push_back("non-finite value at H = " + std::to_string(H));
            break;
        }
        if (s2 < prev_s2 * (1.0 - 1e-12))
            violations.push_back("sigma^2 decreases at H = " + std::to_string(H));
        if (fw <= prev_fwd)
            violations.push_back("forward map not strictly increasing at H = " + std::to_string(H));
        prev_s2 = s2;
        prev_fwd = fw;
    }
    return violations;
}

VolatilityModel make_model(const std::string& name,
                           const std::map<std::string, double>& params) {
    auto get = [&](const std::string& key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    const double sigma0 = get("sigma0", 0.3);
    if (name == "constant") return Constant(sigma0);
    if (name == "frey") return Frey(sigma0, get("mu", 0.0));
    if (name == "modified-frey")
        return ModifiedFrey(sigma0, get("mu", 0.0), static_cast<int>(get("N", 10)));
    if (name == "rapm") return RAPM(sigma0, get("mu", 0.0));
    if (name == "amster") return AmsterLinear(sigma0, get("Le", 0.0), get("kappa", 0.0));
    if (name == "bakstein-howison")
        return BaksteinHowison(sigma0, get("gamma", 0.0), get("lambda", 0.0), get("alpha", 0.0));
    throw ModelError("unknown model '" + name + "'");
}

std::string model_name(const VolatilityModel& model) {
    return std::visit(
        [](const auto& m) -> std::string {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Constant>) return "constant";
            else if constexpr (std::is_same_v<T, Frey>) return "frey";
            else if constexpr (std::is_same_v<T, ModifiedFrey>) return "modified-frey";
            else if constexpr (std::is_same_v<T, RAPM>) return "rapm";
            else if constexpr (std::is_same_v<T, AmsterLinear>) return "amster";
            else return "bakstein-howison";
        },
        model);
}

}  // namespace perpput
