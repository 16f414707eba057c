#pragma once

#include <limits>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "perpput/numerics.hpp"

namespace perpput {

// Volatility models sigma(H)^2 with H = S * d2V/dS2 >= 0 (puts are convex,
// so sgn(H) = 1 and |H| = H throughout).

struct Constant {
    double sigma0;
    explicit Constant(double sigma0_);
};

/// sigma^2 = sigma0^2 (1 - mu H)^-2, admissible for H < 1/mu.
struct Frey {
    double sigma0;
    double mu;
    Frey(double sigma0_, double mu_);
};

/// sigma^2 = sigma0^2 (1 + sum_{n=1}^N mu^n H^n)^2, a polynomial
/// approximation of the Frey model valid for every H >= 0.
struct ModifiedFrey {
    double sigma0;
    double mu;
    int truncation;
    ModifiedFrey(double sigma0_, double mu_, int truncation_ = 10);
};

/// sigma^2 = sigma0^2 (1 + mu H^(1/3)), risk adjusted pricing methodology.
struct RAPM {
    double sigma0;
    double mu;
    RAPM(double sigma0_, double mu_);
};

/// sigma^2 = sigma0^2 (1 - Le + kappa H); requires Le < 1 so sigma(0) > 0.
struct AmsterLinear {
    double sigma0;
    double leland;
    double kappa;
    AmsterLinear(double sigma0_, double leland_, double kappa_);
};

/// sigma^2 quadratic in H (liquidity/market-depth model):
/// sigma0^2 (1 + g^2(1-a)^2 + 2 sqrt(2/pi) g + (2l + 2 sqrt(2/pi) l (1-a)^2 g) H
///           + l^2 (1-a)^2 H^2).
struct BaksteinHowison {
    double sigma0;
    double gamma_ba;
    double lambda;
    double alpha;
    BaksteinHowison(double sigma0_, double gamma_ba_, double lambda_, double alpha_);

    /// Relative bid-ask spread expressed as a Leland number, 2*gamma*sqrt(2/pi).
    double leland_number() const;
};

using VolatilityModel =
    std::variant<Constant, Frey, ModifiedFrey, RAPM, AmsterLinear, BaksteinHowison>;

/// Upper limit of the admissible H range (1/mu for Frey, +inf otherwise).
double h_max(const VolatilityModel& model);

/// sigma(H)^2 for admissible H >= 0.
double sigma_squared(const VolatilityModel& model, double H);

/// Forward map u = (1/2) sigma(H)^2 H; strictly increasing on [0, h_max).
double forward(const VolatilityModel& model, double H);

/// Analytic derivative (1/2) d/dH [sigma(H)^2 H].
double forward_derivative(const VolatilityModel& model, double H);

/// Inverse of the forward map: forward(beta(u)) = u, beta(0) = 0.
///
/// Constant volatility uses the closed form 2u/sigma0^2; other models invert
/// numerically on the bracket [0, 2u/sigma(0)^2] (clamped below h_max).
double beta(const VolatilityModel& model, double u, const Tolerance& tol = {});

/// Samples sigma^2 and the forward map over the admissible range and reports
/// any violation of the admissibility assumptions (monotone sigma^2,
/// sigma(0)^2 > 0, forward strictly increasing, finite values).
std::vector<std::string> validate(const VolatilityModel& model);

/// Builds a model from a name and a key-value parameter block
/// (keys: sigma0, mu, N, Le, kappa, gamma, lambda, alpha).
VolatilityModel make_model(const std::string& name,
                           const std::map<std::string, double>& params);

/// Short tag of the active variant ("constant", "frey", ...).
std::string model_name(const VolatilityModel& model);

}  // namespace perpput
