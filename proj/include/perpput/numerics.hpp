#pragma once

#include <functional>
#include <vector>

#include "perpput/errors.hpp"

namespace perpput {

/// Accuracy contract shared by the quadrature, root-finding and ODE kernels.
struct Tolerance {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_iter = 200;

    void check() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_iter < 1)
            throw DomainError("Tolerance: abs_tol > 0, rel_tol > 0, max_iter >= 1 required");
    }
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
};

/// Adaptive Gauss(7)-Kronrod(15) quadrature of f over [a, b].
///
/// Bisects intervals whose embedded error estimate exceeds the local share
/// of max(abs_tol, rel_tol*|I|). Recursion depth is capped at 60 levels.
QuadratureResult integrate(const std::function<double(double)>& f,
                           double a, double b, const Tolerance& tol = {});

/// Root of a strictly monotone g on [lo, hi] with g(lo)*g(hi) <= 0.
///
/// Safeguarded secant with a bisection fallback; the bracket is never lost.
/// Terminates on |g(x)| <= abs_tol or bracket width <= rel_tol*|x| + abs_tol.
double find_root_monotone(const std::function<double(double)>& g,
                          double lo, double hi, const Tolerance& tol = {});

struct IvpPoint {
    double x;
    double u;
};

/// Explicit RK4 with step-doubling error control for u' = rhs(x, u).
///
/// Returns the accepted steps from x0 to x_end (inclusive endpoints).
std::vector<IvpPoint> solve_ivp(const std::function<double(double, double)>& rhs,
                                double x0, double u0, double x_end,
                                const Tolerance& tol = {});

}  // namespace perpput
