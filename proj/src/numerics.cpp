#include "perpput/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace perpput {

namespace {

// Gauss(7)-Kronrod(15) abscissae and weights on [-1, 1] (QUADPACK dqk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
    double kronrod;
    double err;
};

PanelResult gk15_panel(const std::function<double(double)>& f, double a, double b,
                       long& evaluations) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    auto eval = [&](double x) {
        const double v = f(x);
        ++evaluations;
        if (!std::isfinite(v))
            throw NonFiniteError("integrate: integrand non-finite at x = " + std::to_string(x));
        return v;
    };

    const double fc = eval(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double fsum = eval(c - h * kXgk[j]) + eval(c + h * kXgk[j]);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    // The Gauss/Kronrod difference is a conservative local error estimate.
    const double err = std::abs(resk - resg) * std::abs(h);
    return {resk * h, err};
}

constexpr std::size_t kMaxPanels = 4096;

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f,
                           double a, double b, const Tolerance& tol) {
    tol.check();
    if (!(a <= b)) throw DomainError("integrate: requires a <= b");
    QuadratureResult acc;
    if (a == b) return acc;

    struct Panel {
        double a, b, value, err;
    };
    const auto by_error = [](const Panel& x, const Panel& y) { return x.err < y.err; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(by_error)> heap(by_error);

    const PanelResult first = gk15_panel(f, a, b, acc.evaluations);
    double total = first.kronrod;
    double err = first.err;
    heap.push({a, b, first.kronrod, first.err});

    // Global strategy: split the panel with the largest error estimate until
    // the summed estimate meets the tolerance. This keeps work proportional
    // to the difficulty of the integrand (e.g. endpoint singularities in the
    // derivative) instead of fanning out across already-converged regions.
    while (err > std::max(tol.abs_tol, tol.rel_tol * std::abs(total))) {
        if (heap.size() >= kMaxPanels)
            throw BudgetError("integrate: panel budget exhausted without meeting tolerance");
        const Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) break;  // width at rounding limit
        heap.pop();
        const PanelResult left = gk15_panel(f, worst.a, mid, acc.evaluations);
        const PanelResult right = gk15_panel(f, mid, worst.b, acc.evaluations);
        total += left.kronrod + right.kronrod - worst.value;
        err += left.err + right.err - worst.err;
        heap.push({worst.a, mid, left.kronrod, left.err});
        heap.push({mid, worst.b, right.kronrod, right.err});
    }
    acc.value = total;
    acc.error_estimate = err;
    return acc;
}

double find_root_monotone(const std::function<double(double)>& g,
                          double lo, double hi, const Tolerance& tol) {
    tol.check();
    if (!(lo <= hi)) std::swap(lo, hi);
    double flo = g(lo);
    double fhi = g(hi);
    if (!std::isfinite(flo) || !std::isfinite(fhi))
        throw NonFiniteError("find_root_monotone: non-finite endpoint value");
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0)
        throw NoBracketError("find_root_monotone: g(lo) and g(hi) have the same sign");

    double x = lo, fx = flo;
    for (int it = 0; it < tol.max_iter; ++it) {
        // Secant candidate, clipped into the open bracket; bisection fallback.
        double cand = hi - fhi * (hi - lo) / (fhi - flo);
        const double width = hi - lo;
        if (!std::isfinite(cand) || cand <= lo + 0.01 * width || cand >= hi - 0.01 * width)
            cand = lo + 0.5 * width;
        x = cand;
        fx = g(x);
        if (!std::isfinite(fx))
            throw NonFiniteError("find_root_monotone: non-finite value at x = " + std::to_string(x));
        if (fx == 0.0) return x;
        if (flo * fx < 0.0) {
            hi = x;
            fhi = fx;
        } else {
            lo = x;
            flo = fx;
        }
        if (std::abs(fx) <= tol.abs_tol) return x;
        if (hi - lo <= tol.rel_tol * std::abs(x) + tol.abs_tol)
            return 0.5 * (lo + hi);
    }
    throw BudgetError("find_root_monotone: max_iter reached, bracket width " +
                      std::to_string(hi - lo));
}

namespace {

double rk4_step(const std::function<double(double, double)>& rhs,
                double x, double u, double h) {
    const double k1 = rhs(x, u);
    const double k2 = rhs(x + 0.5 * h, u + 0.5 * h * k1);
    const double k3 = rhs(x + 0.5 * h, u + 0.5 * h * k2);
    const double k4 = rhs(x + h, u + h * k3);
    return u + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

std::vector<IvpPoint> solve_ivp(const std::function<double(double, double)>& rhs,
                                double x0, double u0, double x_end,
                                const Tolerance& tol) {
    tol.check();
    if (!(x_end >= x0)) throw DomainError("solve_ivp: requires x_end >= x0");

    std::vector<IvpPoint> out;
    out.push_back({x0, u0});
    if (x_end == x0) return out;

    double x = x0, u = u0;
    double h = std::min(1e-2 * (x_end - x0) + 1e-12, x_end - x0);
    constexpr long kMaxSteps = 1000000;
    long steps = 0;
    while (x < x_end) {
        if (++steps > kMaxSteps)
            throw BudgetError("solve_ivp: step budget exhausted");
        h = std::min(h, x_end - x);
        const double u_full = rk4_step(rhs, x, u, h);
        const double u_half = rk4_step(rhs, x + 0.5 * h, rk4_step(rhs, x, u, 0.5 * h), 0.5 * h);
        if (!std::isfinite(u_full) || !std::isfinite(u_half))
            throw NonFiniteError("solve_ivp: non-finite state at x = " + std::to_string(x));
        const double err = std::abs(u_half - u_full) / 15.0;
        // Error per unit step: local budgets sum to the global tolerance
        // over the whole interval, keeping the accumulated error at target
        // even for growing solutions.
        const double target = std::max(tol.abs_tol, tol.rel_tol * std::abs(u_half)) * h /
                              (x_end - x0);
        if (err <= target) {
            x += h;
            // Local extrapolation: the two-half-step value plus its error estimate.
            u = u_half + (u_half - u_full) / 15.0;
            out.push_back({x, u});
        }
        const double shrink = err > 0.0 ? 0.9 * std::pow(target / err, 0.2) : 5.0;
        h *= std::clamp(shrink, 0.2, 5.0);
        if (h < 1e-14 * (x_end - x0))
            throw BudgetError("solve_ivp: step size underflow");
    }
    return out;
}

}  // namespace perpput
