#include "sasemt/solver/switch_detect.hpp"

#include <cmath>

#include "sasemt/series/power_series.hpp"

namespace sasemt::solver {

namespace {

/// Root of the quadratic through (a, fa), (m, fm), (b, fb) inside [a, b], if any.
std::optional<double> quadratic_root(double a, double fa, double m, double fm, double b, double fb) {
    // Newton form in s = t - a.
    const double h1 = m - a;
    const double h2 = b - a;
    const double d1 = (fm - fa) / h1;
    const double d2 = ((fb - fm) / (b - m) - d1) / h2;
    // q(s) = fa + d1 s + d2 s (s - h1) = d2 s^2 + (d1 - d2 h1) s + fa
    const double qa = d2;
    const double qb = d1 - d2 * h1;
    const double qc = fa;
    std::optional<double> best;
    auto consider = [&](double s) {
        if (std::isfinite(s) && s >= 0.0 && s <= h2 && (!best || s < *best)) {
            best = s;
        }
    };
    if (std::abs(qa) <= 1e-300 || std::abs(qa * h2) <= 1e-14 * std::abs(qb)) {
        if (qb != 0.0) {
            consider(-qc / qb);
        }
    } else {
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            // Stable pair of roots.
            const double qq = -0.5 * (qb + std::copysign(sq, qb));
            if (qq != 0.0) {
                consider(qq / qa);
                consider(qc / qq);
            } else {
                consider(0.0);
            }
        }
    }
    if (!best) {
        return std::nullopt;
    }
    return a + *best;
}

}  // namespace

std::optional<Crossing> detect_limit_switch(std::span<const double> coeffs, double limit,
                                            machine::Saturation direction, double dt, double eps_switch,
                                            int prescan) {
    if (direction == machine::Saturation::none || !(dt > 0.0)) {
        return std::nullopt;
    }
    const double sign = direction == machine::Saturation::upper ? 1.0 : -1.0;
    // g >= 0 means the limit is reached or passed.
    auto g = [&](double t) { return sign * (series::horner(coeffs, t) - limit); };

    double a = 0.0;
    double b = -1.0;
    double ga = g(0.0);
    if (ga >= 0.0) {
        return std::nullopt;  // already on the limit; handled at step start
    }
    for (int i = 1; i <= prescan; ++i) {
        const double t = dt * static_cast<double>(i) / static_cast<double>(prescan);
        const double gt = g(t);
        if (gt >= 0.0) {
            b = t;
            break;
        }
        a = t;
        ga = gt;
    }
    if (b < 0.0) {
        return std::nullopt;
    }
    while (b - a > eps_switch) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) {
            break;
        }
        if (g(mid) >= 0.0) {
            b = mid;
        } else {
            a = mid;
        }
    }
    Crossing c;
    c.a = a;
    c.b = b;
    const double mid = 0.5 * (a + b);
    const auto root = quadratic_root(a, g(a), mid, g(mid), b, g(b));
    if (root) {
        c.t = *root;
    } else {
        c.t = mid;
        c.bisection_fallback = true;
    }
    return c;
}

}  // namespace sasemt::solver
