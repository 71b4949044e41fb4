#include "sasemt/series/power_series.hpp"

#include <cmath>
#include <string>

#include "sasemt/error.hpp"

namespace sasemt::series {

namespace {

void check_order(int order) {
    if (order < 0 || order > kMaxOrder) {
        throw ParameterError("series order " + std::to_string(order) + " outside [0, " +
                             std::to_string(kMaxOrder) + "]");
    }
}

}  // namespace

PowerSeries::PowerSeries(int order, double t0) : t0_(t0) {
    check_order(order);
    coeffs_.assign(static_cast<std::size_t>(order) + 1, 0.0);
}

PowerSeries::PowerSeries(std::vector<double> coeffs, double t0) : coeffs_(std::move(coeffs)), t0_(t0) {
    if (coeffs_.empty()) {
        throw ParameterError("power series needs at least one coefficient");
    }
    check_order(order());
}

PowerSeries PowerSeries::constant(double c, int order, double t0) {
    PowerSeries out(order, t0);
    out.coeffs_[0] = c;
    return out;
}

double PowerSeries::eval(double dt) const noexcept { return horner(coeffs_, dt); }

double PowerSeries::derivative_eval(double dt) const noexcept { return horner_derivative(coeffs_, dt); }

void PowerSeries::check_finite(std::string_view what) const {
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (!std::isfinite(coeffs_[k])) {
            throw DivergenceError("non-finite coefficient in " + std::string(what) + " at order " +
                                      std::to_string(k),
                                  std::string(what), static_cast<int>(k));
        }
    }
}

double cauchy_at(std::span<const double> g, std::span<const double> h, std::size_t k) noexcept {
    double acc = 0.0;
    for (std::size_t m = 0; m <= k; ++m) {
        acc += g[m] * h[k - m];
    }
    return acc;
}

double horner(std::span<const double> c, double dt) noexcept {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) {
        acc = acc * dt + c[k];
    }
    return acc;
}

double horner_derivative(std::span<const double> c, double dt) noexcept {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) {
        acc = acc * dt + static_cast<double>(k) * c[k];
    }
    return acc;
}

std::pair<double, double> sincos_at(std::span<const double> h, std::span<const double> sin_h,
                                    std::span<const double> cos_h, std::size_t k) {
    if (k == 0) {
        throw ParameterError("sin/cos recursion starts at order 1; seed order 0 directly");
    }
    const double inv_k = 1.0 / static_cast<double>(k);
    double f = 0.0;
    double g = 0.0;
    for (std::size_t m = 0; m < k; ++m) {
        const double w = static_cast<double>(k - m) * inv_k * h[k - m];
        f += w * cos_h[m];
        g -= w * sin_h[m];
    }
    return {f, g};
}

double sqrt_at(std::span<const double> s, std::span<const double> f, std::size_t k) noexcept {
    double acc = s[k];
    for (std::size_t m = 1; m < k; ++m) {
        acc -= f[m] * f[k - m];
    }
    return acc / (2.0 * f[0]);
}

double sum_of_squares_at(std::span<const double> g, std::span<const double> h, std::size_t k) noexcept {
    double acc = 0.0;
    for (std::size_t m = 0; m <= k; ++m) {
        acc += g[m] * g[k - m] + h[m] * h[k - m];
    }
    return acc;
}

void require_same_shape(const PowerSeries& a, const PowerSeries& b, std::string_view op) {
    if (a.order() != b.order()) {
        throw OrderMismatchError(std::string(op) + ": order " + std::to_string(a.order()) + " vs " +
                                 std::to_string(b.order()));
    }
    if (a.t0() != b.t0()) {
        throw OrderMismatchError(std::string(op) + ": series expanded about different start times");
    }
}

PowerSeries series_linear(std::span<const ScaledSeries> terms, double constant, int order, double t0) {
    if (terms.empty()) {
        if (order < 0) {
            throw ParameterError("series_linear: order required when no terms are given");
        }
        return PowerSeries::constant(constant, order, t0);
    }
    const PowerSeries& first = *terms.front().series;
    PowerSeries out(first.order(), first.t0());
    for (const auto& term : terms) {
        require_same_shape(first, *term.series, "series_linear");
        for (int k = 0; k <= out.order(); ++k) {
            out[k] += term.scale * (*term.series)[k];
        }
    }
    out[0] += constant;
    out.check_finite("series_linear result");
    return out;
}

PowerSeries series_mul(const PowerSeries& g, const PowerSeries& h) {
    require_same_shape(g, h, "series_mul");
    PowerSeries out(g.order(), g.t0());
    for (int k = 0; k <= out.order(); ++k) {
        out[k] = cauchy_at(g.coeffs(), h.coeffs(), static_cast<std::size_t>(k));
    }
    out.check_finite("series_mul result");
    return out;
}

std::pair<double, double> series_sincos_step(const PowerSeries& h, const PowerSeries& sin_h,
                                             const PowerSeries& cos_h, int k) {
    require_same_shape(h, sin_h, "series_sincos_step");
    require_same_shape(h, cos_h, "series_sincos_step");
    if (k < 1 || k > h.order()) {
        throw ParameterError("series_sincos_step: order " + std::to_string(k) +
                             " outside [1, N]; order 0 is seeded directly");
    }
    return sincos_at(h.coeffs(), sin_h.coeffs(), cos_h.coeffs(), static_cast<std::size_t>(k));
}

std::pair<PowerSeries, PowerSeries> series_sincos(const PowerSeries& h) {
    PowerSeries s(h.order(), h.t0());
    PowerSeries c(h.order(), h.t0());
    s[0] = std::sin(h[0]);
    c[0] = std::cos(h[0]);
    for (int k = 1; k <= h.order(); ++k) {
        const auto [fk, gk] = sincos_at(h.coeffs(), s.coeffs(), c.coeffs(), static_cast<std::size_t>(k));
        s[k] = fk;
        c[k] = gk;
    }
    s.check_finite("sin series");
    c.check_finite("cos series");
    return {std::move(s), std::move(c)};
}

PowerSeries series_magnitude(const PowerSeries& g, const PowerSeries& h) {
    require_same_shape(g, h, "series_magnitude");
    const double s0 = g[0] * g[0] + h[0] * h[0];
    if (!(s0 >= kMagnitudeFloor)) {
        throw DegenerateMagnitudeError("series_magnitude: g0^2 + h0^2 = " + std::to_string(s0) +
                                       " below floor");
    }
    const int n = g.order();
    PowerSeries s(n, g.t0());
    PowerSeries f(n, g.t0());
    for (int k = 0; k <= n; ++k) {
        s[k] = sum_of_squares_at(g.coeffs(), h.coeffs(), static_cast<std::size_t>(k));
    }
    f[0] = std::sqrt(s0);
    for (int k = 1; k <= n; ++k) {
        f[k] = sqrt_at(s.coeffs(), f.coeffs(), static_cast<std::size_t>(k));
    }
    f.check_finite("magnitude series");
    return f;
}

double series_eval(const PowerSeries& x, double dt) { return x.eval(dt); }

}  // namespace sasemt::series
