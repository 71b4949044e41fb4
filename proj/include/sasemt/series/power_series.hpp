#pragma once

// =============================================================================
// Truncated power series and differential-transformation arithmetic
// =============================================================================
// A PowerSeries stores the scaled Taylor coefficients x[k] = x^(k)(t0)/k! of
// one scalar signal about the start of the current step. Coefficients are kept
// in local time tau = t - t0, so t0 is metadata only.
//
// Two layers are provided:
//   - order-k kernels on raw coefficient spans, used by the step recursions
//     where coefficients are produced one order at a time;
//   - whole-series operations that build a result of the same order.
// =============================================================================

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace sasemt::series {

/// Largest truncation order accepted anywhere in the library.
inline constexpr int kMaxOrder = 64;

class PowerSeries {
public:
    PowerSeries() = default;

    /// All-zero series of the given order.
    explicit PowerSeries(int order, double t0 = 0.0);

    /// Takes ownership of coefficients x[0..N]; N = coeffs.size() - 1.
    explicit PowerSeries(std::vector<double> coeffs, double t0 = 0.0);

    /// c * eta[k]: c at order 0, zero elsewhere.
    [[nodiscard]] static PowerSeries constant(double c, int order, double t0 = 0.0);

    [[nodiscard]] int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] double t0() const noexcept { return t0_; }
    void set_t0(double t0) noexcept { t0_ = t0; }

    [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] std::span<double> coeffs() noexcept { return coeffs_; }

    [[nodiscard]] double operator[](std::size_t k) const noexcept { return coeffs_[k]; }
    [[nodiscard]] double& operator[](std::size_t k) noexcept { return coeffs_[k]; }

    /// Horner evaluation of sum x[k] dt^k.
    [[nodiscard]] double eval(double dt) const noexcept;

    /// Horner evaluation of the time derivative sum k x[k] dt^(k-1).
    [[nodiscard]] double derivative_eval(double dt) const noexcept;

    /// Throws DivergenceError naming `what` if any coefficient is NaN/Inf.
    void check_finite(std::string_view what) const;

    bool operator==(const PowerSeries&) const = default;

private:
    std::vector<double> coeffs_ = {0.0};
    double t0_ = 0.0;
};

// -----------------------------------------------------------------------------
// Order-k kernels
// -----------------------------------------------------------------------------

/// Truncated Cauchy product coefficient: sum_{m=0..k} g[m] h[k-m].
[[nodiscard]] double cauchy_at(std::span<const double> g, std::span<const double> h,
                               std::size_t k) noexcept;

/// Horner evaluation on a raw coefficient span.
[[nodiscard]] double horner(std::span<const double> c, double dt) noexcept;

/// Horner evaluation of the derivative on a raw coefficient span.
[[nodiscard]] double horner_derivative(std::span<const double> c, double dt) noexcept;

/// k-th coefficients of sin(h) and cos(h) from the mutual recursion
///   f[k] =  sum_{m=0}^{k-1} (k-m)/k g[m] h[k-m]
///   g[k] = -sum_{m=0}^{k-1} (k-m)/k f[m] h[k-m]
/// with f = sin(h), g = cos(h) filled through k-1. k must be >= 1.
[[nodiscard]] std::pair<double, double> sincos_at(std::span<const double> h,
                                                  std::span<const double> sin_h,
                                                  std::span<const double> cos_h, std::size_t k);

/// k-th coefficient of f = sqrt(s) given s through k and f through k-1 (k >= 1):
///   f[k] = (s[k] - sum_{m=1}^{k-1} f[m] f[k-m]) / (2 f[0]).
[[nodiscard]] double sqrt_at(std::span<const double> s, std::span<const double> f,
                             std::size_t k) noexcept;

/// s[k] = sum_{m=0..k} (g[m] g[k-m] + h[m] h[k-m]).
[[nodiscard]] double sum_of_squares_at(std::span<const double> g, std::span<const double> h,
                                       std::size_t k) noexcept;

/// Smallest g0^2 + h0^2 for which the magnitude recursion is attempted.
inline constexpr double kMagnitudeFloor = 1e-12;

// -----------------------------------------------------------------------------
// Whole-series operations
// -----------------------------------------------------------------------------

struct ScaledSeries {
    double scale = 1.0;
    const PowerSeries* series = nullptr;
};

/// sum_i c_i g_i[k] + constant * eta[k]. When `terms` is empty, `order` and
/// `t0` give the shape of the result; otherwise they are ignored.
[[nodiscard]] PowerSeries series_linear(std::span<const ScaledSeries> terms, double constant = 0.0,
                                        int order = -1, double t0 = 0.0);

/// Truncated Cauchy product g * h.
[[nodiscard]] PowerSeries series_mul(const PowerSeries& g, const PowerSeries& h);

/// k-th coefficients of sin(h), cos(h); sin_h/cos_h must be seeded at order 0
/// and filled through k-1.
[[nodiscard]] std::pair<double, double> series_sincos_step(const PowerSeries& h,
                                                           const PowerSeries& sin_h,
                                                           const PowerSeries& cos_h, int k);

/// Full sin(h), cos(h) series.
[[nodiscard]] std::pair<PowerSeries, PowerSeries> series_sincos(const PowerSeries& h);

/// Series of sqrt(g^2 + h^2).
[[nodiscard]] PowerSeries series_magnitude(const PowerSeries& g, const PowerSeries& h);

/// Horner evaluation; same as x.eval(dt).
[[nodiscard]] double series_eval(const PowerSeries& x, double dt);

/// Throws OrderMismatchError unless a and b share order and t0.
void require_same_shape(const PowerSeries& a, const PowerSeries& b, std::string_view op);

}  // namespace sasemt::series
