#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sasemt/error.hpp"
#include "sasemt/series/power_series.hpp"
#include "sasemt/series/series_matrix.hpp"
#include "support.hpp"

using namespace sasemt;
using series::PowerSeries;

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) {
        f *= i;
    }
    return f;
}

PowerSeries identity_t(int order) {
    PowerSeries t(order);
    t[1] = 1.0;
    return t;
}

}  // namespace

TEST_CASE("linear combination scales, adds constants and cancels") {
    const PowerSeries g({1.0, 1.0, 0.0});
    const series::ScaledSeries twice[] = {{2.0, &g}};
    CHECK(series::series_linear(twice).coeffs()[0] == 2.0);
    CHECK(series::series_linear(twice).coeffs()[1] == 2.0);
    CHECK(series::series_linear(twice).coeffs()[2] == 0.0);

    const auto c = series::series_linear({}, 5.0, 2);
    CHECK(c == PowerSeries({5.0, 0.0, 0.0}));

    const series::ScaledSeries diff[] = {{1.0, &g}, {-1.0, &g}};
    const auto z = series::series_linear(diff);
    for (double v : z.coeffs()) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("Cauchy product") {
    const PowerSeries a({1.0, 1.0, 0.0});
    CHECK(series::series_mul(a, a) == PowerSeries({1.0, 2.0, 1.0}));
    const PowerSeries g({0.3, -1.2, 4.0});
    CHECK(series::series_mul(g, PowerSeries({1.0, 0.0, 0.0})) == g);

    SUBCASE("t sin t matches its Taylor coefficients") {
        const auto t = identity_t(5);
        const auto [s, c] = series::series_sincos(t);
        const auto ts = series::series_mul(t, s);
        const double expected[] = {0.0, 0.0, 1.0, 0.0, -1.0 / 6.0, 0.0};
        for (int k = 0; k <= 5; ++k) {
            CHECK(ts[static_cast<std::size_t>(k)] == doctest::Approx(expected[k]).epsilon(1e-15));
        }
    }
    SUBCASE("mismatched orders are rejected") {
        CHECK_THROWS_AS((void)series::series_mul(PowerSeries(2), PowerSeries(3)), OrderMismatchError);
    }
}

TEST_CASE("sine and cosine recursion") {
    const auto t = identity_t(4);
    const auto [s, c] = series::series_sincos(t);
    const double sin_expected[] = {0.0, 1.0, 0.0, -1.0 / 6.0, 0.0};
    const double cos_expected[] = {1.0, 0.0, -0.5, 0.0, 1.0 / 24.0};
    for (std::size_t k = 0; k <= 4; ++k) {
        CHECK(s[k] == doctest::Approx(sin_expected[k]).epsilon(1e-15));
        CHECK(c[k] == doctest::Approx(cos_expected[k]).epsilon(1e-15));
    }

    SUBCASE("first coefficient of sin(pi/3 + 377 t)") {
        const PowerSeries h({std::numbers::pi / 3.0, 377.0, 0.0});
        const auto [sh, ch] = series::series_sincos(h);
        CHECK(sh[1] == doctest::Approx(188.5).epsilon(1e-12));
        CHECK(ch[1] == doctest::Approx(-377.0 * std::sin(std::numbers::pi / 3.0)).epsilon(1e-12));
    }
}

TEST_CASE("magnitude recursion") {
    CHECK(series::series_magnitude(PowerSeries({3.0, 0.0, 0.0}), PowerSeries({4.0, 0.0, 0.0})) ==
          PowerSeries({5.0, 0.0, 0.0}));

    const auto [s, c] = series::series_sincos(identity_t(12));
    const auto one = series::series_magnitude(c, s);
    CHECK(one[0] == doctest::Approx(1.0));
    for (std::size_t k = 1; k <= 12; ++k) {
        CHECK(std::abs(one[k]) < 1e-15);
    }

    const auto m = series::series_magnitude(PowerSeries({1.0, 1.0, 0.0, 0.0}), PowerSeries(3));
    CHECK(m == PowerSeries({1.0, 1.0, 0.0, 0.0}));

    CHECK_THROWS_AS((void)series::series_magnitude(PowerSeries(3), PowerSeries(3)), DegenerateMagnitudeError);
}

TEST_CASE("series matrix product") {
    Eigen::MatrixXd h0(2, 2);
    h0 << 1.0, 2.0, 3.0, 4.0;
    auto h = series::SeriesMatrix::constant(h0, 3);
    h.at(0, 1)[2] = 0.5;
    const auto id = series::SeriesMatrix::constant(Eigen::MatrixXd::Identity(2, 2), 3);
    const auto p = series::matrix_series_mul(id, h);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            CHECK(p.at(i, j) == h.at(i, j));
        }
    }

    series::SeriesMatrix a(1, 1, 2);
    series::SeriesMatrix b(1, 1, 2);
    a.at(0, 0) = PowerSeries({1.0, 2.0, 3.0});
    b.at(0, 0) = PowerSeries({-1.0, 0.5, 4.0});
    CHECK(series::matrix_series_mul(a, b).at(0, 0) == series::series_mul(a.at(0, 0), b.at(0, 0)));
}

TEST_CASE("evaluation") {
    const PowerSeries g({0.7, -3.0, 2.5});
    CHECK(series::series_eval(g, 0.0) == 0.7);

    const PowerSeries e({1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0});
    CHECK(series::series_eval(e, 0.1) == doctest::Approx(1.1051708333333333).epsilon(1e-15));

    const auto [s, c] = series::series_sincos(identity_t(30));
    CHECK(std::abs(series::series_eval(s, 0.5) - std::sin(0.5)) < 1e-14);
    CHECK(std::abs(series::series_eval(c, 0.5) - std::cos(0.5)) < 1e-14);
}

TEST_CASE("fidelity of the recursions up to order 30") {
    constexpr int kN = 30;
    const double a = 0.8;
    const double b = 1.7;
    // h(t) = a + b t
    PowerSeries hl(kN);
    hl[0] = a;
    hl[1] = b;
    const auto [s, c] = series::series_sincos(hl);
    for (int k = 0; k <= kN; ++k) {
        // d^k/dt^k sin(a + b t) = b^k sin(a + k pi/2)
        const double bk = std::pow(b, k) / factorial(k);
        const double sin_ref = bk * std::sin(a + k * std::numbers::pi / 2.0);
        const double cos_ref = bk * std::cos(a + k * std::numbers::pi / 2.0);
        CHECK(test::close(s[static_cast<std::size_t>(k)], sin_ref, 1e-12));
        CHECK(test::close(c[static_cast<std::size_t>(k)], cos_ref, 1e-12));
    }

    // |(3 + t, 4 - t)| = 5 sqrt(1 + u) with u = (-2t + 2t^2) / 25; the
    // reference expands the binomial series in u independently.
    PowerSeries g(kN);
    PowerSeries q(kN);
    g[0] = 3.0;
    g[1] = 1.0;
    q[0] = 4.0;
    q[1] = -1.0;
    const auto m = series::series_magnitude(g, q);
    std::vector<long double> ref(kN + 1, 0.0L);
    std::vector<long double> upow(kN + 1, 0.0L);
    upow[0] = 1.0L;
    long double binom = 1.0L;
    for (int j = 0; j <= kN; ++j) {
        for (int k = 0; k <= kN; ++k) {
            ref[static_cast<std::size_t>(k)] += binom * upow[static_cast<std::size_t>(k)];
        }
        // upow *= u
        std::vector<long double> next(kN + 1, 0.0L);
        for (int k = 0; k <= kN; ++k) {
            if (k + 1 <= kN) {
                next[static_cast<std::size_t>(k + 1)] += upow[static_cast<std::size_t>(k)] * (-2.0L / 25.0L);
            }
            if (k + 2 <= kN) {
                next[static_cast<std::size_t>(k + 2)] += upow[static_cast<std::size_t>(k)] * (2.0L / 25.0L);
            }
        }
        upow = next;
        binom *= (0.5L - j) / (j + 1.0L);
    }
    for (int k = 0; k <= kN; ++k) {
        CHECK(test::close(m[static_cast<std::size_t>(k)], static_cast<double>(5.0L * ref[static_cast<std::size_t>(k)]),
                          1e-12));
    }

    // Product of exp(t) and exp(2t) equals exp(3t).
    PowerSeries e1(kN);
    PowerSeries e2(kN);
    for (int k = 0; k <= kN; ++k) {
        e1[static_cast<std::size_t>(k)] = 1.0 / factorial(k);
        e2[static_cast<std::size_t>(k)] = std::pow(2.0, k) / factorial(k);
    }
    const auto e3 = series::series_mul(e1, e2);
    for (int k = 0; k <= kN; ++k) {
        CHECK(test::close(e3[static_cast<std::size_t>(k)], std::pow(3.0, k) / factorial(k), 1e-12));
    }
}

TEST_CASE("non-finite coefficients are reported") {
    PowerSeries g({1.0, std::nan(""), 0.0});
    CHECK_THROWS_AS(g.check_finite("x"), DivergenceError);
}
