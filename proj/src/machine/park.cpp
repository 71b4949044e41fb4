#include "sasemt/machine/park.hpp"

#include <cmath>
#include <numbers>

namespace sasemt::machine {

namespace {

constexpr double kTwoThirdsPi = 2.0 * std::numbers::pi / 3.0;
const double kCos120 = std::cos(kTwoThirdsPi);
const double kSin120 = std::sin(kTwoThirdsPi);

// Offsets of the 2-theta arguments in storage order.
constexpr std::array<double, 3> kArgOffset = {0.0, -kTwoThirdsPi, kTwoThirdsPi};

}  // namespace

Eigen::Matrix3d park_matrix(double theta) noexcept {
    Eigen::Matrix3d p;
    for (int c = 0; c < 3; ++c) {
        const double th = theta - c * kTwoThirdsPi;
        p(0, c) = 0.5;
        p(1, c) = std::cos(th);
        p(2, c) = -std::sin(th);
    }
    return p * (2.0 / 3.0);
}

Eigen::Matrix3d inv_park_matrix(double theta) noexcept {
    Eigen::Matrix3d p;
    for (int r = 0; r < 3; ++r) {
        const double th = theta - r * kTwoThirdsPi;
        p(r, 0) = 1.0;
        p(r, 1) = std::cos(th);
        p(r, 2) = -std::sin(th);
    }
    return p;
}

// -----------------------------------------------------------------------------
// ParkTrig
// -----------------------------------------------------------------------------

void ParkTrig::reset(int order, double t0) {
    for (int p = 0; p < 3; ++p) {
        cos_[p] = PowerSeries(order, t0);
        sin_[p] = PowerSeries(order, t0);
    }
}

void ParkTrig::seed(double theta0) {
    for (int p = 0; p < 3; ++p) {
        const double th = theta0 - p * kTwoThirdsPi;
        cos_[p][0] = std::cos(th);
        sin_[p][0] = std::sin(th);
    }
}

void ParkTrig::extend(const PowerSeries& theta, int k) {
    const auto kk = static_cast<std::size_t>(k);
    const auto [s, c] = series::sincos_at(theta.coeffs(), sin_[0].coeffs(), cos_[0].coeffs(), kk);
    sin_[0][kk] = s;
    cos_[0][kk] = c;
    // theta - 2pi/3 and theta + 2pi/3 by rotation of the phase-a pair.
    cos_[1][kk] = c * kCos120 + s * kSin120;
    sin_[1][kk] = s * kCos120 - c * kSin120;
    cos_[2][kk] = c * kCos120 - s * kSin120;
    sin_[2][kk] = s * kCos120 + c * kSin120;
}

void ParkTrig::build(const PowerSeries& theta) {
    reset(theta.order(), theta.t0());
    seed(theta[0]);
    for (int k = 1; k <= theta.order(); ++k) {
        extend(theta, k);
    }
}

std::array<double, 3> park_order(const ParkTrig& trig, const SeriesTriple& abc, int k) {
    const auto kk = static_cast<std::size_t>(k);
    double z0 = 0.0;
    double zd = 0.0;
    double zq = 0.0;
    for (int p = 0; p < 3; ++p) {
        const auto x = abc[static_cast<std::size_t>(p)]->coeffs();
        z0 += x[kk];
        zd += series::cauchy_at(trig.cos(p).coeffs(), x, kk);
        zq -= series::cauchy_at(trig.sin(p).coeffs(), x, kk);
    }
    constexpr double kScale = 2.0 / 3.0;
    return {kScale * 0.5 * z0, kScale * zd, kScale * zq};
}

std::array<double, 3> inv_park_order(const ParkTrig& trig, const SeriesTriple& odq, int k) {
    const auto kk = static_cast<std::size_t>(k);
    const auto z0 = odq[0]->coeffs();
    const auto zd = odq[1]->coeffs();
    const auto zq = odq[2]->coeffs();
    std::array<double, 3> out{};
    for (int p = 0; p < 3; ++p) {
        out[static_cast<std::size_t>(p)] = z0[kk] + series::cauchy_at(trig.cos(p).coeffs(), zd, kk) -
                                           series::cauchy_at(trig.sin(p).coeffs(), zq, kk);
    }
    return out;
}

// -----------------------------------------------------------------------------
// InductanceSeries
// -----------------------------------------------------------------------------

void InductanceSeries::reset(const MachineParams& p, int order, double t0) {
    const double lad = p.Lpp_ad();
    const double laq = p.Lpp_aq();
    ls_const_ = p.L_ls + (p.L_0 - p.L_ls + lad + laq) / 3.0;
    lm_const_ = (2.0 * p.L_0 - 2.0 * p.L_ls - lad - laq) / 6.0;
    amp_ = (lad - laq) / 3.0;
    l_ = SeriesMatrix(3, 3, order, t0);
    for (int j = 0; j < 3; ++j) {
        arg_[j] = PowerSeries(order, t0);
        cos2_[j] = PowerSeries(order, t0);
        sin2_[j] = PowerSeries(order, t0);
    }
}

void InductanceSeries::seed(double theta0) {
    for (int j = 0; j < 3; ++j) {
        arg_[j][0] = 2.0 * theta0 + kArgOffset[j];
        cos2_[j][0] = std::cos(arg_[j][0]);
        sin2_[j][0] = std::sin(arg_[j][0]);
    }
    write_order(0);
}

void InductanceSeries::extend(const PowerSeries& theta, int k) {
    const auto kk = static_cast<std::size_t>(k);
    for (int j = 0; j < 3; ++j) {
        arg_[j][kk] = 2.0 * theta[kk];
        const auto [s, c] = series::sincos_at(arg_[j].coeffs(), sin2_[j].coeffs(), cos2_[j].coeffs(), kk);
        sin2_[j][kk] = s;
        cos2_[j][kk] = c;
    }
    write_order(k);
}

void InductanceSeries::write_order(int k) {
    const auto kk = static_cast<std::size_t>(k);
    const double ls = k == 0 ? ls_const_ : 0.0;
    const double lm = k == 0 ? lm_const_ : 0.0;
    const double c0 = amp_ * cos2_[0][kk];   // 2 theta
    const double cm = amp_ * cos2_[1][kk];   // 2 theta - 2pi/3
    const double cp = amp_ * cos2_[2][kk];   // 2 theta + 2pi/3
    l_.at(0, 0)[kk] = ls + c0;
    l_.at(1, 1)[kk] = ls + cp;
    l_.at(2, 2)[kk] = ls + cm;
    l_.at(0, 1)[kk] = l_.at(1, 0)[kk] = lm + cm;
    l_.at(0, 2)[kk] = l_.at(2, 0)[kk] = lm + cp;
    l_.at(1, 2)[kk] = l_.at(2, 1)[kk] = lm + c0;
}

Eigen::Matrix3d InductanceSeries::coefficient(int k) const {
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            m(i, j) = entry(i, j, k);
        }
    }
    return m;
}

InductanceSeries build_inductance_series(const PowerSeries& theta, const MachineParams& p) {
    InductanceSeries ind;
    ind.reset(p, theta.order(), theta.t0());
    ind.seed(theta[0]);
    for (int k = 1; k <= theta.order(); ++k) {
        ind.extend(theta, k);
    }
    return ind;
}

Eigen::Matrix3d inductance_matrix(const MachineParams& p, double theta) noexcept {
    const double lad = p.Lpp_ad();
    const double laq = p.Lpp_aq();
    const double ls = p.L_ls + (p.L_0 - p.L_ls + lad + laq) / 3.0;
    const double lm = (2.0 * p.L_0 - 2.0 * p.L_ls - lad - laq) / 6.0;
    const double amp = (lad - laq) / 3.0;
    const double c0 = amp * std::cos(2.0 * theta);
    const double cm = amp * std::cos(2.0 * theta - kTwoThirdsPi);
    const double cp = amp * std::cos(2.0 * theta + kTwoThirdsPi);
    Eigen::Matrix3d l;
    l << ls + c0, lm + cm, lm + cp,
         lm + cm, ls + cp, lm + c0,
         lm + cp, lm + c0, ls + cm;
    return l;
}

Eigen::Matrix3d inductance_matrix_dtheta(const MachineParams& p, double theta) noexcept {
    const double amp = -2.0 * (p.Lpp_ad() - p.Lpp_aq()) / 3.0;
    const double s0 = amp * std::sin(2.0 * theta);
    const double sm = amp * std::sin(2.0 * theta - kTwoThirdsPi);
    const double sp = amp * std::sin(2.0 * theta + kTwoThirdsPi);
    Eigen::Matrix3d l;
    l << s0, sm, sp,
         sm, sp, s0,
         sp, s0, sm;
    return l;
}

}  // namespace sasemt::machine
