#pragma once

// Park transformation on power series. Rows of the transform use
//   [1/2, 1/2, 1/2], [cos th_p], [-sin th_p]   with th_p = theta - p*2pi/3
// scaled by 2/3; the inverse has rows [1, cos th_p, -sin th_p].

#include <array>

#include <Eigen/Dense>

#include "sasemt/machine/params.hpp"
#include "sasemt/series/power_series.hpp"
#include "sasemt/series/series_matrix.hpp"

namespace sasemt::machine {

using series::PowerSeries;
using series::SeriesMatrix;

using SeriesTriple = std::array<const PowerSeries*, 3>;

/// Pointwise Park matrix at angle theta.
[[nodiscard]] Eigen::Matrix3d park_matrix(double theta) noexcept;
/// Pointwise inverse Park matrix at angle theta.
[[nodiscard]] Eigen::Matrix3d inv_park_matrix(double theta) noexcept;

/// cos/sin series of theta - p*2pi/3 for p = a, b, c, grown one order at a time.
class ParkTrig {
public:
    void reset(int order, double t0);
    /// Order-0 values from theta[0].
    void seed(double theta0);
    /// Fill order k >= 1; theta must be filled through k and this object through k-1.
    void extend(const PowerSeries& theta, int k);
    /// seed + extend through theta.order().
    void build(const PowerSeries& theta);

    [[nodiscard]] const PowerSeries& cos(int phase) const { return cos_[static_cast<std::size_t>(phase)]; }
    [[nodiscard]] const PowerSeries& sin(int phase) const { return sin_[static_cast<std::size_t>(phase)]; }

private:
    std::array<PowerSeries, 3> cos_;
    std::array<PowerSeries, 3> sin_;
};

/// Order-k coefficients of the 0dq components of an abc series triple.
[[nodiscard]] std::array<double, 3> park_order(const ParkTrig& trig, const SeriesTriple& abc, int k);

/// Order-k coefficients of the abc components of a 0dq series triple, using the
/// closed-form inverse.
[[nodiscard]] std::array<double, 3> inv_park_order(const ParkTrig& trig, const SeriesTriple& odq, int k);

/// Subtransient inductance matrix L''_abc(theta) as a 3x3 series matrix.
class InductanceSeries {
public:
    void reset(const MachineParams& p, int order, double t0);
    /// Order-0 entries from theta[0].
    void seed(double theta0);
    /// Fill order k >= 1 of every entry; theta must be filled through k.
    void extend(const PowerSeries& theta, int k);

    [[nodiscard]] const SeriesMatrix& matrix() const noexcept { return l_; }
    [[nodiscard]] Eigen::Matrix3d coefficient(int k) const;

    /// Entry (i, j) of the k-th coefficient without building a matrix.
    [[nodiscard]] double entry(int i, int j, int k) const {
        return l_.at(i, j)[static_cast<std::size_t>(k)];
    }

private:
    void write_order(int k);

    double ls_const_ = 0.0;   // constant part of diagonal entries
    double lm_const_ = 0.0;   // constant part of off-diagonal entries
    double amp_ = 0.0;        // (L''_ad - L''_aq) / 3
    SeriesMatrix l_;
    // 2 theta + phi for phi = 0, -2pi/3, +2pi/3 and their cosines/sines.
    std::array<PowerSeries, 3> arg_;
    std::array<PowerSeries, 3> cos2_;
    std::array<PowerSeries, 3> sin2_;
};

/// L''_abc series for a fully seeded theta.
[[nodiscard]] InductanceSeries build_inductance_series(const PowerSeries& theta, const MachineParams& p);

/// Pointwise L''_abc(theta) and its derivative with respect to theta.
[[nodiscard]] Eigen::Matrix3d inductance_matrix(const MachineParams& p, double theta) noexcept;
[[nodiscard]] Eigen::Matrix3d inductance_matrix_dtheta(const MachineParams& p, double theta) noexcept;

}  // namespace sasemt::machine
