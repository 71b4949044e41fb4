#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "sasemt/series/power_series.hpp"

namespace sasemt::series {

/// Matrix of power series sharing one order and start time.
class SeriesMatrix {
public:
    SeriesMatrix() = default;
    SeriesMatrix(int rows, int cols, int order, double t0 = 0.0);

    /// Constant matrix series: m at order 0, zero elsewhere.
    [[nodiscard]] static SeriesMatrix constant(const Eigen::MatrixXd& m, int order, double t0 = 0.0);

    [[nodiscard]] int rows() const noexcept { return rows_; }
    [[nodiscard]] int cols() const noexcept { return cols_; }
    [[nodiscard]] int order() const noexcept { return order_; }
    [[nodiscard]] double t0() const noexcept { return t0_; }

    [[nodiscard]] PowerSeries& at(int i, int j) { return entries_[index(i, j)]; }
    [[nodiscard]] const PowerSeries& at(int i, int j) const { return entries_[index(i, j)]; }

    /// Plain matrix of the k-th coefficients.
    [[nodiscard]] Eigen::MatrixXd coefficient(int k) const;

    /// Matrix of entry-wise evaluations at dt.
    [[nodiscard]] Eigen::MatrixXd eval(double dt) const;

private:
    [[nodiscard]] std::size_t index(int i, int j) const;

    int rows_ = 0;
    int cols_ = 0;
    int order_ = 0;
    double t0_ = 0.0;
    std::vector<PowerSeries> entries_;
};

/// F = G H with f_ij[k] = sum_n sum_{m=0..k} g_in[m] h_nj[k-m].
[[nodiscard]] SeriesMatrix matrix_series_mul(const SeriesMatrix& g, const SeriesMatrix& h);

}  // namespace sasemt::series
