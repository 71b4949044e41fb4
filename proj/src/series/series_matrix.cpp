#include "sasemt/series/series_matrix.hpp"

#include <string>

#include "sasemt/error.hpp"

namespace sasemt::series {

SeriesMatrix::SeriesMatrix(int rows, int cols, int order, double t0)
    : rows_(rows), cols_(cols), order_(order), t0_(t0) {
    if (rows <= 0 || cols <= 0) {
        throw ParameterError("series matrix dimensions must be positive");
    }
    entries_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
                    PowerSeries(order, t0));
}

SeriesMatrix SeriesMatrix::constant(const Eigen::MatrixXd& m, int order, double t0) {
    SeriesMatrix out(static_cast<int>(m.rows()), static_cast<int>(m.cols()), order, t0);
    for (int i = 0; i < out.rows_; ++i) {
        for (int j = 0; j < out.cols_; ++j) {
            out.at(i, j)[0] = m(i, j);
        }
    }
    return out;
}

std::size_t SeriesMatrix::index(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) {
        throw ParameterError("series matrix index out of range");
    }
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j);
}

Eigen::MatrixXd SeriesMatrix::coefficient(int k) const {
    Eigen::MatrixXd m(rows_, cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) {
            m(i, j) = at(i, j)[static_cast<std::size_t>(k)];
        }
    }
    return m;
}

Eigen::MatrixXd SeriesMatrix::eval(double dt) const {
    Eigen::MatrixXd m(rows_, cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) {
            m(i, j) = at(i, j).eval(dt);
        }
    }
    return m;
}

SeriesMatrix matrix_series_mul(const SeriesMatrix& g, const SeriesMatrix& h) {
    if (g.cols() != h.rows()) {
        throw OrderMismatchError("matrix_series_mul: inner dimensions " + std::to_string(g.cols()) +
                                 " and " + std::to_string(h.rows()) + " differ");
    }
    if (g.order() != h.order() || g.t0() != h.t0()) {
        throw OrderMismatchError("matrix_series_mul: operands differ in order or start time");
    }
    SeriesMatrix out(g.rows(), h.cols(), g.order(), g.t0());
    for (int i = 0; i < g.rows(); ++i) {
        for (int j = 0; j < h.cols(); ++j) {
            PowerSeries& f = out.at(i, j);
            for (int k = 0; k <= g.order(); ++k) {
                double acc = 0.0;
                for (int n = 0; n < g.cols(); ++n) {
                    acc += cauchy_at(g.at(i, n).coeffs(), h.at(n, j).coeffs(), static_cast<std::size_t>(k));
                }
                f[k] = acc;
            }
            f.check_finite("matrix_series_mul entry");
        }
    }
    return out;
}

}  // namespace sasemt::series
