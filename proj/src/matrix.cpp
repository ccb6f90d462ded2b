#include "dcma/matrix.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace dcma {

namespace {

using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using RowMajorMutMap =
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

RowMajorMap map_of(const Matrix& m) {
    return RowMajorMap(m.data.data(), static_cast<Eigen::Index>(m.rows),
                       static_cast<Eigen::Index>(m.cols));
}

} // namespace

bool Matrix::all_finite() const {
    for (double v : data)
        if (!std::isfinite(v)) return false;
    return true;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows)
        throw ShapeError("matmul: inner dimensions " + std::to_string(a.cols) + " vs " +
                         std::to_string(b.rows));
    Matrix c(a.rows, b.cols);
    RowMajorMutMap(c.data.data(), static_cast<Eigen::Index>(c.rows),
                   static_cast<Eigen::Index>(c.cols))
        .noalias() = map_of(a) * map_of(b);
    return c;
}

Matrix matmul_bt(const Matrix& a, const Matrix& b) {
    if (a.cols != b.cols)
        throw ShapeError("matmul_bt: inner dimensions " + std::to_string(a.cols) + " vs " +
                         std::to_string(b.cols));
    Matrix c(a.rows, b.rows);
    RowMajorMutMap(c.data.data(), static_cast<Eigen::Index>(c.rows),
                   static_cast<Eigen::Index>(c.cols))
        .noalias() = map_of(a) * map_of(b).transpose();
    return c;
}

Matrix matmul_at(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows)
        throw ShapeError("matmul_at: inner dimensions " + std::to_string(a.rows) + " vs " +
                         std::to_string(b.rows));
    Matrix c(a.cols, b.cols);
    RowMajorMutMap(c.data.data(), static_cast<Eigen::Index>(c.rows),
                   static_cast<Eigen::Index>(c.cols))
        .noalias() = map_of(a).transpose() * map_of(b);
    return c;
}

} // namespace dcma
