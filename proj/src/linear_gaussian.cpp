#include "dcma/linear_gaussian.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace dcma {

double LinearGaussianModel::mean_at(double a, std::span<const double> m,
                                    std::span<const double> z) const {
    if (m.size() != coef_m.size() || z.size() != coef_z.size())
        throw ShapeError("linear gaussian: input widths do not match fitted coefficients");
    double v = intercept + coef_a * a;
    for (std::size_t i = 0; i < m.size(); ++i) v += coef_m[i] * m[i];
    for (std::size_t i = 0; i < z.size(); ++i) v += coef_z[i] * z[i];
    return v;
}

double LinearGaussianModel::sample(double a, std::span<const double> m, std::span<const double> z,
                                   RngStream& stream) const {
    return mean_at(a, m, z) + sigma * stream.next_normal();
}

LinearGaussianModel fit_linear_gaussian(const Dataset& data) {
    data.validate();
    const std::size_t n = data.n();
    const std::size_t p = 2 + data.m.cols + data.z.cols;
    if (n <= p) throw FitError("fit_linear_gaussian: need more rows than coefficients");

    Eigen::MatrixXd x(n, p);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = data.a[i];
        for (std::size_t c = 0; c < data.m.cols; ++c) x(i, 2 + c) = data.m(i, c);
        for (std::size_t c = 0; c < data.z.cols; ++c) x(i, 2 + data.m.cols + c) = data.z(i, c);
        y(i) = data.y[i];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < static_cast<Eigen::Index>(p))
        throw FitError("fit_linear_gaussian: design matrix (1, A, M, Z) is rank deficient");
    const Eigen::VectorXd beta = qr.solve(y);

    LinearGaussianModel model;
    model.intercept = beta(0);
    model.coef_a = beta(1);
    model.coef_m.assign(beta.data() + 2, beta.data() + 2 + data.m.cols);
    model.coef_z.assign(beta.data() + 2 + data.m.cols, beta.data() + p);

    const Eigen::VectorXd resid = y - x * beta;
    model.sigma = std::sqrt(resid.squaredNorm() / static_cast<double>(n - p));
    return model;
}

} // namespace dcma
