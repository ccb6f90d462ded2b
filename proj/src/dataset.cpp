#include "dcma/dataset.hpp"

#include <cmath>

namespace dcma {

void Dataset::validate() const {
    const std::size_t count = a.size();
    if (count < 1) throw ConfigError("dataset: empty");
    if (z.rows != count || m.rows != count || y.size() != count)
        throw ConfigError("dataset: column lengths disagree (a=" + std::to_string(count) +
                          ", z=" + std::to_string(z.rows) + ", m=" + std::to_string(m.rows) +
                          ", y=" + std::to_string(y.size()) + ")");
    if (m.cols < 1) throw ConfigError("dataset: needs at least one mediator column");
    for (std::size_t i = 0; i < count; ++i) {
        if (a[i] != 0.0 && a[i] != 1.0)
            throw ConfigError("dataset: treatment column must be binary 0/1, row " +
                              std::to_string(i) + " has " + std::to_string(a[i]));
        if (!std::isfinite(y[i]))
            throw ConfigError("dataset: non-finite outcome at row " + std::to_string(i));
    }
    if (!z.all_finite()) throw ConfigError("dataset: non-finite covariate value");
    if (!m.all_finite()) throw ConfigError("dataset: non-finite mediator value");
}

Dataset Dataset::subset(const std::vector<std::size_t>& idx) const {
    Dataset out;
    out.a_name = a_name;
    out.z_names = z_names;
    out.m_names = m_names;
    out.y_name = y_name;
    out.a.reserve(idx.size());
    out.y.reserve(idx.size());
    out.z = Matrix(idx.size(), z.cols);
    out.m = Matrix(idx.size(), m.cols);
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const std::size_t i = idx[k];
        out.a.push_back(a[i]);
        out.y.push_back(y[i]);
        for (std::size_t c = 0; c < z.cols; ++c) out.z(k, c) = z(i, c);
        for (std::size_t c = 0; c < m.cols; ++c) out.m(k, c) = m(i, c);
    }
    return out;
}

void Dataset::ensure_names() {
    if (z_names.size() != z.cols) {
        z_names.clear();
        for (std::size_t c = 0; c < z.cols; ++c) z_names.push_back("z" + std::to_string(c + 1));
    }
    if (m_names.size() != m.cols) {
        m_names.clear();
        for (std::size_t c = 0; c < m.cols; ++c) m_names.push_back("m" + std::to_string(c + 1));
    }
}

namespace {

void column_stats(const Matrix& mat, std::size_t col, double& mean, double& sd) {
    const std::size_t n = mat.rows;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += mat(i, col);
    mean = s / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = mat(i, col) - mean;
        ss += d * d;
    }
    sd = std::sqrt(ss / static_cast<double>(n));
}

} // namespace

StandardizationParams fit_standardization(const Dataset& data, bool require_outcome_variation) {
    if (data.n() < 2) throw ConfigError("fit_standardization: need at least 2 rows");
    StandardizationParams p;
    p.z_mean.resize(data.z.cols);
    p.z_sd.resize(data.z.cols);
    for (std::size_t c = 0; c < data.z.cols; ++c) {
        column_stats(data.z, c, p.z_mean[c], p.z_sd[c]);
        if (p.z_sd[c] <= 0.0)
            throw ConfigError("fit_standardization: covariate column " +
                              (c < data.z_names.size() ? data.z_names[c] : std::to_string(c + 1)) +
                              " is constant");
    }
    p.m_mean.resize(data.m.cols);
    p.m_sd.resize(data.m.cols);
    for (std::size_t c = 0; c < data.m.cols; ++c) {
        column_stats(data.m, c, p.m_mean[c], p.m_sd[c]);
        if (p.m_sd[c] <= 0.0)
            throw ConfigError("fit_standardization: mediator column " +
                              (c < data.m_names.size() ? data.m_names[c] : std::to_string(c + 1)) +
                              " is constant");
    }
    double s = 0.0;
    for (double v : data.y) s += v;
    p.y_mean = s / static_cast<double>(data.n());
    double ss = 0.0;
    for (double v : data.y) {
        const double d = v - p.y_mean;
        ss += d * d;
    }
    p.y_sd = std::sqrt(ss / static_cast<double>(data.n()));
    if (p.y_sd <= 0.0) {
        if (require_outcome_variation)
            throw ConfigError("fit_standardization: outcome column " + data.y_name +
                              " is constant");
        p.y_mean = 0.0;
        p.y_sd = 1.0;
    }
    return p;
}

} // namespace dcma
