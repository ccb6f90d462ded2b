#ifndef DCMA_DATASET_HPP
#define DCMA_DATASET_HPP

#include <string>
#include <vector>

#include "dcma/matrix.hpp"

namespace dcma {

/// Observed sample (A, Z, M, Y). A is binary and never standardized.
struct Dataset {
    std::vector<double> a; // treatment, entries in {0, 1}
    Matrix z;              // n x d_Z covariates
    Matrix m;              // n x S mediators
    std::vector<double> y; // outcome

    std::string a_name = "a";
    std::vector<std::string> z_names;
    std::vector<std::string> m_names;
    std::string y_name = "y";

    std::size_t n() const { return a.size(); }
    std::size_t d_z() const { return z.cols; }
    std::size_t n_mediators() const { return m.cols; }

    /// Length agreement, binary treatment, finite values, S >= 1.
    void validate() const;

    /// Row subset in the given order (with-replacement indices allowed).
    Dataset subset(const std::vector<std::size_t>& idx) const;

    /// Default names z1..zd / m1..mS when none are set.
    void ensure_names();
};

/// Per-column location/scale for Z, M, Y (population-style divisor n).
struct StandardizationParams {
    std::vector<double> z_mean, z_sd;
    std::vector<double> m_mean, m_sd;
    double y_mean = 0.0, y_sd = 1.0;

    double standardize_y(double v) const { return (v - y_mean) / y_sd; }
    double destandardize_y(double v) const { return v * y_sd + y_mean; }
};

/// Column means and sds of Z, M, Y. Throws ConfigError naming any
/// zero-variance column. Callers that never touch the outcome (the mediator
/// generator) may relax the Y check; it then falls back to mean 0 / sd 1.
StandardizationParams fit_standardization(const Dataset& data,
                                          bool require_outcome_variation = true);

} // namespace dcma

#endif
