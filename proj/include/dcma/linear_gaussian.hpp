#ifndef DCMA_LINEAR_GAUSSIAN_HPP
#define DCMA_LINEAR_GAUSSIAN_HPP

#include <span>
#include <vector>

#include "dcma/dataset.hpp"
#include "dcma/rng.hpp"

namespace dcma {

/// Ordinary-least-squares outcome model y = b0 + bA a + bM' m + bZ' z + sigma N(0,1).
struct LinearGaussianModel {
    double intercept = 0.0;
    double coef_a = 0.0;
    std::vector<double> coef_m;
    std::vector<double> coef_z;
    double sigma = 0.0;

    double mean_at(double a, std::span<const double> m, std::span<const double> z) const;
    double sample(double a, std::span<const double> m, std::span<const double> z,
                  RngStream& stream) const;
};

/// OLS on the design (1, A, M, Z); sigma is the residual standard deviation
/// with divisor n - p. Throws FitError on rank deficiency.
LinearGaussianModel fit_linear_gaussian(const Dataset& data);

} // namespace dcma

#endif
