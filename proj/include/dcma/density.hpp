#ifndef DCMA_DENSITY_HPP
#define DCMA_DENSITY_HPP

#include <span>
#include <vector>

#include "dcma/errors.hpp"

namespace dcma {

/// Modes of a kernel-smoothed histogram: bin the sample on a regular grid,
/// smooth with a fixed-bandwidth Gaussian kernel, and report local maxima
/// whose height exceeds `prominence` times the global maximum.
struct ModeReport {
    std::vector<double> locations; // ascending
    std::size_t count() const { return locations.size(); }
    /// Largest gap between adjacent modes (0 when fewer than two).
    double max_separation() const;
};

ModeReport count_modes(std::span<const double> sample, double bandwidth,
                       std::size_t grid_size = 512, double prominence = 0.05);

} // namespace dcma

#endif
