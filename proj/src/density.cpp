#include "dcma/density.hpp"

#include <algorithm>
#include <cmath>

namespace dcma {

double ModeReport::max_separation() const {
    double sep = 0.0;
    for (std::size_t i = 1; i < locations.size(); ++i)
        sep = std::max(sep, locations[i] - locations[i - 1]);
    return sep;
}

ModeReport count_modes(std::span<const double> sample, double bandwidth, std::size_t grid_size,
                       double prominence) {
    if (sample.empty()) throw ArgumentError("count_modes: empty sample");
    if (!(bandwidth > 0.0)) throw ArgumentError("count_modes: bandwidth must be positive");
    if (grid_size < 8) throw ArgumentError("count_modes: grid too small");

    const auto [min_it, max_it] = std::minmax_element(sample.begin(), sample.end());
    const double lo = *min_it - 3.0 * bandwidth;
    const double hi = *max_it + 3.0 * bandwidth;
    const double step = (hi - lo) / static_cast<double>(grid_size - 1);

    std::vector<double> hist(grid_size, 0.0);
    for (double v : sample) {
        const double pos = (v - lo) / step;
        std::size_t k = static_cast<std::size_t>(pos);
        if (k >= grid_size) k = grid_size - 1;
        hist[k] += 1.0;
    }

    // Gaussian smoothing, truncated at 4 bandwidths.
    const int half = std::max(1, static_cast<int>(std::ceil(4.0 * bandwidth / step)));
    std::vector<double> kernel(2 * half + 1);
    for (int k = -half; k <= half; ++k) {
        const double x = static_cast<double>(k) * step / bandwidth;
        kernel[k + half] = std::exp(-0.5 * x * x);
    }
    std::vector<double> smooth(grid_size, 0.0);
    for (std::size_t i = 0; i < grid_size; ++i) {
        double s = 0.0;
        for (int k = -half; k <= half; ++k) {
            const long j = static_cast<long>(i) + k;
            if (j < 0 || j >= static_cast<long>(grid_size)) continue;
            s += kernel[k + half] * hist[j];
        }
        smooth[i] = s;
    }

    const double peak = *std::max_element(smooth.begin(), smooth.end());
    const double floor = prominence * peak;
    std::vector<std::pair<double, double>> candidates; // (location, height)
    for (std::size_t i = 1; i + 1 < grid_size; ++i) {
        if (smooth[i] <= floor) continue;
        if (smooth[i] > smooth[i - 1] && smooth[i] >= smooth[i + 1])
            candidates.emplace_back(lo + step * static_cast<double>(i), smooth[i]);
    }
    // Peaks within one bandwidth collapse to the taller one.
    ModeReport report;
    double last_height = 0.0;
    for (const auto& [x, h] : candidates) {
        if (!report.locations.empty() && x - report.locations.back() < bandwidth) {
            if (h > last_height) {
                report.locations.back() = x;
                last_height = h;
            }
            continue;
        }
        report.locations.push_back(x);
        last_height = h;
    }
    return report;
}

} // namespace dcma
