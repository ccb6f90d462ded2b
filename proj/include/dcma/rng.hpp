#ifndef DCMA_RNG_HPP
#define DCMA_RNG_HPP

#include <cstdint>

#include "dcma/matrix.hpp"

namespace dcma {

/// Counter-based random stream. Output i depends only on (seed, stream, i),
/// so draws are reproducible regardless of how other streams are interleaved,
/// and splitting never consumes state from the parent.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::uint64_t counter = 0;

    RngStream() = default;
    RngStream(std::uint64_t seed_, std::uint64_t stream_);

    std::uint64_t next_u64();
    /// Uniform on [0, 1).
    double next_double();
    /// Uniform on (0, 1].
    double next_double_open();
    /// One N(0,1) draw (consumes two uniforms).
    double next_normal();
    /// Uniform integer in [0, bound) without modulo bias.
    std::uint64_t next_below(std::uint64_t bound);

  private:
    std::uint64_t base_ = 0; // mixed (seed, stream) key
};

/// Child stream independent of the parent and of siblings with other ids.
RngStream rng_split(const RngStream& parent, std::uint64_t child_id);

/// Matrix of i.i.d. N(0,1) draws; advances the stream.
Matrix sample_standard_normal(RngStream& stream, std::size_t rows, std::size_t cols);

/// In-place Fisher-Yates permutation indices of {0, ..., n-1}.
std::vector<std::uint32_t> random_permutation(std::size_t n, RngStream& stream);

/// Well-mixed 64-bit seed derived from (seed, a, b); used to key independent
/// sub-pipelines (bootstrap resamples, replications) off one master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

} // namespace dcma

#endif
