#include "dcma/rng.hpp"

#include <cmath>
#include <numbers>

namespace dcma {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer; full-avalanche 64-bit mix.
std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

} // namespace

RngStream::RngStream(std::uint64_t seed_, std::uint64_t stream_)
    : seed(seed_), stream(stream_) {
    base_ = mix64(mix64(seed + kGolden) ^ mix64(stream + 0xD1B54A32D192ED03ULL));
}

std::uint64_t RngStream::next_u64() {
    ++counter;
    return mix64(base_ + counter * kGolden);
}

double RngStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_double_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::next_normal() {
    const double u1 = next_double_open();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
    // Rejection sampling over the top of the range keeps the draw unbiased.
    const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % bound;
}

RngStream rng_split(const RngStream& parent, std::uint64_t child_id) {
    RngStream child(parent.seed, mix64(parent.stream + kGolden * (child_id + 1)));
    return child;
}

Matrix sample_standard_normal(RngStream& stream, std::size_t rows, std::size_t cols) {
    if (rows < 1 || cols < 1)
        throw ArgumentError("sample_standard_normal: rows and cols must be >= 1");
    Matrix out(rows, cols);
    const std::size_t n = rows * cols;
    std::size_t i = 0;
    // Box-Muller in pairs; the trailing odd element uses the cosine branch only.
    while (i + 1 < n) {
        const double u1 = stream.next_double_open();
        const double u2 = stream.next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        out.data[i] = r * std::cos(t);
        out.data[i + 1] = r * std::sin(t);
        i += 2;
    }
    if (i < n) out.data[i] = stream.next_normal();
    return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(seed + kGolden * (a + 1)) + kGolden * (b + 1));
}

std::vector<std::uint32_t> random_permutation(std::size_t n, RngStream& stream) {
    std::vector<std::uint32_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(stream.next_below(i));
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

} // namespace dcma
