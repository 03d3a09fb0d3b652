#include "sweeplab/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace sweeplab {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline double u64_to_unit_open(std::uint64_t r) {
    // (0, 1): top 53 bits, shifted into the open interval.
    return (static_cast<double>(r >> 11) + 0.5) * 0x1.0p-53;
}
}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t stream_index) {
    return splitmix64(master_seed + kGolden * (stream_index + 1));
}

NoiseStream::NoiseStream(std::uint64_t seed, double h, std::size_t dims)
    : seed_(seed), h_(h), dims_(dims), state_(seed), buf_(dims) {
    if (h <= 0.0) throw std::invalid_argument("noise step h must be positive");
    if (dims == 0) throw std::invalid_argument("noise dimension must be positive");
}

std::span<const double> NoiseStream::next_step() {
    // Box-Muller on splitmix64 output; self-contained so that increments are
    // reproducible bit-for-bit regardless of the standard library.
    const double sigma = std::sqrt(h_);
    std::size_t i = 0;
    while (i < dims_) {
        const double u1 = u64_to_unit_open(state_ = splitmix64(state_));
        const double u2 = u64_to_unit_open(state_ = splitmix64(state_));
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586 * u2;
        buf_[i++] = sigma * r * std::cos(a);
        if (i < dims_) buf_[i++] = sigma * r * std::sin(a);
    }
    return {buf_.data(), dims_};
}

NoisePath NoisePath::generate(std::uint64_t seed, double h, double T, std::size_t dims) {
    if (T < 0.0) throw std::invalid_argument("horizon T must be nonnegative");
    NoiseStream stream(seed, h, dims);
    const std::size_t steps = static_cast<std::size_t>(std::llround(T / h));
    NoisePath path;
    path.seed = seed;
    path.h = h;
    path.dims = dims;
    path.increments.reserve(steps * dims);
    for (std::size_t s = 0; s < steps; ++s) {
        auto inc = stream.next_step();
        path.increments.insert(path.increments.end(), inc.begin(), inc.end());
    }
    return path;
}

NoisePath NoisePath::coarsened() const {
    if (steps() % 2 != 0) throw std::invalid_argument("coarsened() needs an even step count");
    NoisePath out;
    out.seed = seed;
    out.h = 2.0 * h;
    out.dims = dims;
    out.increments.resize(increments.size() / 2);
    for (std::size_t s = 0; s < steps() / 2; ++s)
        for (std::size_t k = 0; k < dims; ++k)
            out.increments[s * dims + k] =
                increments[(2 * s) * dims + k] + increments[(2 * s + 1) * dims + k];
    return out;
}

}  // namespace sweeplab
