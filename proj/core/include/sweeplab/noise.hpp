#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sweeplab {

// Documented seed-splitting contract: realization streams derive from the
// master seed by seed_i = splitmix64(master_seed + GOLDEN * (i + 1)), where
// GOLDEN = 0x9E3779B97F4A7C15 and splitmix64 is the usual finalizer. Distinct
// indices give statistically independent streams.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t stream_index);

// Sequential generator of Brownian increments: per step a vector
// (dtheta_1, .., dtheta_d) of independent N(0, h) draws. Deterministic for a
// fixed seed on one platform.
class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, double h, std::size_t dims);

    // Returns the next step's increments; the span is valid until the next call.
    std::span<const double> next_step();

    double h() const { return h_; }
    std::size_t dims() const { return dims_; }
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    double h_;
    std::size_t dims_;
    std::uint64_t state_;
    std::vector<double> buf_;
};

// Materialized increment sequence for one realization (used where a path must
// be replayed or refined; long single-pass runs use NoiseStream directly).
struct NoisePath {
    std::uint64_t seed = 0;
    double h = 0.0;
    std::size_t dims = 0;
    std::vector<double> increments;  // steps * dims, row-major per step

    std::size_t steps() const { return dims == 0 ? 0 : increments.size() / dims; }
    std::span<const double> step(std::size_t i) const {
        return {increments.data() + i * dims, dims};
    }

    static NoisePath generate(std::uint64_t seed, double h, double T, std::size_t dims);

    // Pairwise-summed increments on step 2h: the same Brownian path seen at
    // half the resolution. Steps must be even.
    NoisePath coarsened() const;
};

}  // namespace sweeplab
