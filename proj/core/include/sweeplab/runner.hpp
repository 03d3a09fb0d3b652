#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace sweeplab {

// jobs == 0 means hardware concurrency. Work items are dispatched by index;
// callers store results by index, so outputs are independent of scheduling.
unsigned resolve_jobs(unsigned jobs);
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

std::uint64_t fnv1a64(std::string_view data);

std::string code_version();

// Reproducibility record for one CLI invocation: replaying the same config
// and master seed reproduces byte-identical CSV/grid outputs on one platform.
struct RunManifest {
    std::uint64_t config_hash = 0;
    std::string version;
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> realization_seeds;
    double wall_seconds = 0.0;
    std::vector<std::string> outputs;

    std::string to_json() const;
    void write(const std::string& path) const;  // also records the path itself
};

}  // namespace sweeplab
