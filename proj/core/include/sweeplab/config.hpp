#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "sweeplab/shape.hpp"
#include "sweeplab/stream_spec.hpp"

namespace sweeplab {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& msg, int line)
        : std::runtime_error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Flat key-value config with [section] headers and repeated "mode =" lines in
// [component] / [drift] blocks. Every field has a default; an empty config is
// the shipped default experiment.
struct ExperimentConfig {
    StreamSpec field;  // default family unless [component] blocks are given

    // [integrator]
    double h = 2e-3;
    double substep_cap = 0.05;

    // [sweep]
    double sweep_T = 50.0;
    double eta = 0.1;
    double window_hint = 8.0;   // advisory initial half-width, world units
    double delta_max = 0.05;
    std::size_t vertex_budget = 2'000'000;

    // [shape]
    double passage_radius = 0.5;  // the R of tau^R
    int m_directions = 32;
    std::vector<double> t_ladder = {1.2, 2.4};
    int n_per_t = 24;
    double shape_delta_max = 0.1;  // refinement bound for passage runs (no grid involved)

    // [passage]
    std::vector<double> d_list = {5.0, 10.0, 20.0, 40.0};
    double beta = 0.0;  // 0 = derive as 1.2 * max measured ||v||^R
    int passage_n = 100;

    // [lyapunov]
    double lyap_T = 3000.0;

    // [clt]
    int clt_n = 1000;
    double clt_T = 100.0;

    // [seeds]
    std::uint64_t master_seed = 20260810;
    int realizations = 50;

    // [output]
    std::string out_dir = "out";
    bool write_csv = true;
    bool write_svg = true;
    bool write_json = true;

    static ExperimentConfig defaults();
    static ExperimentConfig parse(std::istream& is);
    static ExperimentConfig parse_file(const std::string& path);

    // Hard-errors (ConfigError) on nonpositive physical parameters or an
    // (h, eta, field) combination violating the per-step displacement
    // contract needed by the sweep rasterization.
    void validate() const;

    // Worst-case per-step displacement bound used by validate(): drift leg
    // plus a 4-sigma bound on the sum of noise legs.
    double step_displacement_bound() const;

    // Deterministic full rendering (also the config-hash input).
    std::string canonical_text() const;

    ShapeRunOptions shape_options(unsigned jobs = 0) const;
};

}  // namespace sweeplab
