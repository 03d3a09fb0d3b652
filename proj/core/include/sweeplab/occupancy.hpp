#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sweeplab/polyline.hpp"
#include "sweeplab/vec2.hpp"

namespace sweeplab {

// Monotone occupancy grid over an axis-aligned window of cells of size eta.
// Cells are half-open squares [i*eta, (i+1)*eta) x [j*eta, (j+1)*eta) in world
// coordinates; the window expands in whole-cell steps, so a cell keeps its
// world coordinates across expansions. Set bits are never cleared.
class OccupancyGrid {
public:
    explicit OccupancyGrid(double eta);

    double eta() const { return eta_; }
    double t_latest() const { return t_latest_; }
    void set_t_latest(double t) { t_latest_ = t; }

    // World-cell-index accessors (indices may be negative).
    bool test_cell(long ci, long cj) const;
    void set_cell(long ci, long cj);
    long cell_of(double coord) const;

    std::size_t count() const;
    bool empty() const { return count_ == 0; }

    // Window in cell indices: [ci0, ci0+ncols) x [cj0, cj0+nrows).
    long ci0() const { return ci0_; }
    long cj0() const { return cj0_; }
    long ncols() const { return ncols_; }
    long nrows() const { return nrows_; }

    // Conservative supercover rasterization of one segment: every cell the
    // segment touches is set, including cells entered exactly at a corner.
    void stamp_segment(Vec2 a, Vec2 b);
    // Stamps every segment of the curve (a single vertex stamps its cell).
    void stamp(const Polyline& curve);

    // Morphological dilation by a disk: output has a cell set iff some input
    // cell center lies within r of its center (half-cell slack by definition).
    OccupancyGrid dilated(double r) const;

    // Exact subset test (world-aligned; grids must share eta).
    bool subset_of(const OccupancyGrid& other) const;
    // In-place OR; requires identical eta (windows may differ).
    void merge(const OccupancyGrid& other);

    std::vector<std::pair<long, long>> set_cells() const;

    // Header (window, eta, t_latest) plus row-major run-length-encoded bits.
    void write(std::ostream& os) const;
    static OccupancyGrid read(std::istream& is);
    void save(const std::string& path) const;
    static OccupancyGrid load(const std::string& path);

private:
    void ensure_cell(long ci, long cj);
    std::size_t word_index(long ci, long cj) const;

    double eta_;
    double t_latest_ = 0.0;
    long ci0_ = 0, cj0_ = 0;
    long ncols_ = 0, nrows_ = 0;
    std::size_t words_per_row_ = 0;
    std::vector<std::uint64_t> bits_;  // row j, then column bits
    std::size_t count_ = 0;
};

struct SweepResult {
    OccupancyGrid grid;
    GrowthTrace trace;
    bool budget_exhausted = false;
    Polyline final_curve;
};

// Advects curve0 to time T, stamping the curve after every step (the initial
// stamp covers the pre-state of the first step; each later pre-state lies on
// the previously stamped polyline, so pre+post coverage holds). Requires the
// per-step displacement <= eta contract, validated by the config layer.
SweepResult run_sweep(const StreamSpec& spec, Polyline curve0, NoiseStream& noise, double T,
                      double eta, const IntegratorOptions& opts = {}, double sample_dt = 1.0);

enum class PassageOutcome { Reached, NotReachedByTmax, BudgetExhausted };

struct PassageRecord {
    Vec2 target;
    double radius = 0.0;
    PassageOutcome outcome = PassageOutcome::NotReachedByTmax;
    double tau = 0.0;                // valid when outcome == Reached
    double t_elapsed = 0.0;          // horizon actually covered
    double curve_diam_at_tau = 0.0;  // re-verified on the stored snapshot
    double dist_at_tau = 0.0;        // ditto
};

// First sampled step (resolution h) at which dist(curve, A) <= R and
// diam >= 1 simultaneously; the infimum over t > 0 is reported at the first
// step even if the initial curve already qualifies.
PassageRecord first_passage(const StreamSpec& spec, Polyline curve0, NoiseStream& noise, Vec2 a,
                            double r, double t_max, const IntegratorOptions& opts = {});

// Line variant: target set {x : |unit_normal . x - offset| <= R}.
PassageRecord first_line_passage(const StreamSpec& spec, Polyline curve0, NoiseStream& noise,
                                 Vec2 unit_normal, double offset, double r, double t_max,
                                 const IntegratorOptions& opts = {});

}  // namespace sweeplab
