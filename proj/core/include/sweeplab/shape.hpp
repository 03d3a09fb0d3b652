#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sweeplab/occupancy.hpp"
#include "sweeplab/polyline.hpp"
#include "sweeplab/stream_spec.hpp"

namespace sweeplab {

struct ShapeRunOptions {
    double h = 2e-3;
    double substep_cap = 0.05;
    double delta_max = 0.1;          // refinement bound for passage runs
    std::size_t vertex_budget = 2'000'000;
    double t_max_factor = 2.5;       // passage horizon = factor * expected + t_max_slack
    double t_max_slack = 40.0;
    double norm_upper_guess = 40.0;  // a-priori ||v||^R bound used to size horizons
    unsigned jobs = 0;
    IntegratorOptions integrator() const { return {substep_cap}; }
};

struct LadderPoint {
    double t = 0.0;
    double mean = 0.0;     // mean of tau / t over reached samples
    double se = 0.0;
    int n = 0;
    int not_reached = 0;   // censored samples (horizon or budget), excluded from mean
};

struct NormEstimate {
    Vec2 direction;
    double radius_r = 0.0;  // the R of tau^R
    std::vector<LadderPoint> ladder;
    double norm = 0.0;      // extrapolated ||v||^R
    double norm_se = 0.0;
    double fit_rss = 0.0;   // weighted misfit of the a + b/t model (reported, not hidden)
    double subadd_defect = 0.0;
    bool reliable = true;   // false when any ladder point censored > 5%
};

// For each ladder distance t, runs n_per_t independent first_passage runs to
// the target t * v from the default initial curve, then extrapolates
// mean(tau/t) = ||v||^R + b/t by weighted least squares.
NormEstimate estimate_norm(const StreamSpec& spec, Vec2 v, const std::vector<double>& t_ladder,
                           int n_per_t, double r, std::uint64_t master_seed,
                           const ShapeRunOptions& opts = {});

struct ShapeEstimate {
    std::vector<double> angles;      // direction angles (radians), increasing
    std::vector<double> radius;      // boundary radius per direction
    std::vector<double> ci_lo;       // per-direction CI half-width bounds
    std::vector<double> ci_hi;
    std::vector<Vec2> boundary() const;
    double mean_radius() const;
    double convexity_defect = 0.0;   // Hausdorff distance to own hull / mean radius
    std::string provenance;          // "norm-based" or "swept-based"
    int unreliable_directions = 0;
};

// Norm route: boundary vertex v_j / ||v_j||^R on m equally spaced directions.
ShapeEstimate build_shape_from_norm(const StreamSpec& spec, int m_directions,
                                    const std::vector<double>& t_ladder, int n_per_t, double r,
                                    std::uint64_t master_seed, const ShapeRunOptions& opts = {});

// Swept route: n realizations advected to time T on a grid of cell size eta;
// radial extent of the stamped set per direction bin, scaled by 1/T, averaged
// across realizations. Throws std::invalid_argument for degenerate T.
ShapeEstimate build_shape_from_swept(const StreamSpec& spec, const Polyline& curve0, int n,
                                     double T, double eta, int m_directions,
                                     std::uint64_t master_seed, const ShapeRunOptions& opts = {});

struct SurvivalRow {
    double d = 0.0;
    double beta = 0.0;
    int n = 0;
    int survived = 0;   // tau > beta * d
    int censored = 0;   // budget exhausted before beta * d with no passage
    double p = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
};

// Empirical survival P{tau^R > beta * d} for targets d * v.
std::vector<SurvivalRow> passage_tail(const StreamSpec& spec, const std::vector<double>& d_list,
                                      double beta, int n, double r, Vec2 v,
                                      std::uint64_t master_seed, const ShapeRunOptions& opts = {});

struct OccupationResult {
    double fraction = 0.0;  // fraction of sampled times with dist(curve, A) <= R*
    double t_elapsed = 0.0;
    bool completed = true;  // false when the vertex budget ended the run early
};

// Fraction of step times t <= T with dist(gamma_t, A) <= r_star.
OccupationResult occupation_fraction(const StreamSpec& spec, Vec2 a, double r_star, double T,
                                     std::uint64_t seed, const ShapeRunOptions& opts = {});

// Point-to-line passage: the line at distance t from the origin with unit
// normal `normal`; extrapolated like estimate_norm. The defect field reports
// rho(l) - min_v ||v||^R when norm_table is supplied.
struct LinePassageEstimate {
    Vec2 normal;
    std::vector<LadderPoint> ladder;
    double rho = 0.0;
    double rho_se = 0.0;
    bool reliable = true;
};
LinePassageEstimate line_passage(const StreamSpec& spec, Vec2 unit_normal,
                                 const std::vector<double>& t_ladder, int n_per_t, double r,
                                 std::uint64_t master_seed, const ShapeRunOptions& opts = {});

// Boundary-sampled Hausdorff distance between two closed polygons.
double polygon_hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b,
                         int samples_per_edge = 8);

// Hausdorff distance from a polygon to its own convex hull (absolute units).
double hull_defect(const std::vector<Vec2>& polygon);

}  // namespace sweeplab
