#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sweeplab/integrator.hpp"
#include "sweeplab/noise.hpp"
#include "sweeplab/stream_spec.hpp"
#include "sweeplab/vec2.hpp"

namespace sweeplab {

// Refinement inserts pre-step midpoints advanced with the same increments, so
// vertex order is preserved and the original vertices' trajectories are
// unaffected by insertions. Exceeding the vertex budget raises BudgetExhausted
// after the step completes without further insertions (the curve is left in a
// valid advected state, never silently coarsened).
struct Polyline {
    std::vector<Vec2> pts;
    double created_at = 0.0;
    double max_seg = 0.05;
    std::size_t vertex_budget = 2'000'000;

    // Optional per-vertex displacement tracking (for Phi_t). Enabled by
    // track_displacements(); inserted vertices inherit their insertion-time
    // position as the x_0 proxy and are flagged non-original.
    struct VertexTrack {
        Vec2 origin;
        double max_disp = 0.0;
        bool original = true;
    };
    std::vector<VertexTrack> track;

    bool tracking() const { return !track.empty(); }
    void track_displacements();

    double arc_length() const;

    // Unit horizontal segment centered at the origin (diameter exactly 1,
    // i.e. "long"), sampled at max_seg spacing.
    static Polyline unit_segment(double max_seg = 0.05,
                                 std::size_t vertex_budget = 2'000'000);
    // Half-circle arc of unit diameter centered at the origin (alternative
    // initial condition for shape-independence tests).
    static Polyline unit_arc(double max_seg = 0.05, std::size_t vertex_budget = 2'000'000);
};

class BudgetExhausted : public std::runtime_error {
public:
    BudgetExhausted(double t, std::size_t vertices)
        : std::runtime_error("vertex budget exhausted at t = " + std::to_string(t) + " with " +
                             std::to_string(vertices) + " vertices"),
          t_(t),
          vertices_(vertices) {}
    double t() const { return t_; }
    std::size_t vertices() const { return vertices_; }

private:
    double t_;
    std::size_t vertices_;
};

// Advances every vertex by step_point with the same increments, then refines:
// any segment whose image exceeds max_seg gets the image of its pre-step
// midpoint inserted, recursively. Throws BudgetExhausted (curve remains valid).
void advect_step(const StreamSpec& spec, Polyline& curve, std::span<const double> incr,
                 double h, const IntegratorOptions& opts = {});

// Andrew monotone chain; returns counterclockwise hull without the repeated
// first vertex.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

// Max pairwise vertex distance. Exact O(n^2) up to 2048 vertices, rotating
// calipers on the convex hull above. Throws std::invalid_argument on fewer
// than 2 vertices.
double diameter(const Polyline& curve);
bool is_long(const Polyline& curve);  // diameter >= 1

// Min over segments of point-to-segment distance.
double dist_to_point(const Polyline& curve, Vec2 a);

// Min over vertices of |normal . x - offset| (distance to an infinite line;
// linear along segments, so vertices suffice).
double dist_to_line(const Polyline& curve, Vec2 unit_normal, double offset);

struct GrowthSample {
    double t = 0.0;
    double diameter = 0.0;
    double arc_length = 0.0;
    double phi = 0.0;           // sup over tracked vertices, sup over s <= t, |x_s - x_0|
    double phi_original = 0.0;  // same, over the initial vertices only
};

struct GrowthTrace {
    std::vector<GrowthSample> samples;
    bool budget_exhausted = false;
};

// Advects while recording (t, diameter, arc length, Phi_t) every sample_dt.
// With refine = false the original vertices are advanced without insertions;
// their trajectories (and hence Phi) are bit-identical to the refined run,
// while diameter and arc length become vertex-set proxies.
GrowthTrace track_growth(const StreamSpec& spec, Polyline curve, NoiseStream& noise, double T,
                         const IntegratorOptions& opts = {}, bool refine = true,
                         double sample_dt = 1.0);

// CSV snapshot rows "t,vertex,x,y".
std::string curve_csv(const Polyline& curve, double t);

}  // namespace sweeplab
