#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sweeplab/noise.hpp"
#include "sweeplab/stream_spec.hpp"
#include "sweeplab/vec2.hpp"

namespace sweeplab {

struct IntegratorOptions {
    // A deterministic flow leg along one field is subdivided so that no RK4
    // substep moves farther than this bound (leg time * field sup-norm).
    double substep_cap = 0.05;
};

// One step of the Stratonovich solution by Lie-Trotter splitting: flow along
// X_0 for time h, then along each X_k for "time" dtheta_k, sequentially, each
// leg integrated by RK4 with the substep cap. Positions live in the plane
// (not wrapped); fields wrap coordinates internally, so the step is exactly
// equivariant under integer translations.
Vec2 step_point(const StreamSpec& spec, Vec2 x, std::span<const double> incr, double h,
                const IntegratorOptions& opts = {});

// Stratonovich predictor-corrector (Heun) step; cross-validation only.
Vec2 step_heun(const StreamSpec& spec, Vec2 x, std::span<const double> incr, double h);

// Position and tangent frame (M = Dx_t applied to the initial frame).
struct TangentState {
    Vec2 x;
    Mat2 m = Mat2::identity();
};

// Splitting step where every RK4 leg also applies its exact variational
// Jacobian (the derivative of the RK4 map itself) to M.
TangentState step_tangent(const StreamSpec& spec, TangentState state,
                          std::span<const double> incr, double h,
                          const IntegratorOptions& opts = {});

struct LyapunovEstimate {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double stderr1 = 0.0;      // batch-means standard error of lambda1
    double det_drift = 0.0;    // |exp(accumulated log det) - 1| over the run
    double T = 0.0;
    std::uint64_t seed = 0;
};

// Evolves a tangent frame, QR-renormalizing every renorm_interval time units;
// lambda1 is the mean log stretch of the leading column, lambda2 the log-det
// accumulation rate minus lambda1.
LyapunovEstimate lyapunov_estimate(const StreamSpec& spec, Vec2 x0, Vec2 v0, double T,
                                   double h, std::uint64_t seed,
                                   const IntegratorOptions& opts = {},
                                   double renorm_interval = 1.0);

struct DisplacementStats {
    Vec2 mean_drift;          // ensemble mean displacement / T
    Vec2 mean_drift_se;       // standard error of the above, per component
    Mat2 covariance_per_t;    // displacement covariance / T
    Vec2 excess_kurtosis;     // per component
    double kurtosis_se = 0.0; // normal-approximation SE, sqrt(24/n)
    int n = 0;
    double T = 0.0;
};

// n independent single-point realizations from x0 = 0.
DisplacementStats displacement_stats(const StreamSpec& spec, int n, double T, double h,
                                     std::uint64_t master_seed,
                                     const IntegratorOptions& opts = {},
                                     unsigned jobs = 0);

// Two points advanced with the same increments; positions sampled every
// sample_dt time units (first sample at t = 0).
struct PairSample {
    double t;
    Vec2 x1;
    Vec2 x2;
};
std::vector<PairSample> flow_two_point(const StreamSpec& spec, Vec2 x1, Vec2 x2,
                                       const NoisePath& noise, double T,
                                       double sample_dt = 1.0,
                                       const IntegratorOptions& opts = {});

}  // namespace sweeplab
