#pragma once

#include <string>
#include <vector>

#include "sweeplab/stream_spec.hpp"

namespace sweeplab {

enum class CriticalKind { Minimum, Maximum, Saddle, Degenerate };

struct CriticalPoint {
    Vec2 location;  // in [0,1)^2
    CriticalKind kind = CriticalKind::Degenerate;
    double value = 0.0;
    double hessian_det = 0.0;
};

struct CheckTolerances {
    double hessian_degeneracy = 1e-8;   // |det Hess| below this is degenerate
    double value_distinctness = 1e-6;   // critical values closer than this coincide
    double drift_residual = 1e-8;       // condition (D) quadrature residual bound
    double rank_relative = 1e-7;        // numerical rank threshold for condition (A)
    double newton_tol = 1e-12;          // |grad H| convergence target
    int newton_max_iter = 60;
    double merge_radius = 1e-9;         // critical points closer than this merge
};

struct FieldDiagnostics {
    // Condition (D): max-norm quadrature residuals of the Ito drift integral
    // and of the component means.
    double zero_drift_residual = 0.0;
    double component_mean_residual = 0.0;
    bool condition_d_ok = false;

    // Condition (A): per sampled grid point, whether span{X_k} together with
    // first-order brackets has numerical rank 2. Row-major grid_n x grid_n,
    // point (i, j) sampled at (i/grid_n, j/grid_n), so lattice points where
    // individual fields vanish are included.
    int grid_n = 0;
    std::vector<unsigned char> condition_a_ok;
    bool condition_a_all_ok = false;

    // Condition (E): critical points per component, Newton-refined.
    std::vector<std::vector<CriticalPoint>> critical_points;
    int newton_failures = 0;
    bool condition_e_ok = false;
    std::string condition_e_reason;     // empty when ok
    double min_hessian_det = 0.0;       // min |det| over all critical points
    double min_value_separation = 0.0;  // min pairwise |value difference| within a component

    bool all_ok() const { return condition_a_all_ok && condition_d_ok && condition_e_ok; }
};

// Numerical verification of conditions (A), (D), (E) on a grid_n x grid_n
// sample grid. grid_n >= 8. Newton non-convergence is reported in
// newton_failures, never thrown.
FieldDiagnostics check_conditions(const StreamSpec& spec, int grid_n,
                                  const CheckTolerances& tol = {});

}  // namespace sweeplab
