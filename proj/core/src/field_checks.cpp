#include "sweeplab/field_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sweeplab {

namespace {

inline double wrap_unit(double v) {
    double w = v - std::floor(v);
    if (w >= 1.0) w -= 1.0;
    return w;
}

inline double torus_dist(Vec2 a, Vec2 b) {
    double dx = std::abs(a.x - b.x);
    double dy = std::abs(a.y - b.y);
    dx = std::min(dx, 1.0 - dx);
    dy = std::min(dy, 1.0 - dy);
    return std::hypot(dx, dy);
}

// Smallest/largest eigenvalues of the symmetric PSD Gram matrix.
inline std::pair<double, double> gram_eigs(double gxx, double gxy, double gyy) {
    const double tr = gxx + gyy;
    const double det = gxx * gyy - gxy * gxy;
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    return {std::max(0.0, 0.5 * (tr - disc)), 0.5 * (tr + disc)};
}

struct NewtonResult {
    bool converged = false;
    Vec2 x;
};

NewtonResult newton_critical_point(const StreamSpec& spec, std::size_t k, Vec2 x,
                                   const CheckTolerances& tol) {
    for (int it = 0; it < tol.newton_max_iter; ++it) {
        const Vec2 g = spec.stream_gradient(k, x);
        if (g.norm() <= tol.newton_tol) return {true, {wrap_unit(x.x), wrap_unit(x.y)}};
        const Mat2 hess = spec.stream_hessian(k, x);
        const double det = hess.det();
        if (std::abs(det) < 1e-30) return {false, x};
        const Vec2 step{(hess.d * g.x - hess.b * g.y) / det,
                        (-hess.c * g.x + hess.a * g.y) / det};
        if (step.norm() > 0.5) return {false, x};  // diverging seed
        x -= step;
    }
    return {false, x};
}

}  // namespace

FieldDiagnostics check_conditions(const StreamSpec& spec, int grid_n,
                                  const CheckTolerances& tol) {
    if (grid_n < 8) throw std::invalid_argument("check_conditions needs grid_n >= 8");
    const std::size_t d = spec.num_components();

    FieldDiagnostics diag;
    diag.grid_n = grid_n;

    // --- condition (A): pointwise numerical rank of fields plus brackets ----
    double scale = 0.0;
    for (std::size_t k = 0; k < d; ++k) scale = std::max(scale, spec.velocity_sup_bound(k));
    diag.condition_a_ok.assign(static_cast<std::size_t>(grid_n) * grid_n, 0);
    diag.condition_a_all_ok = true;
    std::vector<Vec2> vecs;
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            const Vec2 x{static_cast<double>(i) / grid_n, static_cast<double>(j) / grid_n};
            vecs.clear();
            for (std::size_t k = 0; k < d; ++k) vecs.push_back(spec.velocity(k, x));
            for (std::size_t a = 0; a < d; ++a) {
                const Mat2 ja = spec.jacobian(a, x);
                const Vec2 va = vecs[a];
                for (std::size_t b = a + 1; b < d; ++b) {
                    const Mat2 jb = spec.jacobian(b, x);
                    const Vec2 vb = vecs[b];
                    vecs.push_back(jb * va - ja * vb);  // [X_a, X_b]
                }
            }
            double gxx = 0, gxy = 0, gyy = 0;
            for (std::size_t v = 0; v < vecs.size(); ++v) {
                gxx += vecs[v].x * vecs[v].x;
                gxy += vecs[v].x * vecs[v].y;
                gyy += vecs[v].y * vecs[v].y;
            }
            const auto [lo, hi] = gram_eigs(gxx, gxy, gyy);
            const double s2 = std::sqrt(lo);
            const double s1 = std::sqrt(hi);
            const bool ok = s2 > tol.rank_relative * (s1 + scale);
            diag.condition_a_ok[static_cast<std::size_t>(i) * grid_n + j] = ok ? 1 : 0;
            if (!ok) diag.condition_a_all_ok = false;
        }
    }

    // --- condition (D): quadrature of the Ito drift and component means ----
    // Everything integrated is a trigonometric polynomial with per-coordinate
    // wavenumbers at most 2 * max_wavenumber, so the midpoint rule on any
    // finer grid is exact up to roundoff.
    const int nq = std::max(grid_n, 2 * spec.max_wavenumber() + 1);
    Vec2 drift_sum{0, 0};
    std::vector<Vec2> comp_sum(d, Vec2{0, 0});
    for (int i = 0; i < nq; ++i) {
        for (int j = 0; j < nq; ++j) {
            const Vec2 x{(i + 0.5) / nq, (j + 0.5) / nq};
            drift_sum += spec.ito_drift(x);
            for (std::size_t k = 0; k < d; ++k) comp_sum[k] += spec.velocity(k, x);
        }
    }
    const double inv = 1.0 / (static_cast<double>(nq) * nq);
    diag.zero_drift_residual = (inv * drift_sum).norm();
    for (std::size_t k = 0; k < d; ++k)
        diag.component_mean_residual =
            std::max(diag.component_mean_residual, (inv * comp_sum[k]).norm());
    diag.condition_d_ok = diag.zero_drift_residual <= tol.drift_residual &&
                          diag.component_mean_residual <= tol.drift_residual;

    // --- condition (E): critical points of each stream function ------------
    diag.critical_points.resize(d);
    diag.condition_e_ok = true;
    diag.min_hessian_det = std::numeric_limits<double>::infinity();
    diag.min_value_separation = std::numeric_limits<double>::infinity();
    std::ostringstream reason;

    for (std::size_t k = 0; k < d; ++k) {
        auto& pts = diag.critical_points[k];
        for (int i = 0; i < grid_n; ++i) {
            for (int j = 0; j < grid_n; ++j) {
                const Vec2 seed{(i + 0.5) / grid_n, (j + 0.5) / grid_n};
                const NewtonResult res = newton_critical_point(spec, k, seed, tol);
                if (!res.converged) {
                    ++diag.newton_failures;
                    continue;
                }
                bool merged = false;
                for (const CriticalPoint& p : pts)
                    if (torus_dist(p.location, res.x) <= tol.merge_radius) {
                        merged = true;
                        break;
                    }
                if (merged) continue;
                CriticalPoint cp;
                cp.location = res.x;
                cp.value = spec.stream(k, res.x);
                const Mat2 hess = spec.stream_hessian(k, res.x);
                cp.hessian_det = hess.det();
                if (std::abs(cp.hessian_det) <= tol.hessian_degeneracy)
                    cp.kind = CriticalKind::Degenerate;
                else if (cp.hessian_det < 0.0)
                    cp.kind = CriticalKind::Saddle;
                else
                    cp.kind = hess.trace() > 0.0 ? CriticalKind::Minimum : CriticalKind::Maximum;
                pts.push_back(cp);
            }
        }
        std::sort(pts.begin(), pts.end(),
                  [](const CriticalPoint& a, const CriticalPoint& b) { return a.value < b.value; });

        if (pts.empty()) {
            diag.condition_e_ok = false;
            if (reason.tellp() == 0)
                reason << "component " << (k + 1)
                       << ": no critical points found (Newton failed everywhere)";
            continue;
        }
        int n_min = 0, n_max = 0, n_saddle = 0;
        for (const CriticalPoint& p : pts) {
            diag.min_hessian_det = std::min(diag.min_hessian_det, std::abs(p.hessian_det));
            switch (p.kind) {
                case CriticalKind::Minimum: ++n_min; break;
                case CriticalKind::Maximum: ++n_max; break;
                case CriticalKind::Saddle: ++n_saddle; break;
                case CriticalKind::Degenerate:
                    diag.condition_e_ok = false;
                    if (reason.tellp() == 0)
                        reason << "component " << (k + 1) << ": degenerate critical point at ("
                               << p.location.x << ", " << p.location.y << ")";
                    break;
            }
        }
        for (std::size_t a = 0; a + 1 < pts.size(); ++a) {
            const double sep = pts[a + 1].value - pts[a].value;
            diag.min_value_separation = std::min(diag.min_value_separation, sep);
            if (sep <= tol.value_distinctness) {
                diag.condition_e_ok = false;
                if (reason.tellp() == 0)
                    reason << "component " << (k + 1) << ": critical values coincide ("
                           << pts[a].value << " vs " << pts[a + 1].value << ")";
            }
        }
        if (n_min + n_max - n_saddle != 0) {
            // Euler characteristic of the torus; a mismatch means seeds missed
            // critical points or found spurious ones.
            diag.condition_e_ok = false;
            if (reason.tellp() == 0)
                reason << "component " << (k + 1) << ": Morse count mismatch (min " << n_min
                       << ", max " << n_max << ", saddle " << n_saddle << ")";
        }
    }
    diag.condition_e_reason = reason.str();
    return diag;
}

}  // namespace sweeplab
