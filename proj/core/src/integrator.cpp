#include "sweeplab/integrator.hpp"

#include <cmath>
#include <stdexcept>

#include "sweeplab/runner.hpp"

namespace sweeplab {

namespace {

// RK4 leg along a single stream component (or the drift) for flow time s.
// kComponentDrift selects X_0.
constexpr std::size_t kComponentDrift = static_cast<std::size_t>(-1);

inline Vec2 field_at(const StreamSpec& spec, std::size_t k, Vec2 x) {
    return k == kComponentDrift ? spec.drift_velocity(x) : spec.velocity(k, x);
}

inline Mat2 field_jac_at(const StreamSpec& spec, std::size_t k, Vec2 x) {
    return k == kComponentDrift ? spec.drift_jacobian(x) : spec.jacobian(k, x);
}

inline double field_sup(const StreamSpec& spec, std::size_t k) {
    return k == kComponentDrift ? spec.drift_sup_bound() : spec.velocity_sup_bound(k);
}

inline int substeps_for(double s, double sup, double cap) {
    const double travel = std::abs(s) * sup;
    if (!(travel > cap)) return 1;
    return static_cast<int>(std::ceil(travel / cap));
}

Vec2 rk4_leg(const StreamSpec& spec, std::size_t k, Vec2 x, double s,
             const IntegratorOptions& opts) {
    const int nsub = substeps_for(s, field_sup(spec, k), opts.substep_cap);
    const double ds = s / nsub;
    for (int i = 0; i < nsub; ++i) {
        const Vec2 k1 = field_at(spec, k, x);
        const Vec2 k2 = field_at(spec, k, x + (0.5 * ds) * k1);
        const Vec2 k3 = field_at(spec, k, x + (0.5 * ds) * k2);
        const Vec2 k4 = field_at(spec, k, x + ds * k3);
        x += (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

// RK4 leg carrying the exact Jacobian of the RK4 map along with the point.
void rk4_leg_tangent(const StreamSpec& spec, std::size_t k, Vec2& x, Mat2& m, double s,
                     const IntegratorOptions& opts) {
    const int nsub = substeps_for(s, field_sup(spec, k), opts.substep_cap);
    const double ds = s / nsub;
    const Mat2 id = Mat2::identity();
    for (int i = 0; i < nsub; ++i) {
        const Vec2 k1 = field_at(spec, k, x);
        const Vec2 x2 = x + (0.5 * ds) * k1;
        const Vec2 k2 = field_at(spec, k, x2);
        const Vec2 x3 = x + (0.5 * ds) * k2;
        const Vec2 k3 = field_at(spec, k, x3);
        const Vec2 x4 = x + ds * k3;
        const Vec2 k4 = field_at(spec, k, x4);

        const Mat2 j1 = field_jac_at(spec, k, x);
        const Mat2 j2 = field_jac_at(spec, k, x2) * (id + (0.5 * ds) * j1);
        const Mat2 j3 = field_jac_at(spec, k, x3) * (id + (0.5 * ds) * j2);
        const Mat2 j4 = field_jac_at(spec, k, x4) * (id + ds * j3);

        x += (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        m = (id + (ds / 6.0) * (j1 + 2.0 * j2 + 2.0 * j3 + j4)) * m;
    }
}

}  // namespace

Vec2 step_point(const StreamSpec& spec, Vec2 x, std::span<const double> incr, double h,
                const IntegratorOptions& opts) {
    if (h <= 0.0) throw std::invalid_argument("step size h must be positive");
    if (incr.size() != spec.num_components())
        throw std::invalid_argument("increment count must match component count");
    if (spec.has_drift()) x = rk4_leg(spec, kComponentDrift, x, h, opts);
    for (std::size_t k = 0; k < spec.num_components(); ++k)
        x = rk4_leg(spec, k, x, incr[k], opts);
    return x;
}

Vec2 step_heun(const StreamSpec& spec, Vec2 x, std::span<const double> incr, double h) {
    if (h <= 0.0) throw std::invalid_argument("step size h must be positive");
    if (incr.size() != spec.num_components())
        throw std::invalid_argument("increment count must match component count");
    Vec2 pred = x + h * spec.drift_velocity(x);
    for (std::size_t k = 0; k < spec.num_components(); ++k)
        pred += incr[k] * spec.velocity(k, x);
    Vec2 out = x + (0.5 * h) * (spec.drift_velocity(x) + spec.drift_velocity(pred));
    for (std::size_t k = 0; k < spec.num_components(); ++k)
        out += (0.5 * incr[k]) * (spec.velocity(k, x) + spec.velocity(k, pred));
    return out;
}

TangentState step_tangent(const StreamSpec& spec, TangentState state,
                          std::span<const double> incr, double h,
                          const IntegratorOptions& opts) {
    if (h <= 0.0) throw std::invalid_argument("step size h must be positive");
    if (incr.size() != spec.num_components())
        throw std::invalid_argument("increment count must match component count");
    if (spec.has_drift()) rk4_leg_tangent(spec, kComponentDrift, state.x, state.m, h, opts);
    for (std::size_t k = 0; k < spec.num_components(); ++k)
        rk4_leg_tangent(spec, k, state.x, state.m, incr[k], opts);
    return state;
}

LyapunovEstimate lyapunov_estimate(const StreamSpec& spec, Vec2 x0, Vec2 v0, double T,
                                   double h, std::uint64_t seed,
                                   const IntegratorOptions& opts, double renorm_interval) {
    if (T < 10.0) throw std::invalid_argument("lyapunov_estimate needs T >= 10");
    const auto steps_per_renorm = static_cast<std::size_t>(std::llround(renorm_interval / h));
    if (steps_per_renorm == 0 ||
        std::abs(steps_per_renorm * h - renorm_interval) > 1e-9 * renorm_interval)
        throw std::invalid_argument("renormalization interval must be a multiple of h");

    const double vnorm = v0.norm();
    if (vnorm == 0.0) throw std::invalid_argument("v0 must be nonzero");
    const Vec2 e1{v0.x / vnorm, v0.y / vnorm};
    const Vec2 e2{-e1.y, e1.x};

    TangentState st;
    st.x = x0;
    st.m = Mat2{e1.x, e2.x, e1.y, e2.y};  // columns e1, e2

    NoiseStream noise(seed, h, spec.num_components());
    const auto intervals = static_cast<std::size_t>(std::llround(T / renorm_interval));

    double sum_log1 = 0.0;
    double sum_logdet = 0.0;
    std::vector<double> interval_log1;
    interval_log1.reserve(intervals);

    for (std::size_t iv = 0; iv < intervals; ++iv) {
        for (std::size_t s = 0; s < steps_per_renorm; ++s)
            st = step_tangent(spec, st, noise.next_step(), h, opts);
        // QR of the 2x2 frame by Gram-Schmidt on columns.
        Vec2 c1{st.m.a, st.m.c};
        Vec2 c2{st.m.b, st.m.d};
        const double r11 = c1.norm();
        const Vec2 q1 = (1.0 / r11) * c1;
        const double r12 = q1.dot(c2);
        const Vec2 u2 = c2 - r12 * q1;
        const double r22 = u2.norm();
        const Vec2 q2 = (1.0 / r22) * u2;
        sum_log1 += std::log(r11);
        sum_logdet += std::log(r11 * r22);
        interval_log1.push_back(std::log(r11));
        st.m = Mat2{q1.x, q2.x, q1.y, q2.y};
    }

    LyapunovEstimate est;
    est.T = intervals * renorm_interval;
    est.seed = seed;
    est.lambda1 = sum_log1 / est.T;
    est.lambda2 = sum_logdet / est.T - est.lambda1;
    // det M accumulates r11 * r22 per interval; its log should stay near 0.
    est.det_drift = std::abs(std::expm1(sum_logdet));

    // Batch means over contiguous interval groups.
    const std::size_t n_batches = std::min<std::size_t>(20, interval_log1.size());
    if (n_batches >= 2) {
        const std::size_t per = interval_log1.size() / n_batches;
        double bm = 0.0, bm2 = 0.0;
        for (std::size_t b = 0; b < n_batches; ++b) {
            double s = 0.0;
            for (std::size_t i = b * per; i < (b + 1) * per; ++i) s += interval_log1[i];
            const double rate = s / (per * renorm_interval);
            bm += rate;
            bm2 += rate * rate;
        }
        bm /= n_batches;
        const double var = std::max(0.0, bm2 / n_batches - bm * bm);
        est.stderr1 = std::sqrt(var / (n_batches - 1));
    }
    return est;
}

DisplacementStats displacement_stats(const StreamSpec& spec, int n, double T, double h,
                                     std::uint64_t master_seed, const IntegratorOptions& opts,
                                     unsigned jobs) {
    if (n < 100) throw std::invalid_argument("displacement_stats needs n >= 100");
    const auto steps = static_cast<std::size_t>(std::llround(T / h));
    std::vector<Vec2> disp(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), jobs, [&](std::size_t i) {
        NoiseStream noise(stream_seed(master_seed, i), h, spec.num_components());
        Vec2 x{0.0, 0.0};
        for (std::size_t s = 0; s < steps; ++s) x = step_point(spec, x, noise.next_step(), h, opts);
        disp[i] = x;
    });

    DisplacementStats st;
    st.n = n;
    st.T = steps * h;
    Vec2 mean{0, 0};
    for (const Vec2& d : disp) mean += d;
    mean *= 1.0 / n;
    double cxx = 0, cxy = 0, cyy = 0, m4x = 0, m4y = 0;
    for (const Vec2& d : disp) {
        const Vec2 c = d - mean;
        cxx += c.x * c.x;
        cxy += c.x * c.y;
        cyy += c.y * c.y;
        m4x += c.x * c.x * c.x * c.x;
        m4y += c.y * c.y * c.y * c.y;
    }
    cxx /= n;
    cxy /= n;
    cyy /= n;
    m4x /= n;
    m4y /= n;
    st.mean_drift = (1.0 / st.T) * mean;
    st.mean_drift_se = {std::sqrt(cxx / n) / st.T, std::sqrt(cyy / n) / st.T};
    st.covariance_per_t = Mat2{cxx, cxy, cxy, cyy};
    st.covariance_per_t = (1.0 / st.T) * st.covariance_per_t;
    st.excess_kurtosis = {m4x / (cxx * cxx) - 3.0, m4y / (cyy * cyy) - 3.0};
    st.kurtosis_se = std::sqrt(24.0 / n);
    return st;
}

std::vector<PairSample> flow_two_point(const StreamSpec& spec, Vec2 x1, Vec2 x2,
                                       const NoisePath& noise, double T, double sample_dt,
                                       const IntegratorOptions& opts) {
    const auto steps = static_cast<std::size_t>(std::llround(T / noise.h));
    if (steps > noise.steps()) throw std::invalid_argument("noise path shorter than horizon");
    const auto per_sample =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sample_dt / noise.h)));
    std::vector<PairSample> out;
    out.push_back({0.0, x1, x2});
    for (std::size_t s = 0; s < steps; ++s) {
        const auto incr = noise.step(s);
        x1 = step_point(spec, x1, incr, noise.h, opts);
        x2 = step_point(spec, x2, incr, noise.h, opts);
        if ((s + 1) % per_sample == 0 || s + 1 == steps)
            out.push_back({(s + 1) * noise.h, x1, x2});
    }
    return out;
}

}  // namespace sweeplab
