#include "sweeplab/polyline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sweeplab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void Polyline::track_displacements() {
    track.assign(pts.size(), VertexTrack{});
    for (std::size_t i = 0; i < pts.size(); ++i) track[i].origin = pts[i];
}

double Polyline::arc_length() const {
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) len += dist(pts[i], pts[i + 1]);
    return len;
}

Polyline Polyline::unit_segment(double max_seg, std::size_t vertex_budget) {
    Polyline c;
    c.max_seg = max_seg;
    c.vertex_budget = vertex_budget;
    const auto n = static_cast<std::size_t>(std::ceil(1.0 / max_seg));
    for (std::size_t i = 0; i <= n; ++i)
        c.pts.push_back({-0.5 + static_cast<double>(i) / n, 0.0});
    return c;
}

Polyline Polyline::unit_arc(double max_seg, std::size_t vertex_budget) {
    Polyline c;
    c.max_seg = max_seg;
    c.vertex_budget = vertex_budget;
    // Half circle of radius 1/2: endpoints (-1/2, 0) and (1/2, 0), diameter 1.
    const double r = 0.5;
    const auto n = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(kPi * r / max_seg)));
    for (std::size_t i = 0; i <= n; ++i) {
        const double a = kPi - kPi * static_cast<double>(i) / n;
        c.pts.push_back({r * std::cos(a), r * std::sin(a)});
    }
    return c;
}

namespace {

struct RefineContext {
    RefineContext(const StreamSpec& spec_, std::span<const double> incr_, double h_,
                  const IntegratorOptions& opts_, std::size_t budget_, bool tracking_)
        : spec(spec_), incr(incr_), h(h_), opts(opts_), budget(budget_), tracking(tracking_) {}

    const StreamSpec& spec;
    std::span<const double> incr;
    double h;
    const IntegratorOptions& opts;
    std::size_t budget;
    bool tracking;
    bool exhausted = false;

    std::vector<Vec2> out;
    std::vector<Polyline::VertexTrack> out_track;

    void emit(const Vec2& post, const Polyline::VertexTrack& tr) {
        out.push_back(post);
        if (tracking) out_track.push_back(tr);
    }

    // Emits everything strictly between (pre_a, post_a) and (pre_b, post_b).
    void refine_between(const Vec2& pre_a, const Vec2& post_a, const Vec2& pre_b,
                        const Vec2& post_b, int depth) {
        if (exhausted) return;
        if (dist(post_a, post_b) <= max_seg_) return;
        if (depth > 48) {  // cannot happen for a smooth flow; fail loudly
            exhausted = true;
            return;
        }
        if (out.size() + 1 > budget) {
            exhausted = true;
            return;
        }
        const Vec2 pre_m = 0.5 * (pre_a + pre_b);
        const Vec2 post_m = step_point(spec, pre_m, incr, h, opts);
        refine_between(pre_a, post_a, pre_m, post_m, depth + 1);
        Polyline::VertexTrack tr;
        if (tracking) {
            tr.origin = pre_m;  // insertion-time position as x_0 proxy
            tr.max_disp = dist(post_m, pre_m);
            tr.original = false;
        }
        emit(post_m, tr);
        refine_between(pre_m, post_m, pre_b, post_b, depth + 1);
    }

    double max_seg_ = 0.0;
};

}  // namespace

void advect_step(const StreamSpec& spec, Polyline& curve, std::span<const double> incr, double h,
                 const IntegratorOptions& opts) {
    if (curve.pts.empty()) return;
    const std::size_t n = curve.pts.size();

    RefineContext ctx{spec, incr, h, opts, curve.vertex_budget, curve.tracking()};
    ctx.max_seg_ = curve.max_seg;
    ctx.out.reserve(n + n / 4);

    Vec2 prev_pre = curve.pts[0];
    Vec2 prev_post = step_point(spec, prev_pre, incr, h, opts);
    Polyline::VertexTrack tr0;
    if (ctx.tracking) {
        tr0 = curve.track[0];
        tr0.max_disp = std::max(tr0.max_disp, dist(prev_post, tr0.origin));
    }
    ctx.emit(prev_post, tr0);

    for (std::size_t i = 1; i < n; ++i) {
        const Vec2 pre = curve.pts[i];
        const Vec2 post = step_point(spec, pre, incr, h, opts);
        ctx.refine_between(prev_pre, prev_post, pre, post, 0);
        Polyline::VertexTrack tr;
        if (ctx.tracking) {
            tr = curve.track[i];
            tr.max_disp = std::max(tr.max_disp, dist(post, tr.origin));
        }
        ctx.emit(post, tr);
    }

    curve.pts = std::move(ctx.out);
    if (ctx.tracking) curve.track = std::move(ctx.out_track);
    curve.created_at += h;
    if (ctx.exhausted || curve.pts.size() > curve.vertex_budget)
        throw BudgetExhausted(curve.created_at, curve.pts.size());
}

std::vector<Vec2> convex_hull(std::vector<Vec2> p) {
    std::sort(p.begin(), p.end(),
              [](const Vec2& a, const Vec2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    p.erase(std::unique(p.begin(), p.end()), p.end());
    const std::size_t n = p.size();
    if (n <= 2) return p;
    std::vector<Vec2> h(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && (h[k - 1] - h[k - 2]).cross(p[i] - h[k - 2]) <= 0.0) --k;
        h[k++] = p[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && (h[k - 1] - h[k - 2]).cross(p[i] - h[k - 2]) <= 0.0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    return h;
}

namespace {

double hull_diameter(const std::vector<Vec2>& h) {
    const std::size_t n = h.size();
    if (n == 1) return 0.0;
    if (n == 2) return dist(h[0], h[1]);
    // Rotating calipers.
    double best = 0.0;
    std::size_t j = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e = h[(i + 1) % n] - h[i];
        while (true) {
            const std::size_t jn = (j + 1) % n;
            if (e.cross(h[jn] - h[j]) > 0.0)
                j = jn;
            else
                break;
        }
        best = std::max(best, dist(h[i], h[j]));
        best = std::max(best, dist(h[(i + 1) % n], h[j]));
    }
    return best;
}

}  // namespace

double diameter(const Polyline& curve) {
    const auto& p = curve.pts;
    if (p.size() < 2) throw std::invalid_argument("diameter needs at least 2 vertices");
    if (p.size() <= 2048) {
        double best = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = i + 1; j < p.size(); ++j)
                best = std::max(best, (p[i] - p[j]).norm2());
        return std::sqrt(best);
    }
    return hull_diameter(convex_hull(p));
}

bool is_long(const Polyline& curve) { return diameter(curve) >= 1.0; }

double dist_to_point(const Polyline& curve, Vec2 a) {
    const auto& p = curve.pts;
    if (p.empty()) throw std::invalid_argument("dist_to_point needs a nonempty curve");
    if (p.size() == 1) return dist(p[0], a);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        best = std::min(best, point_segment_dist(a, p[i], p[i + 1]));
    return best;
}

double dist_to_line(const Polyline& curve, Vec2 unit_normal, double offset) {
    const auto& p = curve.pts;
    if (p.empty()) throw std::invalid_argument("dist_to_line needs a nonempty curve");
    double best = std::numeric_limits<double>::infinity();
    for (const Vec2& v : p) best = std::min(best, std::abs(unit_normal.dot(v) - offset));
    return best;
}

GrowthTrace track_growth(const StreamSpec& spec, Polyline curve, NoiseStream& noise, double T,
                         const IntegratorOptions& opts, bool refine, double sample_dt) {
    const double h = noise.h();
    const auto steps = static_cast<std::size_t>(std::llround(T / h));
    if (std::abs(steps * h - T) > 1e-9 * std::max(1.0, T))
        throw std::invalid_argument("T must be a multiple of h");
    const auto per_sample =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sample_dt / h)));

    if (!curve.tracking()) curve.track_displacements();
    if (!refine) curve.max_seg = std::numeric_limits<double>::infinity();

    GrowthTrace trace;
    auto sample_now = [&](double t) {
        GrowthSample s;
        s.t = t;
        s.diameter = curve.pts.size() >= 2 ? diameter(curve) : 0.0;
        s.arc_length = curve.arc_length();
        for (std::size_t i = 0; i < curve.track.size(); ++i) {
            s.phi = std::max(s.phi, curve.track[i].max_disp);
            if (curve.track[i].original) s.phi_original = std::max(s.phi_original, curve.track[i].max_disp);
        }
        trace.samples.push_back(s);
    };
    sample_now(0.0);

    for (std::size_t s = 0; s < steps; ++s) {
        try {
            advect_step(spec, curve, noise.next_step(), h, opts);
        } catch (const BudgetExhausted&) {
            trace.budget_exhausted = true;
            sample_now((s + 1) * h);
            return trace;
        }
        if ((s + 1) % per_sample == 0 || s + 1 == steps) sample_now((s + 1) * h);
    }
    return trace;
}

std::string curve_csv(const Polyline& curve, double t) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < curve.pts.size(); ++i)
        os << t << "," << i << "," << curve.pts[i].x << "," << curve.pts[i].y << "\n";
    return os.str();
}

}  // namespace sweeplab
