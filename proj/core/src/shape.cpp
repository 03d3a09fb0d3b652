#include "sweeplab/shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sweeplab/noise.hpp"
#include "sweeplab/runner.hpp"
#include "sweeplab/stats.hpp"

namespace sweeplab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Polyline default_initial_curve(const ShapeRunOptions& opts) {
    return Polyline::unit_segment(opts.delta_max, opts.vertex_budget);
}

double passage_horizon(double t, const ShapeRunOptions& opts) {
    return opts.t_max_factor * t * opts.norm_upper_guess + opts.t_max_slack;
}

struct PassageBatch {
    std::vector<double> tau;  // reached samples
    int not_reached = 0;
};

template <typename RunOne>
PassageBatch run_batch(int n, unsigned jobs, const RunOne& run_one) {
    std::vector<PassageRecord> recs(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), jobs,
                 [&](std::size_t i) { recs[i] = run_one(i); });
    PassageBatch batch;
    for (const PassageRecord& r : recs) {
        if (r.outcome == PassageOutcome::Reached)
            batch.tau.push_back(r.tau);
        else
            ++batch.not_reached;
    }
    return batch;
}

// Shared ladder -> extrapolation logic for point and line passage.
template <typename TargetRunner>
std::pair<std::vector<LadderPoint>, InverseTFit> ladder_estimate(
    const std::vector<double>& t_ladder, int n_per_t, std::uint64_t master_seed,
    const ShapeRunOptions& opts, bool& reliable, const TargetRunner& runner) {
    if (t_ladder.size() < 2) throw std::invalid_argument("t_ladder needs >= 2 entries");
    for (std::size_t i = 0; i + 1 < t_ladder.size(); ++i)
        if (!(t_ladder[i] < t_ladder[i + 1]))
            throw std::invalid_argument("t_ladder must be increasing");
    if (n_per_t < 20) throw std::invalid_argument("n_per_t must be >= 20");

    std::vector<LadderPoint> ladder;
    reliable = true;
    for (std::size_t ti = 0; ti < t_ladder.size(); ++ti) {
        const double t = t_ladder[ti];
        const std::uint64_t seed_t = stream_seed(master_seed, ti);
        const PassageBatch batch = run_batch(n_per_t, opts.jobs, [&](std::size_t rep) {
            return runner(t, stream_seed(seed_t, rep));
        });
        LadderPoint pt;
        pt.t = t;
        pt.n = n_per_t;
        pt.not_reached = batch.not_reached;
        std::vector<double> ratios;
        ratios.reserve(batch.tau.size());
        for (double tau : batch.tau) ratios.push_back(tau / t);
        const SampleStats st = sample_stats(ratios);
        pt.mean = st.mean;
        pt.se = st.se;
        if (pt.not_reached > n_per_t / 20) reliable = false;
        ladder.push_back(pt);
    }

    std::vector<double> ts, ys, ses;
    for (const LadderPoint& p : ladder) {
        if (p.n - p.not_reached < 2) continue;
        ts.push_back(p.t);
        ys.push_back(p.mean);
        ses.push_back(std::max(p.se, 1e-12));
    }
    if (ts.size() < 2) {
        reliable = false;
        InverseTFit f;
        f.a = ladder.empty() ? 0.0 : ladder.back().mean;
        f.a_se = std::numeric_limits<double>::infinity();
        return {ladder, f};
    }
    return {ladder, fit_inverse_t(ts, ys, ses)};
}

double subadditivity_defect(const std::vector<LadderPoint>& ladder) {
    // mean_j * t_j <= mean_i * t_i + E tau over a fresh (t_j - t_i) leg; legs
    // are evaluated where the gap coincides with a ladder point.
    double defect = 0.0;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        for (std::size_t j = i + 1; j < ladder.size(); ++j) {
            const double gap = ladder[j].t - ladder[i].t;
            for (const LadderPoint& leg : ladder) {
                if (std::abs(leg.t - gap) <= 1e-9 * std::max(1.0, gap)) {
                    const double lhs = ladder[j].mean * ladder[j].t;
                    const double rhs = ladder[i].mean * ladder[i].t + leg.mean * leg.t;
                    defect = std::max(defect, lhs - rhs);
                }
            }
        }
    }
    return defect;
}

}  // namespace

NormEstimate estimate_norm(const StreamSpec& spec, Vec2 v, const std::vector<double>& t_ladder,
                           int n_per_t, double r, std::uint64_t master_seed,
                           const ShapeRunOptions& opts) {
    const double vn = v.norm();
    if (!(vn > 0.0)) throw std::invalid_argument("direction must be nonzero");
    const Vec2 unit{v.x / vn, v.y / vn};

    NormEstimate est;
    est.direction = unit;
    est.radius_r = r;
    const auto runner = [&](double t, std::uint64_t seed) {
        NoiseStream noise(seed, opts.h, spec.num_components());
        return first_passage(spec, default_initial_curve(opts), noise, t * unit, r,
                             passage_horizon(t, opts), opts.integrator());
    };
    auto [ladder, fit] = ladder_estimate(t_ladder, n_per_t, master_seed, opts, est.reliable, runner);
    est.ladder = std::move(ladder);
    est.norm = fit.a;
    est.norm_se = fit.a_se;
    est.fit_rss = fit.rss;
    est.subadd_defect = subadditivity_defect(est.ladder);
    return est;
}

std::vector<Vec2> ShapeEstimate::boundary() const {
    std::vector<Vec2> b;
    b.reserve(angles.size());
    for (std::size_t i = 0; i < angles.size(); ++i)
        b.push_back({radius[i] * std::cos(angles[i]), radius[i] * std::sin(angles[i])});
    return b;
}

double ShapeEstimate::mean_radius() const {
    if (radius.empty()) return 0.0;
    double s = 0.0;
    for (double r : radius) s += r;
    return s / static_cast<double>(radius.size());
}

ShapeEstimate build_shape_from_norm(const StreamSpec& spec, int m_directions,
                                    const std::vector<double>& t_ladder, int n_per_t, double r,
                                    std::uint64_t master_seed, const ShapeRunOptions& opts) {
    if (m_directions < 8) throw std::invalid_argument("need m_directions >= 8");
    ShapeEstimate shape;
    shape.provenance = "norm-based";
    shape.angles.resize(m_directions);
    shape.radius.resize(m_directions);
    shape.ci_lo.resize(m_directions);
    shape.ci_hi.resize(m_directions);
    for (int j = 0; j < m_directions; ++j) {
        const double angle = kTwoPi * j / m_directions;
        const Vec2 v{std::cos(angle), std::sin(angle)};
        const NormEstimate est = estimate_norm(spec, v, t_ladder, n_per_t, r,
                                               stream_seed(master_seed, static_cast<std::uint64_t>(j)),
                                               opts);
        shape.angles[j] = angle;
        shape.radius[j] = est.norm > 0.0 ? 1.0 / est.norm : 0.0;
        const double lo_norm = est.norm + 2.0 * est.norm_se;
        const double hi_norm = std::max(1e-12, est.norm - 2.0 * est.norm_se);
        shape.ci_lo[j] = lo_norm > 0.0 ? 1.0 / lo_norm : 0.0;
        shape.ci_hi[j] = 1.0 / hi_norm;
        if (!est.reliable) ++shape.unreliable_directions;
    }
    const double mr = shape.mean_radius();
    shape.convexity_defect = mr > 0.0 ? hull_defect(shape.boundary()) / mr : 0.0;
    return shape;
}

ShapeEstimate build_shape_from_swept(const StreamSpec& spec, const Polyline& curve0, int n,
                                     double T, double eta, int m_directions,
                                     std::uint64_t master_seed, const ShapeRunOptions& opts) {
    if (n < 20) throw std::invalid_argument("need n >= 20 sweep realizations");
    if (m_directions < 8) throw std::invalid_argument("need m_directions >= 8");
    if (T < 5.0)
        throw std::invalid_argument("sweep horizon too short for a shape estimate (T < 5)");

    std::vector<std::vector<double>> per_real(static_cast<std::size_t>(n));
    std::vector<unsigned char> completed(static_cast<std::size_t>(n), 0);
    parallel_for(static_cast<std::size_t>(n), opts.jobs, [&](std::size_t i) {
        NoiseStream noise(stream_seed(master_seed, i), opts.h, spec.num_components());
        SweepResult sweep =
            run_sweep(spec, curve0, noise, T, eta, opts.integrator(), /*sample_dt=*/T);
        if (sweep.budget_exhausted) return;
        std::vector<double> bins(static_cast<std::size_t>(m_directions), 0.0);
        for (const auto& [ci, cj] : sweep.grid.set_cells()) {
            const Vec2 c{(ci + 0.5) * eta, (cj + 0.5) * eta};
            const double rad = c.norm();
            double a = std::atan2(c.y, c.x);
            if (a < 0.0) a += kTwoPi;
            const double width = kTwoPi / m_directions;
            auto bin = static_cast<std::size_t>(std::floor((a + width / 2.0) / width));
            if (bin >= static_cast<std::size_t>(m_directions)) bin = 0;
            bins[bin] = std::max(bins[bin], rad);
        }
        for (double& b : bins) b /= T;
        per_real[i] = std::move(bins);
        completed[i] = 1;
    });

    ShapeEstimate shape;
    shape.provenance = "swept-based";
    shape.angles.resize(m_directions);
    shape.radius.resize(m_directions);
    shape.ci_lo.resize(m_directions);
    shape.ci_hi.resize(m_directions);
    int n_done = 0;
    for (int i = 0; i < n; ++i) n_done += completed[i];
    if (n_done < 2) throw std::runtime_error("all sweep realizations exhausted their budget");
    shape.unreliable_directions = 0;
    for (int j = 0; j < m_directions; ++j) {
        std::vector<double> vals;
        vals.reserve(n_done);
        for (int i = 0; i < n; ++i)
            if (completed[i]) vals.push_back(per_real[i][static_cast<std::size_t>(j)]);
        const SampleStats st = sample_stats(vals);
        shape.angles[j] = kTwoPi * j / m_directions;
        shape.radius[j] = st.mean;
        shape.ci_lo[j] = st.mean - 2.0 * st.se;
        shape.ci_hi[j] = st.mean + 2.0 * st.se;
    }
    const double mr = shape.mean_radius();
    if (!(mr > 3.0 * eta))
        throw std::invalid_argument("swept shape degenerate: radius not resolved by the grid");
    shape.convexity_defect = hull_defect(shape.boundary()) / mr;
    return shape;
}

std::vector<SurvivalRow> passage_tail(const StreamSpec& spec, const std::vector<double>& d_list,
                                      double beta, int n, double r, Vec2 v,
                                      std::uint64_t master_seed, const ShapeRunOptions& opts) {
    for (std::size_t i = 0; i + 1 < d_list.size(); ++i)
        if (!(d_list[i] < d_list[i + 1])) throw std::invalid_argument("d_list must be increasing");
    if (n < 50) throw std::invalid_argument("passage_tail needs n >= 50");
    const double vn = v.norm();
    if (!(vn > 0.0)) throw std::invalid_argument("direction must be nonzero");
    const Vec2 unit{v.x / vn, v.y / vn};

    std::vector<SurvivalRow> rows;
    for (std::size_t di = 0; di < d_list.size(); ++di) {
        const double d = d_list[di];
        const double horizon = beta * d;
        const std::uint64_t seed_d = stream_seed(master_seed, di);
        std::vector<PassageRecord> recs(static_cast<std::size_t>(n));
        parallel_for(static_cast<std::size_t>(n), opts.jobs, [&](std::size_t i) {
            NoiseStream noise(stream_seed(seed_d, i), opts.h, spec.num_components());
            recs[i] = first_passage(spec, default_initial_curve(opts), noise, d * unit, r,
                                    horizon, opts.integrator());
        });
        SurvivalRow row;
        row.d = d;
        row.beta = beta;
        row.n = n;
        for (const PassageRecord& rec : recs) {
            if (rec.outcome == PassageOutcome::NotReachedByTmax)
                ++row.survived;
            else if (rec.outcome == PassageOutcome::BudgetExhausted)
                ++row.censored;
        }
        const int decided = row.n - row.censored;
        const WilsonInterval w =
            wilson_interval(static_cast<std::size_t>(row.survived),
                            static_cast<std::size_t>(std::max(decided, 0)));
        row.p = w.p;
        row.wilson_lo = w.lo;
        row.wilson_hi = w.hi;
        rows.push_back(row);
    }
    return rows;
}

OccupationResult occupation_fraction(const StreamSpec& spec, Vec2 a, double r_star, double T,
                                     std::uint64_t seed, const ShapeRunOptions& opts) {
    if (T < 10.0) throw std::invalid_argument("occupation_fraction needs T >= 10");
    NoiseStream noise(seed, opts.h, spec.num_components());
    Polyline curve = default_initial_curve(opts);
    const auto steps = static_cast<std::size_t>(std::llround(T / opts.h));
    OccupationResult res;
    std::size_t hits = 0, done = 0;
    for (std::size_t s = 0; s < steps; ++s) {
        try {
            advect_step(spec, curve, noise.next_step(), opts.h, opts.integrator());
        } catch (const BudgetExhausted&) {
            res.completed = false;
            break;
        }
        ++done;
        if (dist_to_point(curve, a) <= r_star) ++hits;
    }
    res.t_elapsed = done * opts.h;
    res.fraction = done == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(done);
    return res;
}

LinePassageEstimate line_passage(const StreamSpec& spec, Vec2 unit_normal,
                                 const std::vector<double>& t_ladder, int n_per_t, double r,
                                 std::uint64_t master_seed, const ShapeRunOptions& opts) {
    const double nn = unit_normal.norm();
    if (!(nn > 0.0)) throw std::invalid_argument("normal must be nonzero");
    const Vec2 unit{unit_normal.x / nn, unit_normal.y / nn};

    LinePassageEstimate est;
    est.normal = unit;
    const auto runner = [&](double t, std::uint64_t seed) {
        NoiseStream noise(seed, opts.h, spec.num_components());
        return first_line_passage(spec, default_initial_curve(opts), noise, unit, t, r,
                                  passage_horizon(t, opts), opts.integrator());
    };
    auto [ladder, fit] = ladder_estimate(t_ladder, n_per_t, master_seed, opts, est.reliable, runner);
    est.ladder = std::move(ladder);
    est.rho = fit.a;
    est.rho_se = fit.a_se;
    return est;
}

namespace {

double boundary_point_dist(const Vec2& p, const std::vector<Vec2>& poly) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i)
        best = std::min(best, point_segment_dist(p, poly[i], poly[(i + 1) % n]));
    return best;
}

double directed_hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b,
                          int samples_per_edge) {
    double worst = 0.0;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p0 = a[i];
        const Vec2& p1 = a[(i + 1) % n];
        for (int s = 0; s < samples_per_edge; ++s) {
            const double t = static_cast<double>(s) / samples_per_edge;
            worst = std::max(worst, boundary_point_dist(p0 + t * (p1 - p0), b));
        }
    }
    return worst;
}

}  // namespace

double polygon_hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b,
                         int samples_per_edge) {
    if (a.size() < 3 || b.size() < 3)
        throw std::invalid_argument("polygon_hausdorff needs >= 3 vertices");
    return std::max(directed_hausdorff(a, b, samples_per_edge),
                    directed_hausdorff(b, a, samples_per_edge));
}

double hull_defect(const std::vector<Vec2>& polygon) {
    if (polygon.size() < 3) return 0.0;
    const std::vector<Vec2> hull = convex_hull(polygon);
    if (hull.size() < 3) return 0.0;
    return polygon_hausdorff(polygon, hull);
}

}  // namespace sweeplab
