#include "sweeplab/occupancy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sweeplab {

OccupancyGrid::OccupancyGrid(double eta) : eta_(eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("cell size eta must be positive");
}

long OccupancyGrid::cell_of(double coord) const {
    return static_cast<long>(std::floor(coord / eta_));
}

std::size_t OccupancyGrid::word_index(long ci, long cj) const {
    const auto row = static_cast<std::size_t>(cj - cj0_);
    const auto col = static_cast<std::size_t>(ci - ci0_);
    return row * words_per_row_ + col / 64;
}

bool OccupancyGrid::test_cell(long ci, long cj) const {
    if (ci < ci0_ || ci >= ci0_ + ncols_ || cj < cj0_ || cj >= cj0_ + nrows_) return false;
    const auto col = static_cast<std::size_t>(ci - ci0_);
    return (bits_[word_index(ci, cj)] >> (col % 64)) & 1u;
}

void OccupancyGrid::ensure_cell(long ci, long cj) {
    if (ncols_ == 0) {
        // First touch: start a small window centered on the cell.
        ci0_ = ci - 8;
        cj0_ = cj - 8;
        ncols_ = 17;
        nrows_ = 17;
        words_per_row_ = (static_cast<std::size_t>(ncols_) + 63) / 64;
        bits_.assign(words_per_row_ * nrows_, 0);
        return;
    }
    if (ci >= ci0_ && ci < ci0_ + ncols_ && cj >= cj0_ && cj < cj0_ + nrows_) return;
    // Expand in whole cells with slack so repeated growth amortizes.
    long nci0 = ci0_, ncj0 = cj0_, nci1 = ci0_ + ncols_, ncj1 = cj0_ + nrows_;
    if (ci < nci0) nci0 = ci - (ncols_ / 4 + 8);
    if (ci >= nci1) nci1 = ci + (ncols_ / 4 + 8) + 1;
    if (cj < ncj0) ncj0 = cj - (nrows_ / 4 + 8);
    if (cj >= ncj1) ncj1 = cj + (nrows_ / 4 + 8) + 1;
    const long nncols = nci1 - nci0;
    const long nnrows = ncj1 - ncj0;
    const std::size_t nwpr = (static_cast<std::size_t>(nncols) + 63) / 64;
    std::vector<std::uint64_t> nbits(nwpr * static_cast<std::size_t>(nnrows), 0);
    const long shift = ci0_ - nci0;  // >= 0
    for (long j = 0; j < nrows_; ++j) {
        const auto src = static_cast<std::size_t>(j) * words_per_row_;
        const auto dst = static_cast<std::size_t>(j + cj0_ - ncj0) * nwpr;
        const auto word_shift = static_cast<std::size_t>(shift) / 64;
        const unsigned bit_shift = static_cast<unsigned>(shift % 64);
        for (std::size_t w = 0; w < words_per_row_; ++w) {
            const std::uint64_t v = bits_[src + w];
            if (v == 0) continue;
            nbits[dst + w + word_shift] |= v << bit_shift;
            if (bit_shift != 0) nbits[dst + w + word_shift + 1] |= v >> (64 - bit_shift);
        }
    }
    ci0_ = nci0;
    cj0_ = ncj0;
    ncols_ = nncols;
    nrows_ = nnrows;
    words_per_row_ = nwpr;
    bits_ = std::move(nbits);
}

void OccupancyGrid::set_cell(long ci, long cj) {
    ensure_cell(ci, cj);
    const auto col = static_cast<std::size_t>(ci - ci0_);
    std::uint64_t& w = bits_[word_index(ci, cj)];
    const std::uint64_t mask = 1ULL << (col % 64);
    if (!(w & mask)) {
        w |= mask;
        ++count_;
    }
}

std::size_t OccupancyGrid::count() const { return count_; }

void OccupancyGrid::stamp_segment(Vec2 a, Vec2 b) {
    long i = cell_of(a.x), j = cell_of(a.y);
    const long ie = cell_of(b.x), je = cell_of(b.y);
    set_cell(i, j);
    if (i == ie && j == je) return;

    const double dx = b.x - a.x, dy = b.y - a.y;
    const int si = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
    const int sj = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);
    const double inf = std::numeric_limits<double>::infinity();
    double tmax_x = inf, tmax_y = inf, tdelta_x = inf, tdelta_y = inf;
    if (si != 0) {
        const double boundary = (i + (si > 0 ? 1 : 0)) * eta_;
        tmax_x = (boundary - a.x) / dx;
        tdelta_x = eta_ / std::abs(dx);
    }
    if (sj != 0) {
        const double boundary = (j + (sj > 0 ? 1 : 0)) * eta_;
        tmax_y = (boundary - a.y) / dy;
        tdelta_y = eta_ / std::abs(dy);
    }
    long guard = 2 * (std::labs(ie - i) + std::labs(je - j)) + 8;
    while ((i != ie || j != je) && guard-- > 0) {
        if (tmax_x < tmax_y) {
            i += si;
            tmax_x += tdelta_x;
        } else if (tmax_y < tmax_x) {
            j += sj;
            tmax_y += tdelta_y;
        } else {
            // Exact corner crossing: the segment touches both side cells.
            set_cell(i + si, j);
            set_cell(i, j + sj);
            i += si;
            j += sj;
            tmax_x += tdelta_x;
            tmax_y += tdelta_y;
        }
        set_cell(i, j);
    }
    set_cell(ie, je);
}

void OccupancyGrid::stamp(const Polyline& curve) {
    const auto& p = curve.pts;
    if (p.empty()) return;
    if (p.size() == 1) {
        set_cell(cell_of(p[0].x), cell_of(p[0].y));
        return;
    }
    for (std::size_t s = 0; s + 1 < p.size(); ++s) stamp_segment(p[s], p[s + 1]);
}

OccupancyGrid OccupancyGrid::dilated(double r) const {
    if (r < 0.0) throw std::invalid_argument("dilation radius must be nonnegative");
    OccupancyGrid out(eta_);
    out.t_latest_ = t_latest_;
    const long k = static_cast<long>(std::floor(r / eta_));
    std::vector<std::pair<long, long>> offsets;
    for (long di = -k; di <= k; ++di)
        for (long dj = -k; dj <= k; ++dj)
            if ((di * di + dj * dj) * eta_ * eta_ <= r * r) offsets.emplace_back(di, dj);
    for (const auto& [ci, cj] : set_cells())
        for (const auto& [di, dj] : offsets) out.set_cell(ci + di, cj + dj);
    return out;
}

bool OccupancyGrid::subset_of(const OccupancyGrid& other) const {
    if (eta_ != other.eta_) throw std::invalid_argument("grids have different eta");
    for (const auto& [ci, cj] : set_cells())
        if (!other.test_cell(ci, cj)) return false;
    return true;
}

void OccupancyGrid::merge(const OccupancyGrid& other) {
    if (eta_ != other.eta_) throw std::invalid_argument("grids have different eta");
    for (const auto& [ci, cj] : other.set_cells()) set_cell(ci, cj);
    t_latest_ = std::max(t_latest_, other.t_latest_);
}

std::vector<std::pair<long, long>> OccupancyGrid::set_cells() const {
    std::vector<std::pair<long, long>> cells;
    cells.reserve(count_);
    for (long j = 0; j < nrows_; ++j) {
        for (std::size_t w = 0; w < words_per_row_; ++w) {
            std::uint64_t v = bits_[static_cast<std::size_t>(j) * words_per_row_ + w];
            while (v != 0) {
                const int bit = std::countr_zero(v);
                v &= v - 1;
                const long ci = ci0_ + static_cast<long>(w * 64 + static_cast<std::size_t>(bit));
                cells.emplace_back(ci, cj0_ + j);
            }
        }
    }
    return cells;
}

void OccupancyGrid::write(std::ostream& os) const {
    os.precision(17);
    os << "sweeplab-grid 1\n";
    os << "eta " << eta_ << "\n";
    os << "t_latest " << t_latest_ << "\n";
    os << "window " << ci0_ << " " << cj0_ << " " << ncols_ << " " << nrows_ << "\n";
    // Row-major runs of set columns: "r <cj> <start> <end>" per run, end exclusive.
    for (long j = 0; j < nrows_; ++j) {
        long run_start = 0;
        bool in_run = false;
        for (long c = 0; c <= ncols_; ++c) {
            const bool on = c < ncols_ && test_cell(ci0_ + c, cj0_ + j);
            if (on && !in_run) {
                run_start = c;
                in_run = true;
            } else if (!on && in_run) {
                os << "r " << (cj0_ + j) << " " << (ci0_ + run_start) << " " << (ci0_ + c) << "\n";
                in_run = false;
            }
        }
    }
    os << "end\n";
}

OccupancyGrid OccupancyGrid::read(std::istream& is) {
    std::string magic;
    int version = 0;
    is >> magic >> version;
    if (magic != "sweeplab-grid" || version != 1)
        throw std::runtime_error("not a sweeplab grid file");
    std::string key;
    double eta = 0.0, t_latest = 0.0;
    long ci0 = 0, cj0 = 0, ncols = 0, nrows = 0;
    is >> key >> eta;
    if (key != "eta") throw std::runtime_error("grid file: expected eta");
    is >> key >> t_latest;
    if (key != "t_latest") throw std::runtime_error("grid file: expected t_latest");
    is >> key >> ci0 >> cj0 >> ncols >> nrows;
    if (key != "window") throw std::runtime_error("grid file: expected window");
    OccupancyGrid g(eta);
    g.t_latest_ = t_latest;
    while (is >> key) {
        if (key == "end") return g;
        if (key != "r") throw std::runtime_error("grid file: unexpected token " + key);
        long cj = 0, s = 0, e = 0;
        is >> cj >> s >> e;
        for (long c = s; c < e; ++c) g.set_cell(c, cj);
    }
    throw std::runtime_error("grid file: missing end marker");
}

void OccupancyGrid::save(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write grid: " + path);
    write(os);
}

OccupancyGrid OccupancyGrid::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read grid: " + path);
    return read(is);
}

SweepResult run_sweep(const StreamSpec& spec, Polyline curve0, NoiseStream& noise, double T,
                      double eta, const IntegratorOptions& opts, double sample_dt) {
    const double h = noise.h();
    const auto steps = static_cast<std::size_t>(std::llround(T / h));
    const auto per_sample =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sample_dt / h)));

    SweepResult result{OccupancyGrid(eta), {}, false, {}};
    if (!curve0.tracking()) curve0.track_displacements();
    result.grid.stamp(curve0);

    auto sample_now = [&](double t) {
        GrowthSample s;
        s.t = t;
        s.diameter = curve0.pts.size() >= 2 ? diameter(curve0) : 0.0;
        s.arc_length = curve0.arc_length();
        for (const auto& tr : curve0.track) {
            s.phi = std::max(s.phi, tr.max_disp);
            if (tr.original) s.phi_original = std::max(s.phi_original, tr.max_disp);
        }
        result.trace.samples.push_back(s);
    };
    sample_now(0.0);

    for (std::size_t s = 0; s < steps; ++s) {
        try {
            advect_step(spec, curve0, noise.next_step(), h, opts);
        } catch (const BudgetExhausted&) {
            result.budget_exhausted = true;
            result.grid.stamp(curve0);
            break;
        }
        result.grid.stamp(curve0);
        if ((s + 1) % per_sample == 0 || s + 1 == steps) sample_now((s + 1) * h);
        result.grid.set_t_latest((s + 1) * h);
    }
    result.final_curve = std::move(curve0);
    return result;
}

namespace {

// Cheap certificate that diameter >= 1: the bounding box extent bounds the
// diameter from both sides, so the exact computation runs only near the
// threshold.
bool curve_is_long(const Polyline& curve) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const Vec2& p : curve.pts) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double w = xmax - xmin, ht = ymax - ymin;
    if (std::max(w, ht) >= 1.0) return true;
    if (w * w + ht * ht < 1.0) return false;
    return diameter(curve) >= 1.0;
}

template <typename DistFn>
PassageRecord passage_loop(const StreamSpec& spec, Polyline curve, NoiseStream& noise,
                           PassageRecord record, const DistFn& dist_fn, double t_max,
                           const IntegratorOptions& opts) {
    const double h = noise.h();
    const auto steps = static_cast<std::size_t>(std::ceil(t_max / h - 1e-12));
    for (std::size_t s = 0; s < steps; ++s) {
        try {
            advect_step(spec, curve, noise.next_step(), h, opts);
        } catch (const BudgetExhausted&) {
            record.outcome = PassageOutcome::BudgetExhausted;
            record.t_elapsed = (s + 1) * h;
            return record;
        }
        record.t_elapsed = (s + 1) * h;
        const double d = dist_fn(curve);
        if (d <= record.radius && curve_is_long(curve)) {
            record.outcome = PassageOutcome::Reached;
            record.tau = (s + 1) * h;
            record.curve_diam_at_tau = diameter(curve);
            record.dist_at_tau = d;
            return record;
        }
    }
    record.outcome = PassageOutcome::NotReachedByTmax;
    return record;
}

}  // namespace

PassageRecord first_passage(const StreamSpec& spec, Polyline curve0, NoiseStream& noise, Vec2 a,
                            double r, double t_max, const IntegratorOptions& opts) {
    if (!(r > 0.0)) throw std::invalid_argument("passage radius must be positive");
    PassageRecord rec;
    rec.target = a;
    rec.radius = r;
    return passage_loop(
        spec, std::move(curve0), noise, rec,
        [&a](const Polyline& c) { return dist_to_point(c, a); }, t_max, opts);
}

PassageRecord first_line_passage(const StreamSpec& spec, Polyline curve0, NoiseStream& noise,
                                 Vec2 unit_normal, double offset, double r, double t_max,
                                 const IntegratorOptions& opts) {
    if (!(r > 0.0)) throw std::invalid_argument("passage radius must be positive");
    PassageRecord rec;
    rec.target = offset * unit_normal;
    rec.radius = r;
    return passage_loop(
        spec, std::move(curve0), noise, rec,
        [&](const Polyline& c) { return dist_to_line(c, unit_normal, offset); }, t_max, opts);
}

}  // namespace sweeplab
