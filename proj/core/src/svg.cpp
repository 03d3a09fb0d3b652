#include "sweeplab/svg.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sweeplab {

void SvgWriter::grow(Vec2 p) {
    if (!has_bounds_) {
        xmin_ = xmax_ = p.x;
        ymin_ = ymax_ = p.y;
        has_bounds_ = true;
        return;
    }
    xmin_ = std::min(xmin_, p.x);
    xmax_ = std::max(xmax_, p.x);
    ymin_ = std::min(ymin_, p.y);
    ymax_ = std::max(ymax_, p.y);
}

void SvgWriter::add_grid(const OccupancyGrid& grid, const std::string& fill) {
    std::ostringstream os;
    os.precision(10);
    const double eta = grid.eta();
    // Merge horizontal runs of cells into single rects to keep files small.
    for (long j = 0; j < grid.nrows(); ++j) {
        const long cj = grid.cj0() + j;
        long run_start = 0;
        bool in_run = false;
        for (long c = 0; c <= grid.ncols(); ++c) {
            const long ci = grid.ci0() + c;
            const bool on = c < grid.ncols() && grid.test_cell(ci, cj);
            if (on && !in_run) {
                run_start = ci;
                in_run = true;
            } else if (!on && in_run) {
                const double x = run_start * eta;
                const double y = cj * eta;
                const double w = (ci - run_start) * eta;
                os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w << "\" height=\""
                   << eta << "\" fill=\"" << fill << "\"/>\n";
                grow({x, y});
                grow({x + w, y + eta});
                in_run = false;
            }
        }
    }
    body_ += os.str();
}

void SvgWriter::add_polygon(const std::vector<Vec2>& pts, const std::string& stroke, double width,
                            bool close) {
    if (pts.empty()) return;
    std::ostringstream os;
    os.precision(10);
    os << (close ? "<polygon" : "<polyline") << " points=\"";
    for (const Vec2& p : pts) {
        os << p.x << "," << p.y << " ";
        grow(p);
    }
    os << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << width << "\"/>\n";
    body_ += os.str();
}

void SvgWriter::add_circle(Vec2 center, double r, const std::string& stroke, double width) {
    std::ostringstream os;
    os.precision(10);
    os << "<circle cx=\"" << center.x << "\" cy=\"" << center.y << "\" r=\"" << r
       << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << width << "\"/>\n";
    grow({center.x - r, center.y - r});
    grow({center.x + r, center.y + r});
    body_ += os.str();
}

std::string SvgWriter::str() const {
    const double pad = has_bounds_ ? 0.05 * std::max(xmax_ - xmin_, ymax_ - ymin_) + 1e-6 : 1.0;
    const double x0 = xmin_ - pad, y0 = ymin_ - pad;
    const double w = (xmax_ - xmin_) + 2 * pad, h = (ymax_ - ymin_) + 2 * pad;
    std::ostringstream os;
    os.precision(10);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << x0 << " " << -(y0 + h) << " "
       << w << " " << h << "\" width=\"800\" height=\"800\">\n";
    // Flip to the usual y-up orientation.
    os << "<g transform=\"scale(1,-1)\">\n" << body_ << "</g>\n</svg>\n";
    return os.str();
}

void SvgWriter::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write svg: " + path);
    out << str();
}

}  // namespace sweeplab
