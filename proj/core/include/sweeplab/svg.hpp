#pragma once

#include <string>
#include <vector>

#include "sweeplab/occupancy.hpp"
#include "sweeplab/vec2.hpp"

namespace sweeplab {

// Minimal SVG document in world coordinates (y up).
class SvgWriter {
public:
    void add_grid(const OccupancyGrid& grid, const std::string& fill);
    void add_polygon(const std::vector<Vec2>& pts, const std::string& stroke, double width,
                     bool close = true);
    void add_circle(Vec2 center, double r, const std::string& stroke, double width);

    std::string str() const;
    void write(const std::string& path) const;

private:
    void grow(Vec2 p);
    std::string body_;
    bool has_bounds_ = false;
    double xmin_ = 0, xmax_ = 0, ymin_ = 0, ymax_ = 0;
};

}  // namespace sweeplab
