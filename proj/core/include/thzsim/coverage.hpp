#ifndef THZSIM_COVERAGE_HPP
#define THZSIM_COVERAGE_HPP

#include <ostream>
#include <vector>

#include "thzsim/scenario.hpp"

namespace thzsim {

struct CoverageCell {
    double x = 0, y = 0;
    double snr_db = 0;
};

/// Uplink SNR raster over the plant floor at the given evaluation height.
/// Cell centers on a `resolution`-spaced grid, row-major (y outer, x inner),
/// ceil(dims/resolution) cells per axis.
inline std::vector<CoverageCell> coverage_grid(const Plant& plant,
                                               const ChannelModel& ch,
                                               double resolution,
                                               double height = 1.5) {
    const int nx = static_cast<int>(std::ceil(plant.dims.x / resolution));
    const int ny = static_cast<int>(std::ceil(plant.dims.y / resolution));
    std::vector<CoverageCell> cells;
    cells.reserve(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            CoverageCell c;
            c.x = std::min((i + 0.5) * resolution, plant.dims.x);
            c.y = std::min((j + 0.5) * resolution, plant.dims.y);
            c.snr_db = uplink_budget({c.x, c.y, height}, plant, ch).snr_db;
            cells.push_back(c);
        }
    }
    return cells;
}

inline void write_coverage_csv(std::ostream& os, const std::vector<CoverageCell>& cells) {
    os << "x_m,y_m,snr_db\n";
    for (const CoverageCell& c : cells) {
        os << c.x << ',' << c.y << ',' << c.snr_db << '\n';
    }
}

}  // namespace thzsim

#endif
