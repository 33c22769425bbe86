#pragma once

#include <cstdint>
#include <vector>

#include "psz/filter_design.hpp"
#include "psz/metrics.hpp"

namespace psz {

/// Axis-aligned rectangle in the z = `z` plane.
struct GridRegion {
  double x_min = -1.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 2.0;
  double z = 0.0;
};

/// Regular grid of single-point IPI values in dB.
///
/// Node (ix, iy) sits at (x0 + ix*spacing, y0 + iy*spacing); storage is
/// row-major in y. `raw_db` is untruncated so contours below the cap are
/// exact; `capped()` applies the display cap. Invalid nodes (coincident
/// with a speaker) hold NaN.
struct IpiMap {
  double frequency = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;
  double spacing = 0.0;
  Eigen::Index nx = 0;
  Eigen::Index ny = 0;
  double cap_db = 40.0;
  std::vector<double> raw_db;
  std::vector<std::uint8_t> valid;

  std::size_t index(Eigen::Index ix, Eigen::Index iy) const {
    return static_cast<std::size_t>(iy * nx + ix);
  }
  double raw(Eigen::Index ix, Eigen::Index iy) const { return raw_db[index(ix, iy)]; }
  bool is_valid(Eigen::Index ix, Eigen::Index iy) const { return valid[index(ix, iy)] != 0; }
  double capped(Eigen::Index ix, Eigen::Index iy) const;
  Vec2 position(Eigen::Index ix, Eigen::Index iy) const {
    return {x0 + static_cast<double>(ix) * spacing, y0 + static_cast<double>(iy) * spacing};
  }
  double width() const { return static_cast<double>(nx - 1) * spacing; }
  double height() const { return static_cast<double>(ny - 1) * spacing; }
};

/// Builds an empty map whose nodes cover `region` exactly at `resolution`.
/// Throws std::invalid_argument if the region extent is not a whole number
/// of steps.
IpiMap make_grid(const GridRegion& region, double resolution, double frequency, double cap_db);

/// Single-point IPI of filters `C` at every node of the grid, using nominal
/// free-field transfer functions from the scene's loudspeakers.
IpiMap ipi_map(const Scene& scene, const FilterMatrix& C, const GridRegion& region, double resolution,
               const IndexSet& target_channels, const IndexSet& interferer_channels, double cap_db,
               int workers = 1);

struct Polyline {
  std::vector<Vec2> points;
  bool closed = false;
};

struct ContourSet {
  double level_db = 0.0;
  std::vector<Polyline> lines;
};

/// Marching-squares isolines at `level_db`. Crossings are linearly
/// interpolated along cell edges; saddle cells are resolved by the mean of
/// the four corners. Levels above the map's cap give an empty set.
ContourSet extract_contours(const IpiMap& map, double level_db);

/// Area (m^2) of the region where the map is >= the contour level, summed
/// cell by cell with boundary cells clipped along the interpolated contour.
double enclosed_area(const ContourSet& contours, const IpiMap& map);

}  // namespace psz
