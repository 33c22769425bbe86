#include "psz/spatial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "psz/acoustics.hpp"
#include "psz/parallel.hpp"

namespace psz {

double IpiMap::capped(Eigen::Index ix, Eigen::Index iy) const {
  const double v = raw(ix, iy);
  return std::isnan(v) ? v : std::min(v, cap_db);
}

namespace {

Eigen::Index whole_steps(double extent, double resolution, const char* axis) {
  const double steps = extent / resolution;
  const double rounded = std::round(steps);
  if (!(extent >= 0.0) || std::abs(steps - rounded) > 1e-6) {
    throw std::invalid_argument(std::string("grid: ") + axis +
                                " extent is not a whole multiple of the resolution");
  }
  return static_cast<Eigen::Index>(rounded);
}

}  // namespace

IpiMap make_grid(const GridRegion& region, double resolution, double frequency, double cap_db) {
  if (!(resolution > 0.0)) throw std::invalid_argument("grid: resolution must be > 0");
  if (!(region.x_max > region.x_min) || !(region.y_max > region.y_min)) {
    throw std::invalid_argument("grid: region is empty");
  }
  IpiMap map;
  map.frequency = frequency;
  map.x0 = region.x_min;
  map.y0 = region.y_min;
  map.spacing = resolution;
  map.nx = whole_steps(region.x_max - region.x_min, resolution, "x") + 1;
  map.ny = whole_steps(region.y_max - region.y_min, resolution, "y") + 1;
  map.cap_db = cap_db;
  const auto n = static_cast<std::size_t>(map.nx * map.ny);
  map.raw_db.assign(n, std::numeric_limits<double>::quiet_NaN());
  map.valid.assign(n, 0);
  return map;
}

IpiMap ipi_map(const Scene& scene, const FilterMatrix& C, const GridRegion& region, double resolution,
               const IndexSet& target_channels, const IndexSet& interferer_channels, double cap_db,
               int workers) {
  if (C.rows() != scene.speaker_count()) {
    throw std::invalid_argument("ipi_map: filter rows do not match the scene's speaker count");
  }
  IpiMap map = make_grid(region, resolution, C.frequency, cap_db);
  parallel_for(static_cast<std::size_t>(map.ny), workers, [&](std::size_t row) {
    const auto iy = static_cast<Eigen::Index>(row);
    for (Eigen::Index ix = 0; ix < map.nx; ++ix) {
      const Vec2 xy = map.position(ix, iy);
      const std::array<Vec3, 1> point{Vec3(xy.x(), xy.y(), region.z)};
      TransferMatrix h;
      try {
        h = transfer_matrix(scene, point, C.frequency);
      } catch (const GeometryError&) {
        continue;
      }
      const auto m = system_matrix(h, C);
      const auto v = single_point_ipi(m, 0, target_channels, interferer_channels);
      map.raw_db[map.index(ix, iy)] = v.db;
      map.valid[map.index(ix, iy)] = 1;
    }
  });
  return map;
}

namespace {

// Finite stand-in for contouring: invalid nodes sit far below any level and
// infinite isolation far above it.
constexpr double kFieldBound = 1e3;

struct Field {
  const IpiMap& map;
  double level;

  double value(Eigen::Index ix, Eigen::Index iy) const {
    if (!map.is_valid(ix, iy)) return -kFieldBound;
    return std::clamp(map.raw(ix, iy), -kFieldBound, kFieldBound);
  }
  bool above(Eigen::Index ix, Eigen::Index iy) const { return value(ix, iy) >= level; }

  // Edge ids: horizontal edge from node (i, j) is 2*(j*nx + i), vertical is +1.
  std::int64_t horizontal(Eigen::Index i, Eigen::Index j) const { return 2 * (j * map.nx + i); }
  std::int64_t vertical(Eigen::Index i, Eigen::Index j) const { return 2 * (j * map.nx + i) + 1; }

  Vec2 crossing(std::int64_t edge) const {
    const Eigen::Index node = edge / 2;
    const Eigen::Index i = node % map.nx;
    const Eigen::Index j = node / map.nx;
    const Eigen::Index i2 = (edge % 2 == 0) ? i + 1 : i;
    const Eigen::Index j2 = (edge % 2 == 0) ? j : j + 1;
    const double va = value(i, j);
    const double vb = value(i2, j2);
    const double t = std::clamp((level - va) / (vb - va), 0.0, 1.0);
    return map.position(i, j) + t * (map.position(i2, j2) - map.position(i, j));
  }
};

// Corners counter-clockwise from the lower-left node; edge e joins corner e and e+1.
struct Cell {
  std::array<Vec2, 4> corner;
  std::array<bool, 4> above;
  std::array<std::int64_t, 4> edge;
  std::array<bool, 4> crosses;
  bool saddle = false;
  bool centre_above = false;
};

Cell make_cell(const Field& f, Eigen::Index ix, Eigen::Index iy) {
  Cell c;
  const std::array<std::pair<Eigen::Index, Eigen::Index>, 4> nodes{
      {{ix, iy}, {ix + 1, iy}, {ix + 1, iy + 1}, {ix, iy + 1}}};
  double sum = 0.0;
  for (int n = 0; n < 4; ++n) {
    c.corner[n] = f.map.position(nodes[n].first, nodes[n].second);
    c.above[n] = f.above(nodes[n].first, nodes[n].second);
    sum += f.value(nodes[n].first, nodes[n].second);
  }
  c.edge = {f.horizontal(ix, iy), f.vertical(ix + 1, iy), f.horizontal(ix, iy + 1), f.vertical(ix, iy)};
  for (int e = 0; e < 4; ++e) c.crosses[e] = c.above[e] != c.above[(e + 1) % 4];
  c.saddle = c.crosses[0] && c.crosses[1] && c.crosses[2] && c.crosses[3];
  c.centre_above = 0.25 * sum >= f.level;
  return c;
}

double shoelace(const std::vector<Vec2>& poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * std::abs(twice);
}

}  // namespace

ContourSet extract_contours(const IpiMap& map, double level_db) {
  ContourSet out{level_db, {}};
  if (map.nx < 2 || map.ny < 2 || level_db > map.cap_db) return out;
  const Field f{map, level_db};

  std::vector<std::array<std::int64_t, 2>> segments;
  for (Eigen::Index iy = 0; iy + 1 < map.ny; ++iy) {
    for (Eigen::Index ix = 0; ix + 1 < map.nx; ++ix) {
      const Cell c = make_cell(f, ix, iy);
      if (c.saddle) {
        // Cut off each corner whose side differs from the centre's.
        for (int n = 0; n < 4; ++n) {
          if (c.above[n] != c.centre_above) segments.push_back({c.edge[(n + 3) % 4], c.edge[n]});
        }
        continue;
      }
      std::array<std::int64_t, 2> seg{};
      int found = 0;
      for (int e = 0; e < 4; ++e) {
        if (c.crosses[e]) seg[found++] = c.edge[e];
      }
      if (found == 2) segments.push_back(seg);
    }
  }

  std::unordered_map<std::int64_t, std::vector<std::size_t>> by_edge;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    by_edge[segments[s][0]].push_back(s);
    by_edge[segments[s][1]].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);

  auto trace = [&](std::size_t start_seg, std::int64_t start_edge) {
    Polyline line;
    std::int64_t edge = start_edge;
    std::size_t seg = start_seg;
    line.points.push_back(f.crossing(edge));
    while (true) {
      used[seg] = true;
      edge = segments[seg][0] == edge ? segments[seg][1] : segments[seg][0];
      if (edge == start_edge) {
        line.closed = true;
        break;
      }
      line.points.push_back(f.crossing(edge));
      std::size_t next = segments.size();
      for (auto cand : by_edge[edge]) {
        if (!used[cand]) next = cand;
      }
      if (next == segments.size()) break;
      seg = next;
    }
    if (line.closed) line.points.push_back(line.points.front());
    out.lines.push_back(std::move(line));
  };

  // Open lines start at border edges (touched by a single segment).
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    for (auto e : segments[s]) {
      if (by_edge[e].size() == 1) {
        trace(s, e);
        break;
      }
    }
  }
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (!used[s]) trace(s, segments[s][0]);
  }
  return out;
}

double enclosed_area(const ContourSet& contours, const IpiMap& map) {
  if (map.nx < 2 || map.ny < 2 || contours.level_db > map.cap_db) return 0.0;
  const Field f{map, contours.level_db};
  double area = 0.0;
  std::vector<Vec2> poly;
  for (Eigen::Index iy = 0; iy + 1 < map.ny; ++iy) {
    for (Eigen::Index ix = 0; ix + 1 < map.nx; ++ix) {
      const Cell c = make_cell(f, ix, iy);
      const int n_above = c.above[0] + c.above[1] + c.above[2] + c.above[3];
      if (n_above == 0) continue;
      if (n_above == 4) {
        area += map.spacing * map.spacing;
        continue;
      }
      if (c.saddle && !c.centre_above) {
        for (int n = 0; n < 4; ++n) {
          if (!c.above[n]) continue;
          poly = {f.crossing(c.edge[(n + 3) % 4]), c.corner[n], f.crossing(c.edge[n])};
          area += shoelace(poly);
        }
        continue;
      }
      poly.clear();
      for (int n = 0; n < 4; ++n) {
        if (c.above[n]) poly.push_back(c.corner[n]);
        if (c.crosses[n]) poly.push_back(f.crossing(c.edge[n]));
      }
      area += shoelace(poly);
    }
  }
  return area;
}

}  // namespace psz
