#include "psz/scene.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace psz {

Vec3 Scene::zone_center(Zone z) const {
  const auto& idx = zone_points(z);
  Vec3 sum = Vec3::Zero();
  for (auto k : idx) sum += control_points.at(static_cast<std::size_t>(k));
  return idx.empty() ? sum : Vec3(sum / static_cast<double>(idx.size()));
}

Scene linear_array_scene(const LinearArrayLayout& layout) {
  Scene s;
  s.sound_speed = layout.sound_speed;
  s.piston_radius = layout.piston_radius;
  const double mid = 0.5 * (layout.speaker_count - 1);
  for (int l = 0; l < layout.speaker_count; ++l) {
    s.speakers.emplace_back((l - mid) * layout.speaker_spacing, 0.0, 0.0);
  }
  const double half_ear = 0.5 * layout.ear_spacing;
  const double half_sep = 0.5 * layout.zone_separation;
  // Listener A on the left, B on the right; each ear pair ordered left, right.
  s.control_points = {
      Vec3(-half_sep - half_ear, layout.array_distance, 0.0),
      Vec3(-half_sep + half_ear, layout.array_distance, 0.0),
      Vec3(half_sep - half_ear, layout.array_distance, 0.0),
      Vec3(half_sep + half_ear, layout.array_distance, 0.0),
  };
  s.zone_a_points = {0, 1};
  s.zone_b_points = {2, 3};
  for (int label : layout.virtual_sources_a) s.virtual_sources_a.push_back(label - 1);
  for (int label : layout.virtual_sources_b) s.virtual_sources_b.push_back(label - 1);
  return s;
}

Scene default_paper_scene() { return linear_array_scene(LinearArrayLayout{}); }

Scene move_listener(const Scene& scene, const ListenerDisplacement& d) {
  if (d.listener != Zone::A && d.listener != Zone::B) {
    throw std::invalid_argument("move_listener: unknown listener");
  }
  Scene moved = scene;
  const Vec3 offset(d.dx, d.dy, 0.0);
  for (auto k : scene.zone_points(d.listener)) {
    moved.control_points.at(static_cast<std::size_t>(k)) += offset;
  }
  return moved;
}

namespace {

void check_index_set(const IndexSet& set, Eigen::Index bound, const char* what,
                     ViolationKind kind, std::vector<Violation>& out) {
  for (auto i : set) {
    if (i < 0 || i >= bound) {
      std::ostringstream msg;
      msg << what << " index " << i << " outside [0, " << bound << ")";
      out.push_back({kind, msg.str()});
    }
  }
}

}  // namespace

std::vector<Violation> validate(const Scene& scene) {
  std::vector<Violation> out;
  const auto K = scene.point_count();
  const auto L = scene.speaker_count();

  if (scene.zone_a_points.empty()) out.push_back({ViolationKind::EmptyZone, "zone A has no control points"});
  if (scene.zone_b_points.empty()) out.push_back({ViolationKind::EmptyZone, "zone B has no control points"});
  check_index_set(scene.zone_a_points, K, "zone A point", ViolationKind::PointIndexOutOfRange, out);
  check_index_set(scene.zone_b_points, K, "zone B point", ViolationKind::PointIndexOutOfRange, out);

  std::set<Eigen::Index> a(scene.zone_a_points.begin(), scene.zone_a_points.end());
  std::set<Eigen::Index> b(scene.zone_b_points.begin(), scene.zone_b_points.end());
  for (auto k : a) {
    if (b.count(k)) {
      out.push_back({ViolationKind::ZoneOverlap,
                     "control point " + std::to_string(k + 1) + " belongs to both zones"});
    }
  }
  for (Eigen::Index k = 0; k < K; ++k) {
    if (!a.count(k) && !b.count(k)) {
      out.push_back({ViolationKind::ZoneCoverage,
                     "control point " + std::to_string(k + 1) + " belongs to no zone"});
    }
  }

  if (scene.virtual_sources_a.empty() || scene.virtual_sources_b.empty()) {
    out.push_back({ViolationKind::MissingVirtualSources, "each zone needs at least one virtual source"});
  }
  check_index_set(scene.virtual_sources_a, L, "zone A virtual source",
                  ViolationKind::VirtualSourceOutOfRange, out);
  check_index_set(scene.virtual_sources_b, L, "zone B virtual source",
                  ViolationKind::VirtualSourceOutOfRange, out);

  for (Eigen::Index l = 0; l < L; ++l) {
    for (Eigen::Index k = 0; k < K; ++k) {
      const double r = (scene.speakers[static_cast<std::size_t>(l)] -
                        scene.control_points[static_cast<std::size_t>(k)]).norm();
      if (!(r > 0.0)) {
        out.push_back({ViolationKind::CoincidentPositions,
                       "speaker " + std::to_string(l + 1) + " coincides with control point " +
                           std::to_string(k + 1)});
      }
    }
  }

  if (!(scene.sound_speed > 0.0)) out.push_back({ViolationKind::NonPositiveConstant, "sound_speed must be > 0"});
  if (!(scene.piston_radius >= 0.0)) {
    out.push_back({ViolationKind::NonPositiveConstant, "piston_radius must be >= 0"});
  }
  return out;
}

}  // namespace psz
