#pragma once

#include <string>
#include <vector>

#include "psz/types.hpp"

namespace psz {

/// Physical layout of a two-zone personal sound zone system.
///
/// The array lies along the x-axis centered on the origin and radiates
/// towards +y; listeners sit in the z = 0 plane. Each zone owns a set of
/// control points (ordered left ear, right ear for listener zones) and a
/// pair of virtual sources: loudspeakers whose transfer functions define
/// that zone's target field.
struct Scene {
  std::vector<Vec3> speakers;
  Vec3 speaker_axis{0.0, 1.0, 0.0};
  std::vector<Vec3> control_points;
  IndexSet zone_a_points;
  IndexSet zone_b_points;
  /// Loudspeaker indices, left then right, used as virtual sources per zone.
  IndexSet virtual_sources_a;
  IndexSet virtual_sources_b;
  double sound_speed = 343.0;
  double piston_radius = 0.05;

  const IndexSet& zone_points(Zone z) const { return z == Zone::A ? zone_a_points : zone_b_points; }
  const IndexSet& virtual_sources(Zone z) const {
    return z == Zone::A ? virtual_sources_a : virtual_sources_b;
  }
  Eigen::Index point_count() const { return static_cast<Eigen::Index>(control_points.size()); }
  Eigen::Index speaker_count() const { return static_cast<Eigen::Index>(speakers.size()); }

  /// Midpoint of a zone's control points.
  Vec3 zone_center(Zone z) const;
};

/// Parameters of the symmetric linear-array layout. Defaults reproduce the
/// eight-speaker, two-listener setup used throughout the toolkit.
struct LinearArrayLayout {
  int speaker_count = 8;
  double speaker_spacing = 0.25;
  double zone_separation = 1.0;
  double array_distance = 1.0;
  double ear_spacing = 0.168;
  double sound_speed = 343.0;
  double piston_radius = 0.05;
  /// 1-based loudspeaker labels.
  std::vector<int> virtual_sources_a{1, 4};
  std::vector<int> virtual_sources_b{5, 8};
};

Scene linear_array_scene(const LinearArrayLayout& layout);

Scene default_paper_scene();

struct ListenerDisplacement {
  Zone listener = Zone::A;
  double dx = 0.0;
  double dy = 0.0;
};

/// Rigidly translates every control point of the listener's zone by (dx, dy, 0).
Scene move_listener(const Scene& scene, const ListenerDisplacement& d);

enum class ViolationKind {
  EmptyZone,
  ZoneOverlap,
  ZoneCoverage,
  PointIndexOutOfRange,
  VirtualSourceOutOfRange,
  MissingVirtualSources,
  CoincidentPositions,
  NonPositiveConstant,
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

/// Lists every broken scene invariant; empty means valid.
std::vector<Violation> validate(const Scene& scene);

}  // namespace psz
