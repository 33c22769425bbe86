#include "doctest.h"
#include "psz/scene.hpp"

using namespace psz;

namespace {

bool has_kind(const std::vector<Violation>& v, ViolationKind kind) {
  for (const auto& x : v)
    if (x.kind == kind) return true;
  return false;
}

}  // namespace

TEST_CASE("default scene geometry") {
  const Scene s = default_paper_scene();
  REQUIRE(s.speakers.size() == 8);
  for (std::size_t l = 1; l < s.speakers.size(); ++l) {
    CHECK((s.speakers[l] - s.speakers[l - 1]).norm() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(s.speakers[l].y() == 0.0);
  }
  CHECK(s.speakers.front().x() == doctest::Approx(-0.875));

  CHECK((s.control_points[0] - s.control_points[1]).norm() == doctest::Approx(0.168).epsilon(1e-14));
  CHECK((s.control_points[2] - s.control_points[3]).norm() == doctest::Approx(0.168).epsilon(1e-14));
  CHECK((s.zone_center(Zone::A) - s.zone_center(Zone::B)).norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.zone_center(Zone::A).y() == doctest::Approx(1.0));
  CHECK(s.zone_center(Zone::A).x() < 0.0);

  CHECK(s.virtual_sources_a == IndexSet{0, 3});
  CHECK(s.virtual_sources_b == IndexSet{4, 7});
  CHECK(s.sound_speed == 343.0);
  CHECK(s.piston_radius == 0.05);
  CHECK(validate(s).empty());
}

TEST_CASE("default scene is mirror symmetric about x = 0") {
  const Scene s = default_paper_scene();
  auto mirror = [](const Vec3& p) { return Vec3(-p.x(), p.y(), p.z()); };
  for (std::size_t l = 0; l < 8; ++l) CHECK((mirror(s.speakers[l]) - s.speakers[7 - l]).norm() == 0.0);
  for (std::size_t k = 0; k < 4; ++k) CHECK((mirror(s.control_points[k]) - s.control_points[3 - k]).norm() == 0.0);
}

TEST_CASE("move_listener") {
  const Scene s = default_paper_scene();

  SUBCASE("zero displacement is identity") {
    const Scene m = move_listener(s, {Zone::A, 0.0, 0.0});
    for (std::size_t k = 0; k < 4; ++k) CHECK(m.control_points[k] == s.control_points[k]);
  }
  SUBCASE("moved listener A keeps its ear spacing") {
    const Scene m = move_listener(s, {Zone::A, -0.3, -0.2});
    CHECK((m.control_points[0] - m.control_points[1]).norm() == doctest::Approx(0.168).epsilon(1e-14));
    CHECK(m.control_points[0].x() == doctest::Approx(s.control_points[0].x() - 0.3));
    CHECK(m.control_points[1].y() == doctest::Approx(0.8));
    CHECK(m.control_points[2] == s.control_points[2]);
    CHECK(m.control_points[3] == s.control_points[3]);
    CHECK(m.speakers == s.speakers);
  }
  SUBCASE("moving listener B shifts its midpoint") {
    const Scene m = move_listener(s, {Zone::B, 0.1, 0.0});
    CHECK(m.zone_center(Zone::B).x() == doctest::Approx(s.zone_center(Zone::B).x() + 0.1));
    CHECK(m.zone_center(Zone::A) == s.zone_center(Zone::A));
  }
  SUBCASE("unknown listener") {
    CHECK_THROWS_AS(move_listener(s, {static_cast<Zone>(7), 0.0, 0.0}), std::invalid_argument);
  }
}

TEST_CASE("validate reports broken invariants") {
  Scene s = default_paper_scene();

  SUBCASE("overlapping zones") {
    s.zone_b_points = s.zone_a_points;
    const auto v = validate(s);
    CHECK(has_kind(v, ViolationKind::ZoneOverlap));
    CHECK(has_kind(v, ViolationKind::ZoneCoverage));
  }
  SUBCASE("speaker at a control point") {
    s.control_points[2] = s.speakers[5];
    CHECK(has_kind(validate(s), ViolationKind::CoincidentPositions));
  }
  SUBCASE("virtual source out of range") {
    s.virtual_sources_b = {4, 8};
    CHECK(has_kind(validate(s), ViolationKind::VirtualSourceOutOfRange));
  }
  SUBCASE("empty zone") {
    s.zone_a_points.clear();
    CHECK(has_kind(validate(s), ViolationKind::EmptyZone));
  }
  SUBCASE("bad constants") {
    s.sound_speed = 0.0;
    CHECK(has_kind(validate(s), ViolationKind::NonPositiveConstant));
  }
}
