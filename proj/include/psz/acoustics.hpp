#pragma once

#include <span>

#include "psz/scene.hpp"

namespace psz {

/// Far-field directivity of a circular piston in an infinite baffle,
/// 2 J1(x) / x with x = k a sin(theta). Returns 1 in the x -> 0 limit.
double piston_directivity(double x);

/// Free-field pressure at `field` radiated by a baffled piston at `source`
/// facing `axis`: D(theta) e^{-ikr} / r under the e^{+i omega t} convention.
/// Throws GeometryError when the two positions coincide.
Complex piston_response(const Vec3& source, const Vec3& axis, const Vec3& field, double frequency,
                        double piston_radius, double sound_speed);

/// K x L transfer matrix from every loudspeaker of `scene` to each of `points`.
/// Rows follow the order of `points`.
TransferMatrix transfer_matrix(const Scene& scene, std::span<const Vec3> points, double frequency);

/// Transfer matrix at the scene's own control points.
TransferMatrix transfer_matrix(const Scene& scene, double frequency);

}  // namespace psz
