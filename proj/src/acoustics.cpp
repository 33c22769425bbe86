#include "psz/acoustics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace psz {

double piston_directivity(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    const double x2 = ax * ax;
    return 1.0 - x2 / 8.0 + x2 * x2 / 192.0;
  }
  return 2.0 * std::cyl_bessel_j(1.0, ax) / ax;
}

Complex piston_response(const Vec3& source, const Vec3& axis, const Vec3& field, double frequency,
                        double piston_radius, double sound_speed) {
  const Vec3 d = field - source;
  const double r = d.norm();
  if (!(r > 0.0)) {
    throw GeometryError("piston_response: source and field point coincide");
  }
  const double k = 2.0 * std::numbers::pi * frequency / sound_speed;
  const double cos_theta = std::clamp(d.dot(axis) / (r * axis.norm()), -1.0, 1.0);
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  const double directivity = piston_directivity(k * piston_radius * sin_theta);
  return directivity * std::polar(1.0 / r, -k * r);
}

TransferMatrix transfer_matrix(const Scene& scene, std::span<const Vec3> points, double frequency) {
  const auto K = static_cast<Eigen::Index>(points.size());
  const auto L = scene.speaker_count();
  TransferMatrix H{frequency, CMatrix(K, L)};
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index l = 0; l < L; ++l) {
      try {
        H.entries(k, l) = piston_response(scene.speakers[static_cast<std::size_t>(l)], scene.speaker_axis,
                                          points[static_cast<std::size_t>(k)], frequency,
                                          scene.piston_radius, scene.sound_speed);
      } catch (const GeometryError&) {
        std::ostringstream msg;
        msg << "transfer_matrix: point " << k + 1 << " coincides with speaker " << l + 1;
        throw GeometryError(msg.str());
      }
    }
  }
  return H;
}

TransferMatrix transfer_matrix(const Scene& scene, double frequency) {
  return transfer_matrix(scene, std::span<const Vec3>(scene.control_points), frequency);
}

}  // namespace psz
