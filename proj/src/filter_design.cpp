#include "psz/filter_design.hpp"

#include <cmath>
#include <sstream>

namespace psz {

const char* mode_name(RenderingMode mode) {
  switch (mode) {
    case RenderingMode::Mono: return "mono";
    case RenderingMode::Stereo: return "stereo";
    case RenderingMode::Xtc: return "xtc";
  }
  return "unknown";
}

RenderingMode parse_mode(const std::string& name) {
  if (name == "mono") return RenderingMode::Mono;
  if (name == "stereo") return RenderingMode::Stereo;
  if (name == "xtc") return RenderingMode::Xtc;
  throw std::invalid_argument("unknown rendering mode '" + name + "'");
}

ChannelLayout channel_layout(RenderingMode mode) {
  if (mode == RenderingMode::Mono) return {{0}, {1}};
  return {{0, 1}, {2, 3}};
}

TargetMatrix build_target_matrix(const Scene& scene, const TransferMatrix& H, RenderingMode mode) {
  if (H.rows() != scene.point_count() || H.cols() != scene.speaker_count()) {
    throw std::invalid_argument("build_target_matrix: H is not the scene's control-point transfer matrix");
  }
  const auto layout = channel_layout(mode);
  TargetMatrix target{H.frequency, CMatrix::Zero(H.rows(), layout.channel_count())};

  for (Zone zone : {Zone::A, Zone::B}) {
    const auto& points = scene.zone_points(zone);
    const auto& sources = scene.virtual_sources(zone);
    const auto& channels = layout.program(zone);
    if (sources.empty()) throw std::invalid_argument("build_target_matrix: zone without virtual sources");

    if (mode == RenderingMode::Mono) {
      for (auto k : points) {
        Complex sum = 0.0;
        for (auto l : sources) sum += H.entries(k, l);
        target.entries(k, channels[0]) = sum / static_cast<double>(sources.size());
      }
      continue;
    }

    if (sources.size() != channels.size()) {
      std::ostringstream msg;
      msg << "build_target_matrix: " << mode_name(mode) << " needs " << channels.size()
          << " virtual sources in zone " << zone_name(zone) << ", scene has " << sources.size();
      throw std::invalid_argument(msg.str());
    }
    if (mode == RenderingMode::Xtc && points.size() != channels.size()) {
      std::ostringstream msg;
      msg << "build_target_matrix: xtc needs exactly " << channels.size() << " ear points in zone "
          << zone_name(zone);
      throw std::invalid_argument(msg.str());
    }
    for (std::size_t j = 0; j < channels.size(); ++j) {
      if (mode == RenderingMode::Stereo) {
        for (auto k : points) target.entries(k, channels[j]) = H.entries(k, sources[j]);
      } else {
        target.entries(points[j], channels[j]) = H.entries(points[j], sources[j]);
      }
    }
  }
  return target;
}

FilterMatrix pressure_matching(const TransferMatrix& H, const TargetMatrix& target, double beta) {
  if (H.rows() != target.rows()) {
    throw std::invalid_argument("pressure_matching: H and target row counts differ");
  }
  if (!(beta >= 0.0)) throw std::invalid_argument("pressure_matching: beta must be >= 0");

  const auto L = H.cols();
  CMatrix normal = H.entries.adjoint() * H.entries;
  normal.diagonal().array() += beta;
  const CMatrix rhs = H.entries.adjoint() * target.entries;

  Eigen::LLT<CMatrix> llt(normal);
  // rcond is an estimate; anything near machine precision is treated as singular.
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-13)) {
    std::ostringstream msg;
    msg << "pressure_matching: normal matrix (" << L << "x" << L << ", beta=" << beta
        << ") is singular or ill-conditioned at " << H.frequency << " Hz";
    throw IllConditionedError(H.frequency, msg.str());
  }
  return FilterMatrix{H.frequency, llt.solve(rhs)};
}

double cost(const CMatrix& H, const CMatrix& C, const CMatrix& target, double beta) {
  return (H * C - target).squaredNorm() + beta * C.squaredNorm();
}

SystemMatrix system_matrix(const TransferMatrix& H_eval, const FilterMatrix& C) {
  if (H_eval.cols() != C.rows()) {
    std::ostringstream msg;
    msg << "system_matrix: H has " << H_eval.cols() << " speakers but C has " << C.rows() << " rows";
    throw std::invalid_argument(msg.str());
  }
  if (H_eval.frequency != C.frequency) {
    std::ostringstream msg;
    msg << "system_matrix: frequency mismatch (" << H_eval.frequency << " Hz vs " << C.frequency << " Hz)";
    throw std::invalid_argument(msg.str());
  }
  return SystemMatrix{H_eval.frequency, H_eval.entries * C.entries};
}

double default_beta(Eigen::Index point_count, double sigma_sq) {
  if (point_count < 1) throw std::invalid_argument("default_beta: point_count must be >= 1");
  if (!(sigma_sq >= 0.0)) throw std::invalid_argument("default_beta: sigma_sq must be >= 0");
  return static_cast<double>(point_count) * sigma_sq;
}

}  // namespace psz
