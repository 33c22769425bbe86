#pragma once

#include <string>

#include "psz/scene.hpp"

namespace psz {

enum class RenderingMode { Mono, Stereo, Xtc };

const char* mode_name(RenderingMode mode);
/// Parses "mono", "stereo" or "xtc"; throws std::invalid_argument otherwise.
RenderingMode parse_mode(const std::string& name);

/// Input-channel partition for a rendering mode. Mono has one channel per
/// program; stereo and xtc have two (left, right).
struct ChannelLayout {
  IndexSet program_a;
  IndexSet program_b;
  Eigen::Index channel_count() const {
    return static_cast<Eigen::Index>(program_a.size() + program_b.size());
  }
  const IndexSet& program(Zone z) const { return z == Zone::A ? program_a : program_b; }
};

ChannelLayout channel_layout(RenderingMode mode);

/// Builds the K x I target field for `mode` from the design transfer matrix.
///
/// Bright-zone rows of a program's columns hold virtual-source transfer
/// functions; dark-zone rows are zero.
///   Mono:   one column per zone, the mean of the zone's virtual sources.
///   Stereo: one column per virtual source.
///   Xtc:    as stereo, but column j keeps only the row of ear j, so each
///           binaural channel is cancelled at the contralateral ear.
/// Throws std::invalid_argument when the scene cannot support the mode
/// (stereo/xtc need two virtual sources per zone, xtc two ears per zone).
TargetMatrix build_target_matrix(const Scene& scene, const TransferMatrix& H, RenderingMode mode);

/// Regularized pressure matching: argmin_C ||H C - M_T||_F^2 + beta ||C||_F^2,
/// i.e. C = (H^H H + beta I)^{-1} H^H M_T, via a Cholesky factorization shared
/// across the target columns. Throws IllConditionedError when the normal
/// matrix is not numerically positive definite (possible only for beta = 0).
FilterMatrix pressure_matching(const TransferMatrix& H, const TargetMatrix& target, double beta);

double cost(const CMatrix& H, const CMatrix& C, const CMatrix& target, double beta);
inline double cost(const TransferMatrix& H, const FilterMatrix& C, const TargetMatrix& target, double beta) {
  return cost(H.entries, C.entries, target.entries, beta);
}

/// M = H_eval C. H_eval may come from a different position or perturbation
/// set than the one the filters were designed with.
SystemMatrix system_matrix(const TransferMatrix& H_eval, const FilterMatrix& C);

/// beta = K sigma^2, the regularization minimizing the expected cost under
/// i.i.d. transfer-function errors of variance sigma^2.
double default_beta(Eigen::Index point_count, double sigma_sq);

}  // namespace psz
