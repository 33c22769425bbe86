#pragma once

#include <cstdint>
#include <string_view>

#include "psz/types.hpp"

namespace psz {

/// Independent Gaussian amplitude and phase errors on every transfer function.
/// Amplitude error is absolute (same units as |H|), phase error in radians.
struct UncertaintyModel {
  double sigma_amp_sq = 0.0;
  double sigma_phase_sq = 0.0;
  int trials = 1;
  std::uint64_t seed = 0;
};

/// One draw: H_kl -> A e^{i phi}, A ~ N(|H_kl|, sigma_A^2) clamped at 0,
/// phi ~ N(arg H_kl, sigma_phi^2). The draw is a pure function of
/// (seed, stream, frequency, k, l, trial).
TransferMatrix perturb(const TransferMatrix& H, const UncertaintyModel& model, std::string_view stream,
                       int trial = 0);

/// Entrywise complex mean of `model.trials` independent draws.
TransferMatrix averaged_perturbed(const TransferMatrix& H, const UncertaintyModel& model,
                                  std::string_view stream);

/// Standard-normal pair for a given key. Exposed for statistical tests.
struct NormalPair {
  double first;
  double second;
};
NormalPair keyed_normal_pair(std::uint64_t seed, std::string_view stream, double frequency,
                             Eigen::Index row, Eigen::Index col, int trial);

}  // namespace psz
