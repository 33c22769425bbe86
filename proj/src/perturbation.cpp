#include "psz/perturbation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace psz {
namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t combine(std::uint64_t h, std::uint64_t v) { return mix(h ^ mix(v)); }

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Uniform in (0, 1].
double to_unit(std::uint64_t bits) { return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53; }

}  // namespace

NormalPair keyed_normal_pair(std::uint64_t seed, std::string_view stream, double frequency,
                             Eigen::Index row, Eigen::Index col, int trial) {
  std::uint64_t h = mix(seed);
  h = combine(h, fnv1a(stream));
  h = combine(h, std::bit_cast<std::uint64_t>(frequency));
  h = combine(h, static_cast<std::uint64_t>(row));
  h = combine(h, static_cast<std::uint64_t>(col));
  h = combine(h, static_cast<std::uint64_t>(trial));
  const double u1 = to_unit(mix(h ^ 0x1ULL));
  const double u2 = to_unit(mix(h ^ 0x2ULL));
  // Box-Muller
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

TransferMatrix perturb(const TransferMatrix& H, const UncertaintyModel& model, std::string_view stream,
                       int trial) {
  if (model.sigma_amp_sq == 0.0 && model.sigma_phase_sq == 0.0) return H;
  const double sigma_amp = std::sqrt(model.sigma_amp_sq);
  const double sigma_phase = std::sqrt(model.sigma_phase_sq);
  TransferMatrix out{H.frequency, CMatrix(H.rows(), H.cols())};
  for (Eigen::Index l = 0; l < H.cols(); ++l) {
    for (Eigen::Index k = 0; k < H.rows(); ++k) {
      const Complex nominal = H.entries(k, l);
      const auto z = keyed_normal_pair(model.seed, stream, H.frequency, k, l, trial);
      const double amplitude = std::max(0.0, std::abs(nominal) + sigma_amp * z.first);
      const double phase = std::arg(nominal) + sigma_phase * z.second;
      out.entries(k, l) = std::polar(amplitude, phase);
    }
  }
  return out;
}

TransferMatrix averaged_perturbed(const TransferMatrix& H, const UncertaintyModel& model,
                                  std::string_view stream) {
  if (model.trials < 1) throw std::invalid_argument("averaged_perturbed: trials must be >= 1");
  if (model.sigma_amp_sq == 0.0 && model.sigma_phase_sq == 0.0) return H;
  TransferMatrix sum{H.frequency, CMatrix::Zero(H.rows(), H.cols())};
  for (int t = 0; t < model.trials; ++t) {
    sum.entries += perturb(H, model, stream, t).entries;
  }
  sum.entries /= static_cast<double>(model.trials);
  return sum;
}

}  // namespace psz
