#include "psz/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace psz {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_indices(const IndexSet& set, Eigen::Index bound, const char* what) {
  if (set.empty()) throw std::invalid_argument(std::string(what) + " set is empty");
  for (auto i : set) {
    if (i < 0 || i >= bound) throw std::invalid_argument(std::string(what) + " index out of range");
  }
}

void require_disjoint(const IndexSet& a, const IndexSet& b, const char* what) {
  std::set<Eigen::Index> seen(a.begin(), a.end());
  for (auto i : b) {
    if (seen.count(i)) throw std::invalid_argument(std::string(what) + " sets overlap");
  }
}

// Sum over points of |sum over channels M_ki|^2.
double coherent_power(const CMatrix& M, const IndexSet& points, const IndexSet& channels) {
  double total = 0.0;
  for (auto k : points) {
    Complex p = 0.0;
    for (auto i : channels) p += M(k, i);
    total += std::norm(p);
  }
  return total;
}

// Sum over points and channels of |M_ki|^2.
double incoherent_power(const CMatrix& M, const IndexSet& points, const IndexSet& channels) {
  double total = 0.0;
  for (auto k : points) {
    for (auto i : channels) total += std::norm(M(k, i));
  }
  return total;
}

}  // namespace

double PowerRatio::ratio() const { return denominator == 0.0 ? kInf : numerator / denominator; }

MetricValue make_metric(double frequency, PowerRatio corr, PowerRatio uncorr) {
  MetricValue v;
  v.frequency = frequency;
  v.corr_power = corr;
  v.uncorr_power = uncorr;
  v.corr = corr.ratio();
  v.uncorr = uncorr.ratio();
  v.value = std::min(v.corr, v.uncorr);
  v.infinite = std::isinf(v.value);
  v.db = to_db(v.value);
  return v;
}

double to_db(double power_ratio) {
  if (std::isinf(power_ratio)) return kInf;
  return 10.0 * std::log10(power_ratio);
}

MetricValue izi(const SystemMatrix& M, const IndexSet& bright_points, const IndexSet& dark_points,
                const IndexSet& program_channels) {
  require_indices(bright_points, M.rows(), "bright-zone point");
  require_indices(dark_points, M.rows(), "dark-zone point");
  require_indices(program_channels, M.cols(), "program channel");
  require_disjoint(bright_points, dark_points, "zone point");

  const double nb = static_cast<double>(bright_points.size());
  const double nd = static_cast<double>(dark_points.size());
  const PowerRatio corr{coherent_power(M.entries, bright_points, program_channels) / nb,
                        coherent_power(M.entries, dark_points, program_channels) / nd};
  const PowerRatio uncorr{incoherent_power(M.entries, bright_points, program_channels) / nb,
                          incoherent_power(M.entries, dark_points, program_channels) / nd};
  return make_metric(M.frequency, corr, uncorr);
}

MetricValue ipi(const SystemMatrix& M, const IndexSet& zone_points, const IndexSet& target_channels,
                const IndexSet& interferer_channels) {
  require_indices(zone_points, M.rows(), "zone point");
  require_indices(target_channels, M.cols(), "target channel");
  require_indices(interferer_channels, M.cols(), "interferer channel");
  require_disjoint(target_channels, interferer_channels, "program channel");

  const double nt = static_cast<double>(target_channels.size());
  const double ni = static_cast<double>(interferer_channels.size());
  const PowerRatio corr{coherent_power(M.entries, zone_points, target_channels) / nt,
                        coherent_power(M.entries, zone_points, interferer_channels) / ni};
  const PowerRatio uncorr{incoherent_power(M.entries, zone_points, target_channels) / nt,
                          incoherent_power(M.entries, zone_points, interferer_channels) / ni};
  return make_metric(M.frequency, corr, uncorr);
}

MetricValue single_point_ipi(const SystemMatrix& M, Eigen::Index point, const IndexSet& target_channels,
                             const IndexSet& interferer_channels) {
  return ipi(M, IndexSet{point}, target_channels, interferer_channels);
}

double acoustic_contrast(const CMatrix& H_bright, const CMatrix& H_dark, const CVector& q) {
  if (H_bright.cols() != q.size() || H_dark.cols() != q.size()) {
    throw std::invalid_argument("acoustic_contrast: gain vector length does not match speaker count");
  }
  if (H_bright.rows() == 0 || H_dark.rows() == 0) {
    throw std::invalid_argument("acoustic_contrast: empty zone");
  }
  const double bright = (H_bright * q).squaredNorm() / static_cast<double>(H_bright.rows());
  const double dark = (H_dark * q).squaredNorm() / static_cast<double>(H_dark.rows());
  return PowerRatio{bright, dark}.ratio();
}

MetricSpectrum fractional_octave_smooth(const MetricSpectrum& spectrum, double fraction) {
  const auto& in = spectrum.values;
  for (std::size_t i = 1; i < in.size(); ++i) {
    if (!(in[i].frequency > in[i - 1].frequency)) {
      throw std::invalid_argument("smoothing: frequencies must be strictly increasing");
    }
  }
  // Window edges carry a small relative slack so that grid points sitting
  // exactly on a band edge are included despite rounding.
  const double half_band = std::pow(2.0, 0.5 / fraction);
  constexpr double slack = 1e-9;

  MetricSpectrum out{spectrum.label, {}};
  out.values.reserve(in.size());
  auto by_freq = [](const MetricValue& v, double f) { return v.frequency < f; };
  for (const auto& centre : in) {
    const double lo = centre.frequency / half_band * (1.0 - slack);
    const double hi = centre.frequency * half_band * (1.0 + slack);
    auto first = std::lower_bound(in.begin(), in.end(), lo, by_freq);
    PowerRatio corr{0.0, 0.0}, uncorr{0.0, 0.0};
    double n = 0.0;
    for (auto it = first; it != in.end() && it->frequency <= hi; ++it, n += 1.0) {
      corr.numerator += it->corr_power.numerator;
      corr.denominator += it->corr_power.denominator;
      uncorr.numerator += it->uncorr_power.numerator;
      uncorr.denominator += it->uncorr_power.denominator;
    }
    corr.numerator /= n;
    corr.denominator /= n;
    uncorr.numerator /= n;
    uncorr.denominator /= n;
    out.values.push_back(make_metric(centre.frequency, corr, uncorr));
  }
  return out;
}

MetricSpectrum third_octave_smooth(const MetricSpectrum& spectrum) {
  return fractional_octave_smooth(spectrum, 3.0);
}

}  // namespace psz
