#pragma once

#include <string>
#include <vector>

#include "psz/types.hpp"

namespace psz {

/// Averaged power of the wanted field (numerator) and of the leakage it is
/// compared against (denominator), as they enter one isolation ratio.
struct PowerRatio {
  double numerator = 0.0;
  double denominator = 1.0;
  double ratio() const;
};

/// Isolation at one frequency. `corr` assumes fully correlated channels,
/// `uncorr` fully uncorrelated ones; the reported value is the worse of the two.
/// A zero denominator yields +inf with `infinite` set.
struct MetricValue {
  double frequency = 0.0;
  PowerRatio corr_power;
  PowerRatio uncorr_power;
  double corr = 0.0;
  double uncorr = 0.0;
  double value = 0.0;
  double db = 0.0;
  bool infinite = false;
};

struct MetricSpectrum {
  std::string label;
  std::vector<MetricValue> values;
};

/// Inter-zone isolation of one program: zone-averaged power in the bright
/// zone over zone-averaged power in the dark zone.
MetricValue izi(const SystemMatrix& M, const IndexSet& bright_points, const IndexSet& dark_points,
                const IndexSet& program_channels);

/// Inter-program isolation within one zone: channel-count-normalized power
/// of the target program over that of the interfering program.
MetricValue ipi(const SystemMatrix& M, const IndexSet& zone_points, const IndexSet& target_channels,
                const IndexSet& interferer_channels);

MetricValue single_point_ipi(const SystemMatrix& M, Eigen::Index point, const IndexSet& target_channels,
                             const IndexSet& interferer_channels);

/// (||H_A q||^2 / K_A) / (||H_B q||^2 / K_B); +inf when the dark-zone energy is 0.
double acoustic_contrast(const CMatrix& H_bright, const CMatrix& H_dark, const CVector& q);

/// Builds a MetricValue from its correlated and uncorrelated power ratios.
MetricValue make_metric(double frequency, PowerRatio corr, PowerRatio uncorr);

/// 1/3-octave smoothing in linear power. Over all points with frequency in
/// [f 2^{-1/6}, f 2^{1/6}] (truncated at the ends) the numerator and
/// denominator powers are averaged separately and the ratio re-formed, so a
/// spectrum with unit denominators reduces to a plain windowed mean.
MetricSpectrum third_octave_smooth(const MetricSpectrum& spectrum);

/// Generic fractional-octave variant; `fraction` = 3 gives 1/3 octave.
MetricSpectrum fractional_octave_smooth(const MetricSpectrum& spectrum, double fraction);

double to_db(double power_ratio);

}  // namespace psz
