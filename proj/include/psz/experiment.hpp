#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psz/filter_design.hpp"
#include "psz/metrics.hpp"
#include "psz/perturbation.hpp"
#include "psz/scene.hpp"
#include "psz/spatial.hpp"

namespace psz {

/// Invalid experiment configuration. `where` is a JSON pointer or a
/// "line L, column C" location.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

struct FrequencyGrid {
  double start_hz = 100.0;
  double stop_hz = 10000.0;
  /// Log spacing when > 0, otherwise linear spacing with `step_hz`.
  double points_per_octave = 48.0;
  double step_hz = 0.0;

  std::vector<double> values() const;
};

struct ListenerCase {
  std::string name;
  ListenerDisplacement displacement;
};

/// Which positions the filters evaluated at a moved listener were designed for.
enum class DesignSource { Reoptimized, Centered };
const char* design_source_name(DesignSource s);

struct BetaPoint {
  double frequency_hz = 0.0;
  double beta = 0.0;
};

struct MapRequest {
  std::vector<double> frequencies_hz{500.0, 1000.0, 2000.0};
  std::vector<double> levels_db{20.0, 30.0};
  GridRegion region{};
  double resolution_m = 0.02;
  double cap_db = 40.0;
  RenderingMode mode = RenderingMode::Mono;
  /// Zone whose program is the target.
  Zone target_zone = Zone::A;
};

struct ExperimentConfig {
  LinearArrayLayout layout{};
  FrequencyGrid frequencies{};
  std::vector<RenderingMode> modes{RenderingMode::Mono, RenderingMode::Stereo, RenderingMode::Xtc};
  UncertaintyModel uncertainty{1e-4, 1e-4, 10, 20220101};
  /// Constant beta; when unset, beta = K sigma_amp^2.
  std::optional<double> beta;
  /// Per-frequency beta, linearly interpolated and held constant past the ends.
  std::vector<BetaPoint> beta_table;
  std::vector<ListenerCase> listener_cases{{"moved_a", {Zone::A, -0.3, -0.2}}};
  std::vector<DesignSource> design_sources{DesignSource::Reoptimized, DesignSource::Centered};
  std::optional<MapRequest> map = MapRequest{};
  std::string output_dir = "psz_results";

  Scene scene() const { return linear_array_scene(layout); }
  double beta_at(double frequency_hz, Eigen::Index point_count) const;
};

ExperimentConfig paper_default_config();

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fully resolved configuration as pretty-printed JSON; parse_config of the
/// result reproduces the same configuration.
std::string config_to_json(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Frequency sweeps

struct SpectraCase {
  RenderingMode mode;
  std::string listener_case;  // "centered" or a ListenerCase name
  DesignSource design;
  MetricSpectrum izi_a, izi_b, ipi_a, ipi_b;
};

struct SpectraResult {
  std::vector<SpectraCase> cases;
  std::vector<double> skipped_hz;
  std::vector<std::string> warnings;
};

SpectraResult compute_spectra(const ExperimentConfig& config, int workers = 1);

// ---------------------------------------------------------------------------
// Spatial maps

struct MapResult {
  double frequency = 0.0;
  IpiMap map;
  std::vector<ContourSet> contours;  // one per requested level
  std::vector<double> areas_m2;
};

std::vector<MapResult> compute_maps(const ExperimentConfig& config, int workers = 1);

/// Filters used for the nominal two-listener layout at one frequency:
/// designed on the averaged design-set transfer functions.
FilterMatrix centered_filters(const ExperimentConfig& config, RenderingMode mode, double frequency);

// ---------------------------------------------------------------------------
// File output

/// Writes spectra CSVs and manifest.json into config.output_dir. Returns
/// the written file names (relative to the output directory).
std::vector<std::string> write_spectra(const ExperimentConfig& config, const SpectraResult& result);
std::vector<std::string> write_maps(const ExperimentConfig& config, const std::vector<MapResult>& maps);

/// Decimal with 9 significant digits; "inf" / "nan" for non-finite values.
std::string format_number(double v);

}  // namespace psz
