// psz: personal sound zone experiment runner.
//
//   psz template                 print the built-in default config
//   psz validate <config>        resolve and check a config
//   psz spectra <config>         IZI/IPI frequency sweeps
//   psz map <config>             single-point IPI maps, contours and areas
//
// Worker count comes from PSZ_WORKERS (default 1). Exit codes: 0 success,
// 1 configuration error, 2 numerical/runtime error.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "psz/experiment.hpp"

namespace {

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

int workers_from_env() {
  const char* env = std::getenv("PSZ_WORKERS");
  if (!env || !*env) return 1;
  try {
    return std::max(1, std::stoi(env));
  } catch (const std::exception&) {
    throw psz::ConfigError("PSZ_WORKERS", std::string("not an integer: '") + env + "'");
  }
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
};

psz::ExperimentConfig load(const std::string& path, const Overrides& o) {
  auto config = path == "paper-default" ? psz::paper_default_config() : psz::load_config(path);
  if (o.seed) config.uncertainty.seed = *o.seed;
  if (o.output_dir) config.output_dir = *o.output_dir;
  return config;
}

void print_files(const psz::ExperimentConfig& config, const std::vector<std::string>& files) {
  for (const auto& f : files) std::cout << (std::filesystem::path(config.output_dir) / f).string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Personal sound zone filter design and isolation metrics"};
  app.require_subcommand(1);

  Overrides overrides;
  std::string config_path;

  auto* tmpl = app.add_subcommand("template", "Print the default experiment config");
  auto* validate = app.add_subcommand("validate", "Resolve a config and report errors");
  auto* spectra = app.add_subcommand("spectra", "Run IZI/IPI frequency sweeps");
  auto* map = app.add_subcommand("map", "Compute single-point IPI maps and contour areas");
  for (auto* sub : {validate, spectra, map}) {
    sub->add_option("config", config_path, "Config JSON path, or 'paper-default'")->required();
    sub->add_option("--seed", overrides.seed, "Override the uncertainty seed");
    sub->add_option("-o,--output-dir", overrides.output_dir, "Override the output directory");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (tmpl->parsed()) {
      std::cout << psz::config_to_json(psz::paper_default_config()) << '\n';
      return 0;
    }
    const auto config = load(config_path, overrides);
    const int workers = workers_from_env();

    if (validate->parsed()) {
      std::cout << psz::config_to_json(config) << '\n';
      const auto K = config.scene().point_count();
      std::cout << "resolved beta: " << psz::format_number(config.beta_at(config.frequencies.start_hz, K))
                << " at " << psz::format_number(config.frequencies.start_hz) << " Hz";
      if (!config.beta_table.empty()) {
        std::cout << ", " << psz::format_number(config.beta_at(config.frequencies.stop_hz, K)) << " at "
                  << psz::format_number(config.frequencies.stop_hz) << " Hz";
      }
      std::cout << "\nconfig valid\n";
      return 0;
    }
    if (spectra->parsed()) {
      const auto result = psz::compute_spectra(config, workers);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      print_files(config, psz::write_spectra(config, result));
      return 0;
    }
    if (map->parsed()) {
      if (!config.map) throw psz::ConfigError("/map", "config has no map request");
      print_files(config, psz::write_maps(config, psz::compute_maps(config, workers)));
      return 0;
    }
  } catch (const psz::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
