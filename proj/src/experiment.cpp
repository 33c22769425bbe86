#include "psz/experiment.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "psz/acoustics.hpp"
#include "psz/parallel.hpp"

namespace psz {

using nlohmann::json;

const char* design_source_name(DesignSource s) {
  return s == DesignSource::Reoptimized ? "reoptimized" : "centered";
}

std::vector<double> FrequencyGrid::values() const {
  std::vector<double> out;
  if (points_per_octave > 0.0) {
    const double octaves = std::log2(stop_hz / start_hz);
    const auto n = static_cast<long>(std::floor(octaves * points_per_octave + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(start_hz * std::exp2(static_cast<double>(i) / points_per_octave));
  } else {
    const auto n = static_cast<long>(std::floor((stop_hz - start_hz) / step_hz + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(start_hz + static_cast<double>(i) * step_hz);
  }
  return out;
}

double ExperimentConfig::beta_at(double frequency_hz, Eigen::Index point_count) const {
  if (!beta_table.empty()) {
    if (frequency_hz <= beta_table.front().frequency_hz) return beta_table.front().beta;
    if (frequency_hz >= beta_table.back().frequency_hz) return beta_table.back().beta;
    for (std::size_t i = 1; i < beta_table.size(); ++i) {
      const auto& lo = beta_table[i - 1];
      const auto& hi = beta_table[i];
      if (frequency_hz <= hi.frequency_hz) {
        const double t = (frequency_hz - lo.frequency_hz) / (hi.frequency_hz - lo.frequency_hz);
        return lo.beta + t * (hi.beta - lo.beta);
      }
    }
  }
  if (beta) return *beta;
  return default_beta(point_count, uncertainty.sigma_amp_sq);
}

ExperimentConfig paper_default_config() { return ExperimentConfig{}; }

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  const json& node() const { return node_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(path_.empty() ? "/" : path_, what); }

  void require_object(std::initializer_list<const char*> allowed) const {
    if (!node_.is_object()) fail("expected an object");
    std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, _] : node_.items()) {
      if (!keys.count(key)) Reader(node_[key], path_ + "/" + key).fail("unknown key");
    }
  }

  bool has(const char* key) const { return node_.contains(key) && !node_[key].is_null(); }
  Reader child(const char* key) const { return Reader(node_.at(key), path_ + "/" + key); }
  Reader element(std::size_t i) const { return Reader(node_.at(i), path_ + "/" + std::to_string(i)); }

  double number() const {
    if (!node_.is_number()) fail("expected a number");
    return node_.get<double>();
  }
  std::string string() const {
    if (!node_.is_string()) fail("expected a string");
    return node_.get<std::string>();
  }
  std::size_t array_size() const {
    if (!node_.is_array()) fail("expected an array");
    return node_.size();
  }

  double number(const char* key, double fallback) const { return has(key) ? child(key).number() : fallback; }

 private:
  const json& node_;
  std::string path_;
};

Zone parse_zone(const Reader& r) {
  const auto s = r.string();
  if (s == "A") return Zone::A;
  if (s == "B") return Zone::B;
  r.fail("expected \"A\" or \"B\"");
}

std::vector<int> parse_labels(const Reader& r) {
  std::vector<int> out;
  for (std::size_t i = 0; i < r.array_size(); ++i) {
    const auto e = r.element(i);
    if (!e.node().is_number_integer()) e.fail("expected a 1-based loudspeaker label");
    out.push_back(e.node().get<int>());
  }
  return out;
}

LinearArrayLayout parse_layout(const Reader& r) {
  LinearArrayLayout layout;
  if (r.node().is_string()) {
    if (r.string() != "paper-default") r.fail("expected \"paper-default\" or a layout object");
    return layout;
  }
  r.require_object({"speaker_count", "speaker_spacing_m", "zone_separation_m", "array_distance_m",
                    "ear_spacing_m", "sound_speed_mps", "piston_radius_m", "virtual_sources"});
  if (r.has("speaker_count")) {
    const auto c = r.child("speaker_count");
    if (!c.node().is_number_integer() || c.node().get<int>() < 1) c.fail("expected a positive integer");
    layout.speaker_count = c.node().get<int>();
  }
  layout.speaker_spacing = r.number("speaker_spacing_m", layout.speaker_spacing);
  layout.zone_separation = r.number("zone_separation_m", layout.zone_separation);
  layout.array_distance = r.number("array_distance_m", layout.array_distance);
  layout.ear_spacing = r.number("ear_spacing_m", layout.ear_spacing);
  layout.sound_speed = r.number("sound_speed_mps", layout.sound_speed);
  layout.piston_radius = r.number("piston_radius_m", layout.piston_radius);
  if (r.has("virtual_sources")) {
    const auto vs = r.child("virtual_sources");
    vs.require_object({"A", "B"});
    if (vs.has("A")) layout.virtual_sources_a = parse_labels(vs.child("A"));
    if (vs.has("B")) layout.virtual_sources_b = parse_labels(vs.child("B"));
  }
  if (!(layout.speaker_spacing > 0.0)) r.child("speaker_spacing_m").fail("must be > 0");
  if (!(layout.sound_speed > 0.0)) r.child("sound_speed_mps").fail("must be > 0");
  if (!(layout.piston_radius >= 0.0)) r.child("piston_radius_m").fail("must be >= 0");
  if (!(layout.ear_spacing > 0.0)) r.child("ear_spacing_m").fail("must be > 0");
  for (const auto* labels : {&layout.virtual_sources_a, &layout.virtual_sources_b}) {
    for (int label : *labels) {
      if (label < 1 || label > layout.speaker_count) {
        r.fail("virtual source label " + std::to_string(label) + " outside 1.." +
               std::to_string(layout.speaker_count));
      }
    }
  }
  return layout;
}

FrequencyGrid parse_frequencies(const Reader& r) {
  r.require_object({"start_hz", "stop_hz", "points_per_octave", "step_hz"});
  FrequencyGrid g;
  g.start_hz = r.number("start_hz", g.start_hz);
  g.stop_hz = r.number("stop_hz", g.stop_hz);
  if (r.has("step_hz")) {
    if (r.has("points_per_octave")) r.fail("give either points_per_octave or step_hz, not both");
    g.step_hz = r.child("step_hz").number();
    g.points_per_octave = 0.0;
    if (!(g.step_hz > 0.0)) r.child("step_hz").fail("must be > 0");
  } else {
    g.points_per_octave = r.number("points_per_octave", g.points_per_octave);
    if (!(g.points_per_octave > 0.0)) r.child("points_per_octave").fail("must be > 0");
  }
  if (!(g.start_hz > 0.0)) r.fail("start_hz must be > 0");
  if (!(g.start_hz < g.stop_hz)) r.fail("start_hz must be < stop_hz");
  return g;
}

RenderingMode parse_mode_at(const Reader& r) {
  try {
    return parse_mode(r.string());
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
}

UncertaintyModel parse_uncertainty(const Reader& r) {
  r.require_object({"sigma_sq", "sigma_amp_sq", "sigma_phase_sq", "trials", "seed"});
  UncertaintyModel u = ExperimentConfig{}.uncertainty;
  if (r.has("sigma_sq")) {
    u.sigma_amp_sq = u.sigma_phase_sq = r.child("sigma_sq").number();
    if (!(u.sigma_amp_sq >= 0.0)) r.child("sigma_sq").fail("variance must be >= 0");
  }
  if (r.has("sigma_amp_sq")) {
    u.sigma_amp_sq = r.child("sigma_amp_sq").number();
    if (!(u.sigma_amp_sq >= 0.0)) r.child("sigma_amp_sq").fail("variance must be >= 0");
  }
  if (r.has("sigma_phase_sq")) {
    u.sigma_phase_sq = r.child("sigma_phase_sq").number();
    if (!(u.sigma_phase_sq >= 0.0)) r.child("sigma_phase_sq").fail("variance must be >= 0");
  }
  if (r.has("trials")) {
    const auto t = r.child("trials");
    if (!t.node().is_number_integer() || t.node().get<long>() < 1) t.fail("expected an integer >= 1");
    u.trials = t.node().get<int>();
  }
  if (r.has("seed")) {
    const auto s = r.child("seed");
    if (!s.node().is_number_unsigned()) s.fail("expected a non-negative integer");
    u.seed = s.node().get<std::uint64_t>();
  }
  return u;
}

GridRegion parse_region(const Reader& r) {
  r.require_object({"x_min", "x_max", "y_min", "y_max", "z"});
  GridRegion g;
  g.x_min = r.number("x_min", g.x_min);
  g.x_max = r.number("x_max", g.x_max);
  g.y_min = r.number("y_min", g.y_min);
  g.y_max = r.number("y_max", g.y_max);
  g.z = r.number("z", g.z);
  if (!(g.x_min < g.x_max) || !(g.y_min < g.y_max)) r.fail("region must have min < max on both axes");
  return g;
}

std::vector<double> parse_numbers(const Reader& r) {
  std::vector<double> out;
  for (std::size_t i = 0; i < r.array_size(); ++i) out.push_back(r.element(i).number());
  return out;
}

MapRequest parse_map(const Reader& r) {
  r.require_object({"frequencies_hz", "levels_db", "region", "resolution_m", "cap_db", "mode", "target_zone"});
  MapRequest m;
  if (r.has("frequencies_hz")) m.frequencies_hz = parse_numbers(r.child("frequencies_hz"));
  if (r.has("levels_db")) m.levels_db = parse_numbers(r.child("levels_db"));
  if (r.has("region")) m.region = parse_region(r.child("region"));
  m.resolution_m = r.number("resolution_m", m.resolution_m);
  m.cap_db = r.number("cap_db", m.cap_db);
  if (r.has("mode")) m.mode = parse_mode_at(r.child("mode"));
  if (r.has("target_zone")) m.target_zone = parse_zone(r.child("target_zone"));
  if (m.frequencies_hz.empty()) r.fail("at least one map frequency is required");
  for (double f : m.frequencies_hz) {
    if (!(f > 0.0)) r.child("frequencies_hz").fail("frequencies must be > 0");
  }
  if (!(m.resolution_m > 0.0)) r.child("resolution_m").fail("must be > 0");
  try {
    make_grid(m.region, m.resolution_m, 1.0, m.cap_db);
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
  return m;
}

ExperimentConfig parse_root(const Reader& r) {
  r.require_object({"scene", "frequencies", "modes", "uncertainty", "beta", "listener_cases",
                    "design_sources", "map", "output_dir"});
  ExperimentConfig c;
  if (r.has("scene")) c.layout = parse_layout(r.child("scene"));
  if (r.has("frequencies")) c.frequencies = parse_frequencies(r.child("frequencies"));
  if (r.has("modes")) {
    const auto m = r.child("modes");
    c.modes.clear();
    for (std::size_t i = 0; i < m.array_size(); ++i) c.modes.push_back(parse_mode_at(m.element(i)));
    if (c.modes.empty()) m.fail("at least one rendering mode is required");
  }
  if (r.has("uncertainty")) c.uncertainty = parse_uncertainty(r.child("uncertainty"));
  if (r.has("beta")) {
    const auto b = r.child("beta");
    if (b.node().is_number()) {
      c.beta = b.number();
      if (!(*c.beta >= 0.0)) b.fail("must be >= 0");
    } else if (b.node().is_string()) {
      if (b.string() != "auto") b.fail("expected a number, \"auto\" or a table");
    } else {
      for (std::size_t i = 0; i < b.array_size(); ++i) {
        const auto e = b.element(i);
        e.require_object({"frequency_hz", "beta"});
        if (!e.has("frequency_hz") || !e.has("beta")) e.fail("needs frequency_hz and beta");
        BetaPoint p{e.child("frequency_hz").number(), e.child("beta").number()};
        if (!(p.beta >= 0.0)) e.child("beta").fail("must be >= 0");
        if (!c.beta_table.empty() && !(p.frequency_hz > c.beta_table.back().frequency_hz)) {
          e.child("frequency_hz").fail("table frequencies must be strictly increasing");
        }
        c.beta_table.push_back(p);
      }
    }
  }
  if (r.has("listener_cases")) {
    const auto lc = r.child("listener_cases");
    c.listener_cases.clear();
    std::set<std::string> names{"centered"};
    for (std::size_t i = 0; i < lc.array_size(); ++i) {
      const auto e = lc.element(i);
      e.require_object({"name", "listener", "dx_m", "dy_m"});
      ListenerCase lcase;
      lcase.name = e.has("name") ? e.child("name").string() : "case" + std::to_string(i + 1);
      if (lcase.name.empty() || lcase.name.find_first_of("/\\ ") != std::string::npos) {
        e.fail("name must be non-empty without spaces or slashes");
      }
      if (!names.insert(lcase.name).second) e.fail("duplicate listener case name '" + lcase.name + "'");
      if (e.has("listener")) lcase.displacement.listener = parse_zone(e.child("listener"));
      lcase.displacement.dx = e.number("dx_m", 0.0);
      lcase.displacement.dy = e.number("dy_m", 0.0);
      c.listener_cases.push_back(lcase);
    }
  }
  if (r.has("design_sources")) {
    const auto ds = r.child("design_sources");
    c.design_sources.clear();
    for (std::size_t i = 0; i < ds.array_size(); ++i) {
      const auto s = ds.element(i).string();
      if (s == "reoptimized") c.design_sources.push_back(DesignSource::Reoptimized);
      else if (s == "centered") c.design_sources.push_back(DesignSource::Centered);
      else ds.element(i).fail("expected \"reoptimized\" or \"centered\"");
    }
  }
  if (r.node().contains("map")) {
    if (r.node()["map"].is_null()) c.map.reset();
    else c.map = parse_map(r.child("map"));
  }
  if (r.has("output_dir")) c.output_dir = r.child("output_dir").string();

  const Scene scene = c.scene();
  const auto violations = validate(scene);
  if (!violations.empty()) r.fail("scene: " + violations.front().message);
  return c;
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    // Recover line/column from the byte offset.
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < json_text.size(); ++i) {
      if (json_text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(column),
                      "JSON syntax error");
  }
  return parse_root(Reader(root, ""));
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  const auto& l = c.layout;
  j["scene"] = {
      {"speaker_count", l.speaker_count},
      {"speaker_spacing_m", l.speaker_spacing},
      {"zone_separation_m", l.zone_separation},
      {"array_distance_m", l.array_distance},
      {"ear_spacing_m", l.ear_spacing},
      {"sound_speed_mps", l.sound_speed},
      {"piston_radius_m", l.piston_radius},
      {"virtual_sources", {{"A", l.virtual_sources_a}, {"B", l.virtual_sources_b}}},
  };
  json freq = {{"start_hz", c.frequencies.start_hz}, {"stop_hz", c.frequencies.stop_hz}};
  if (c.frequencies.points_per_octave > 0.0) freq["points_per_octave"] = c.frequencies.points_per_octave;
  else freq["step_hz"] = c.frequencies.step_hz;
  j["frequencies"] = freq;
  j["modes"] = json::array();
  for (auto m : c.modes) j["modes"].push_back(mode_name(m));
  j["uncertainty"] = {{"sigma_amp_sq", c.uncertainty.sigma_amp_sq},
                      {"sigma_phase_sq", c.uncertainty.sigma_phase_sq},
                      {"trials", c.uncertainty.trials},
                      {"seed", c.uncertainty.seed}};
  if (!c.beta_table.empty()) {
    j["beta"] = json::array();
    for (const auto& p : c.beta_table) j["beta"].push_back({{"frequency_hz", p.frequency_hz}, {"beta", p.beta}});
  } else if (c.beta) {
    j["beta"] = *c.beta;
  } else {
    j["beta"] = "auto";
  }
  j["listener_cases"] = json::array();
  for (const auto& lc : c.listener_cases) {
    j["listener_cases"].push_back({{"name", lc.name},
                                   {"listener", zone_name(lc.displacement.listener)},
                                   {"dx_m", lc.displacement.dx},
                                   {"dy_m", lc.displacement.dy}});
  }
  j["design_sources"] = json::array();
  for (auto s : c.design_sources) j["design_sources"].push_back(design_source_name(s));
  if (c.map) {
    const auto& m = *c.map;
    j["map"] = {{"frequencies_hz", m.frequencies_hz},
                {"levels_db", m.levels_db},
                {"region",
                 {{"x_min", m.region.x_min},
                  {"x_max", m.region.x_max},
                  {"y_min", m.region.y_min},
                  {"y_max", m.region.y_max},
                  {"z", m.region.z}}},
                {"resolution_m", m.resolution_m},
                {"cap_db", m.cap_db},
                {"mode", mode_name(m.mode)},
                {"target_zone", zone_name(m.target_zone)}};
  } else {
    j["map"] = nullptr;
  }
  j["output_dir"] = c.output_dir;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Sweeps

namespace {

struct CasePlan {
  RenderingMode mode;
  std::string listener_case;
  DesignSource design;
  const ListenerCase* moved = nullptr;
};

std::vector<CasePlan> plan_cases(const ExperimentConfig& c) {
  std::vector<CasePlan> plans;
  for (auto mode : c.modes) {
    plans.push_back({mode, "centered", DesignSource::Centered, nullptr});
    for (const auto& lc : c.listener_cases) {
      for (auto ds : c.design_sources) plans.push_back({mode, lc.name, ds, &lc});
    }
  }
  return plans;
}

struct CaseMetrics {
  MetricValue izi_a, izi_b, ipi_a, ipi_b;
};

CaseMetrics evaluate(const Scene& scene, const SystemMatrix& M, const ChannelLayout& layout) {
  return {izi(M, scene.zone_a_points, scene.zone_b_points, layout.program_a),
          izi(M, scene.zone_b_points, scene.zone_a_points, layout.program_b),
          ipi(M, scene.zone_a_points, layout.program_a, layout.program_b),
          ipi(M, scene.zone_b_points, layout.program_b, layout.program_a)};
}

std::string design_stream(const std::string& case_name) { return "design/" + case_name; }
std::string eval_stream(const std::string& case_name) { return "eval/" + case_name; }

FilterMatrix design_filters(const ExperimentConfig& c, const Scene& scene, const std::string& case_name,
                            RenderingMode mode, double f) {
  const auto H = averaged_perturbed(transfer_matrix(scene, f), c.uncertainty, design_stream(case_name));
  const auto target = build_target_matrix(scene, H, mode);
  return pressure_matching(H, target, c.beta_at(f, scene.point_count()));
}

}  // namespace

FilterMatrix centered_filters(const ExperimentConfig& config, RenderingMode mode, double frequency) {
  return design_filters(config, config.scene(), "centered", mode, frequency);
}

SpectraResult compute_spectra(const ExperimentConfig& config, int workers) {
  const Scene centered = config.scene();
  std::map<std::string, Scene> moved;
  for (const auto& lc : config.listener_cases) moved[lc.name] = move_listener(centered, lc.displacement);

  const auto plans = plan_cases(config);
  const auto freqs = config.frequencies.values();
  std::vector<std::vector<CaseMetrics>> per_freq(freqs.size());
  std::vector<std::string> failure(freqs.size());

  parallel_for(freqs.size(), workers, [&](std::size_t fi) {
    const double f = freqs[fi];
    std::map<std::pair<std::string, int>, FilterMatrix> filters;
    auto filters_for = [&](const std::string& case_name, const Scene& s, RenderingMode mode) -> const FilterMatrix& {
      const auto key = std::make_pair(case_name, static_cast<int>(mode));
      auto it = filters.find(key);
      if (it == filters.end()) it = filters.emplace(key, design_filters(config, s, case_name, mode, f)).first;
      return it->second;
    };
    std::map<std::string, TransferMatrix> eval_h;
    auto eval_for = [&](const std::string& case_name, const Scene& s) -> const TransferMatrix& {
      auto it = eval_h.find(case_name);
      if (it == eval_h.end()) {
        it = eval_h.emplace(case_name, averaged_perturbed(transfer_matrix(s, f), config.uncertainty,
                                                          eval_stream(case_name))).first;
      }
      return it->second;
    };

    try {
      std::vector<CaseMetrics> out;
      out.reserve(plans.size());
      for (const auto& p : plans) {
        const Scene& eval_scene = p.moved ? moved.at(p.listener_case) : centered;
        const bool centered_design = !p.moved || p.design == DesignSource::Centered;
        const FilterMatrix& C = centered_design ? filters_for("centered", centered, p.mode)
                                                : filters_for(p.listener_case, eval_scene, p.mode);
        const auto M = system_matrix(eval_for(p.listener_case, eval_scene), C);
        out.push_back(evaluate(eval_scene, M, channel_layout(p.mode)));
      }
      per_freq[fi] = std::move(out);
    } catch (const IllConditionedError& e) {
      failure[fi] = e.what();
    }
  });

  SpectraResult result;
  for (const auto& p : plans) {
    SpectraCase sc{p.mode, p.listener_case, p.design, {}, {}, {}, {}};
    const std::string suffix = std::string("_") + mode_name(p.mode) + "_" + p.listener_case;
    sc.izi_a.label = "IZI_A" + suffix;
    sc.izi_b.label = "IZI_B" + suffix;
    sc.ipi_a.label = "IPI_A" + suffix;
    sc.ipi_b.label = "IPI_B" + suffix;
    result.cases.push_back(std::move(sc));
  }
  for (std::size_t fi = 0; fi < freqs.size(); ++fi) {
    if (!failure[fi].empty()) {
      result.skipped_hz.push_back(freqs[fi]);
      result.warnings.push_back("skipped " + format_number(freqs[fi]) + " Hz: " + failure[fi]);
      continue;
    }
    for (std::size_t ci = 0; ci < plans.size(); ++ci) {
      const auto& m = per_freq[fi][ci];
      result.cases[ci].izi_a.values.push_back(m.izi_a);
      result.cases[ci].izi_b.values.push_back(m.izi_b);
      result.cases[ci].ipi_a.values.push_back(m.ipi_a);
      result.cases[ci].ipi_b.values.push_back(m.ipi_b);
    }
  }
  return result;
}

std::vector<MapResult> compute_maps(const ExperimentConfig& config, int workers) {
  if (!config.map) throw ConfigError("/map", "no map request in config");
  const auto& req = *config.map;
  const Scene scene = config.scene();
  const auto layout = channel_layout(req.mode);
  const auto& target = layout.program(req.target_zone);
  const auto& interferer = layout.program(req.target_zone == Zone::A ? Zone::B : Zone::A);

  std::vector<MapResult> out;
  for (double f : req.frequencies_hz) {
    MapResult r;
    r.frequency = f;
    const auto C = centered_filters(config, req.mode, f);
    r.map = ipi_map(scene, C, req.region, req.resolution_m, target, interferer, req.cap_db, workers);
    for (double level : req.levels_db) {
      r.contours.push_back(extract_contours(r.map, level));
      r.areas_m2.push_back(enclosed_area(r.contours.back(), r.map));
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Output

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string frequency_tag(double f) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%gHz", f);
  return buf;
}

// The output directory is left out so that a run is byte-identical wherever it is written.
json manifest_base(const ExperimentConfig& config, const char* command) {
  json resolved = json::parse(config_to_json(config));
  resolved.erase("output_dir");
  return {{"tool", "psz"}, {"command", command}, {"config", resolved}, {"seed", config.uncertainty.seed}};
}

json to_json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

}  // namespace

std::vector<std::string> write_spectra(const ExperimentConfig& config, const SpectraResult& result) {
  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  for (const auto& sc : result.cases) {
    const std::array<const MetricSpectrum*, 4> raw{&sc.izi_a, &sc.izi_b, &sc.ipi_a, &sc.ipi_b};
    std::array<MetricSpectrum, 4> smooth;
    for (std::size_t i = 0; i < 4; ++i) smooth[i] = third_octave_smooth(*raw[i]);

    std::ostringstream csv;
    csv << "frequency_hz,izi_a_db,izi_b_db,ipi_a_db,ipi_b_db,"
           "izi_a_smooth_db,izi_b_smooth_db,ipi_a_smooth_db,ipi_b_smooth_db\n";
    for (std::size_t n = 0; n < sc.izi_a.values.size(); ++n) {
      csv << format_number(sc.izi_a.values[n].frequency);
      for (const auto* s : raw) csv << ',' << format_number(s->values[n].db);
      for (const auto& s : smooth) csv << ',' << format_number(s.values[n].db);
      csv << '\n';
    }
    const std::string name = std::string("spectra_") + mode_name(sc.mode) + "_" + sc.listener_case + "_" +
                             design_source_name(sc.design) + ".csv";
    write_file(dir / name, csv.str());
    files.push_back(name);
  }

  json manifest = manifest_base(config, "spectra");
  manifest["frequencies_hz"] = json::array();
  for (const auto& v : result.cases.empty() ? std::vector<MetricValue>{} : result.cases.front().izi_a.values) {
    manifest["frequencies_hz"].push_back(v.frequency);
  }
  manifest["skipped_hz"] = result.skipped_hz;
  manifest["files"] = files;
  write_file(dir / "manifest_spectra.json", manifest.dump(2) + "\n");
  files.push_back("manifest_spectra.json");
  return files;
}

std::vector<std::string> write_maps(const ExperimentConfig& config, const std::vector<MapResult>& maps) {
  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  std::ostringstream areas;
  areas << "frequency_hz,level_db,area_m2\n";

  for (const auto& r : maps) {
    const auto tag = frequency_tag(r.frequency);
    const auto& m = r.map;

    std::ostringstream csv;
    csv << "x_m,y_m,ipi_db\n";
    json grid = json::array();
    for (Eigen::Index iy = 0; iy < m.ny; ++iy) {
      json row = json::array();
      for (Eigen::Index ix = 0; ix < m.nx; ++ix) {
        const Vec2 p = m.position(ix, iy);
        const double v = m.capped(ix, iy);
        csv << format_number(p.x()) << ',' << format_number(p.y()) << ',' << format_number(v) << '\n';
        row.push_back(m.is_valid(ix, iy) ? json(v) : json(nullptr));
      }
      grid.push_back(std::move(row));
    }
    write_file(dir / ("map_" + tag + ".csv"), csv.str());
    files.push_back("map_" + tag + ".csv");

    json mj = {{"frequency_hz", r.frequency}, {"x0_m", m.x0},  {"y0_m", m.y0}, {"spacing_m", m.spacing},
               {"nx", m.nx},                  {"ny", m.ny},    {"cap_db", m.cap_db}, {"ipi_db", grid}};
    write_file(dir / ("map_" + tag + ".json"), mj.dump() + "\n");
    files.push_back("map_" + tag + ".json");

    json cj = {{"frequency_hz", r.frequency}, {"contours", json::array()}};
    for (std::size_t li = 0; li < r.contours.size(); ++li) {
      const auto& cs = r.contours[li];
      json lines = json::array();
      for (const auto& pl : cs.lines) {
        json pts = json::array();
        for (const auto& p : pl.points) pts.push_back({p.x(), p.y()});
        lines.push_back({{"closed", pl.closed}, {"points", pts}});
      }
      cj["contours"].push_back({{"level_db", cs.level_db}, {"area_m2", r.areas_m2[li]}, {"lines", lines}});
      areas << format_number(r.frequency) << ',' << format_number(cs.level_db) << ','
            << format_number(r.areas_m2[li]) << '\n';
    }
    write_file(dir / ("contours_" + tag + ".json"), cj.dump() + "\n");
    files.push_back("contours_" + tag + ".json");
  }
  write_file(dir / "areas.csv", areas.str());
  files.push_back("areas.csv");

  json manifest = manifest_base(config, "map");
  manifest["files"] = files;
  json summary = json::array();
  for (const auto& r : maps) {
    for (std::size_t li = 0; li < r.contours.size(); ++li) {
      summary.push_back({{"frequency_hz", r.frequency},
                         {"level_db", r.contours[li].level_db},
                         {"area_m2", to_json_number(r.areas_m2[li])}});
    }
  }
  manifest["areas"] = summary;
  write_file(dir / "manifest_map.json", manifest.dump(2) + "\n");
  files.push_back("manifest_map.json");
  return files;
}

}  // namespace psz
