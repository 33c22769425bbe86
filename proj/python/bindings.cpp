#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "psz/acoustics.hpp"
#include "psz/experiment.hpp"
#include "psz/spatial.hpp"

#include <array>
#include <optional>

namespace py = pybind11;
using namespace psz;

namespace {

// Matrices cross the boundary as plain complex ndarrays; the frequency tag
// only matters inside the library, so it is carried as 0 here unless given.
TransferMatrix transfer(const CMatrix& m, double f = 0.0) { return {f, m}; }

MetricSpectrum spectrum_of(const std::vector<MetricValue>& values) { return {"", values}; }

py::list contour_lines(const ContourSet& cs) {
  py::list out;
  for (const auto& line : cs.lines) {
    Eigen::MatrixX2d pts(static_cast<Eigen::Index>(line.points.size()), 2);
    for (std::size_t i = 0; i < line.points.size(); ++i) pts.row(static_cast<Eigen::Index>(i)) = line.points[i];
    out.append(py::make_tuple(pts, line.closed));
  }
  return out;
}

Eigen::MatrixXd map_grid(const IpiMap& m, bool capped) {
  Eigen::MatrixXd g(m.ny, m.nx);
  for (Eigen::Index iy = 0; iy < m.ny; ++iy)
    for (Eigen::Index ix = 0; ix < m.nx; ++ix) g(iy, ix) = capped ? m.capped(ix, iy) : m.raw(ix, iy);
  return g;
}

}  // namespace

PYBIND11_MODULE(_psz, m) {
  m.doc() = "Personal sound zone filter design and isolation metrics";

  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
  py::register_exception<IllConditionedError>(m, "IllConditionedError", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::enum_<Zone>(m, "Zone").value("A", Zone::A).value("B", Zone::B);
  py::enum_<RenderingMode>(m, "RenderingMode")
      .value("MONO", RenderingMode::Mono)
      .value("STEREO", RenderingMode::Stereo)
      .value("XTC", RenderingMode::Xtc);

  py::class_<Scene>(m, "Scene")
      .def(py::init<>())
      .def_readwrite("speakers", &Scene::speakers)
      .def_readwrite("speaker_axis", &Scene::speaker_axis)
      .def_readwrite("control_points", &Scene::control_points)
      .def_readwrite("zone_a_points", &Scene::zone_a_points)
      .def_readwrite("zone_b_points", &Scene::zone_b_points)
      .def_readwrite("virtual_sources_a", &Scene::virtual_sources_a)
      .def_readwrite("virtual_sources_b", &Scene::virtual_sources_b)
      .def_readwrite("sound_speed", &Scene::sound_speed)
      .def_readwrite("piston_radius", &Scene::piston_radius)
      .def("zone_center", &Scene::zone_center);

  m.def("default_paper_scene", &default_paper_scene);
  m.def(
      "move_listener",
      [](const Scene& s, Zone listener, double dx, double dy) { return move_listener(s, {listener, dx, dy}); },
      py::arg("scene"), py::arg("listener"), py::arg("dx"), py::arg("dy"));
  m.def(
      "validate",
      [](const Scene& s) {
        std::vector<std::string> out;
        for (const auto& v : validate(s)) out.push_back(v.message);
        return out;
      },
      "List of violated scene invariants; empty when valid.");

  m.def("piston_directivity", &piston_directivity);
  m.def("piston_response", &piston_response, py::arg("source"), py::arg("axis"), py::arg("field"),
        py::arg("frequency"), py::arg("piston_radius"), py::arg("sound_speed"));
  m.def(
      "transfer_matrix",
      [](const Scene& s, double f, std::optional<std::vector<Vec3>> points) {
        return points ? transfer_matrix(s, *points, f).entries : transfer_matrix(s, f).entries;
      },
      py::arg("scene"), py::arg("frequency"), py::arg("points") = py::none());

  py::class_<UncertaintyModel>(m, "UncertaintyModel")
      .def(py::init([](double amp, double phase, int trials, std::uint64_t seed) {
             return UncertaintyModel{amp, phase, trials, seed};
           }),
           py::arg("sigma_amp_sq") = 0.0, py::arg("sigma_phase_sq") = 0.0, py::arg("trials") = 1,
           py::arg("seed") = 0)
      .def_readwrite("sigma_amp_sq", &UncertaintyModel::sigma_amp_sq)
      .def_readwrite("sigma_phase_sq", &UncertaintyModel::sigma_phase_sq)
      .def_readwrite("trials", &UncertaintyModel::trials)
      .def_readwrite("seed", &UncertaintyModel::seed);

  m.def(
      "perturb",
      [](const CMatrix& H, double f, const UncertaintyModel& u, const std::string& stream, int trial) {
        return perturb(transfer(H, f), u, stream, trial).entries;
      },
      py::arg("H"), py::arg("frequency"), py::arg("model"), py::arg("stream"), py::arg("trial") = 0);
  m.def(
      "averaged_perturbed",
      [](const CMatrix& H, double f, const UncertaintyModel& u, const std::string& stream) {
        return averaged_perturbed(transfer(H, f), u, stream).entries;
      },
      py::arg("H"), py::arg("frequency"), py::arg("model"), py::arg("stream"));

  m.def(
      "build_target_matrix",
      [](const Scene& s, const CMatrix& H, RenderingMode mode) {
        return build_target_matrix(s, transfer(H), mode).entries;
      },
      py::arg("scene"), py::arg("H"), py::arg("mode"));
  m.def(
      "pressure_matching",
      [](const CMatrix& H, const CMatrix& target, double beta, double f) {
        return pressure_matching(transfer(H, f), TargetMatrix{f, target}, beta).entries;
      },
      py::arg("H"), py::arg("target"), py::arg("beta"), py::arg("frequency") = 0.0);
  m.def("cost", py::overload_cast<const CMatrix&, const CMatrix&, const CMatrix&, double>(&cost), py::arg("H"),
        py::arg("C"), py::arg("target"), py::arg("beta"));
  m.def(
      "system_matrix", [](const CMatrix& H, const CMatrix& C) { return system_matrix(transfer(H), {0.0, C}).entries; },
      py::arg("H"), py::arg("C"));
  m.def("default_beta", &default_beta, py::arg("point_count"), py::arg("sigma_sq"));

  py::class_<MetricValue>(m, "MetricValue")
      .def_readonly("frequency", &MetricValue::frequency)
      .def_readonly("corr", &MetricValue::corr)
      .def_readonly("uncorr", &MetricValue::uncorr)
      .def_readonly("value", &MetricValue::value)
      .def_readonly("db", &MetricValue::db)
      .def_readonly("infinite", &MetricValue::infinite)
      .def("__repr__", [](const MetricValue& v) {
        return "MetricValue(frequency=" + format_number(v.frequency) + ", db=" + format_number(v.db) + ")";
      });
  m.def(
      "make_metric",
      [](double f, double corr_num, double corr_den, double uncorr_num, double uncorr_den) {
        return make_metric(f, {corr_num, corr_den}, {uncorr_num, uncorr_den});
      },
      py::arg("frequency"), py::arg("corr_numerator"), py::arg("corr_denominator"), py::arg("uncorr_numerator"),
      py::arg("uncorr_denominator"));

  m.def(
      "izi", [](const CMatrix& M, const IndexSet& b, const IndexSet& d, const IndexSet& p, double f) {
        return izi({f, M}, b, d, p);
      },
      py::arg("M"), py::arg("bright_points"), py::arg("dark_points"), py::arg("program_channels"),
      py::arg("frequency") = 0.0);
  m.def(
      "ipi", [](const CMatrix& M, const IndexSet& z, const IndexSet& t, const IndexSet& i, double f) {
        return ipi({f, M}, z, t, i);
      },
      py::arg("M"), py::arg("zone_points"), py::arg("target_channels"), py::arg("interferer_channels"),
      py::arg("frequency") = 0.0);
  m.def(
      "single_point_ipi",
      [](const CMatrix& M, Eigen::Index k, const IndexSet& t, const IndexSet& i) {
        return single_point_ipi({0.0, M}, k, t, i);
      },
      py::arg("M"), py::arg("point"), py::arg("target_channels"), py::arg("interferer_channels"));
  m.def("acoustic_contrast", &acoustic_contrast, py::arg("H_bright"), py::arg("H_dark"), py::arg("q"));
  m.def(
      "third_octave_smooth",
      [](const std::vector<MetricValue>& values) { return third_octave_smooth(spectrum_of(values)).values; },
      py::arg("values"));

  py::class_<IpiMap>(m, "IpiMap")
      .def_readonly("frequency", &IpiMap::frequency)
      .def_readonly("x0", &IpiMap::x0)
      .def_readonly("y0", &IpiMap::y0)
      .def_readonly("spacing", &IpiMap::spacing)
      .def_readonly("nx", &IpiMap::nx)
      .def_readonly("ny", &IpiMap::ny)
      .def_readonly("cap_db", &IpiMap::cap_db)
      .def_property_readonly("raw_db", [](const IpiMap& mp) { return map_grid(mp, false); })
      .def_property_readonly("capped_db", [](const IpiMap& mp) { return map_grid(mp, true); });

  py::class_<ContourSet>(m, "ContourSet")
      .def_readonly("level_db", &ContourSet::level_db)
      .def_property_readonly("lines", &contour_lines);

  m.def(
      "ipi_map",
      [](const Scene& s, const CMatrix& C, double f, std::array<double, 4> region, double resolution,
         const IndexSet& target, const IndexSet& interferer, double cap_db) {
        return ipi_map(s, {f, C}, {region[0], region[1], region[2], region[3], 0.0}, resolution, target, interferer,
                       cap_db);
      },
      py::arg("scene"), py::arg("C"), py::arg("frequency"), py::arg("region"), py::arg("resolution"),
      py::arg("target_channels"), py::arg("interferer_channels"), py::arg("cap_db") = 40.0,
      "region is (x_min, x_max, y_min, y_max) in metres.");
  m.def("extract_contours", &extract_contours, py::arg("map"), py::arg("level_db"));
  m.def("enclosed_area", &enclosed_area, py::arg("contours"), py::arg("map"));

  m.def("paper_default_config", [] { return config_to_json(paper_default_config()); },
        "Default experiment config as JSON text.");
  m.def(
      "run_spectra",
      [](const std::string& config_json, int workers) {
        const auto c = parse_config(config_json);
        const auto r = compute_spectra(c, workers);
        return write_spectra(c, r);
      },
      py::arg("config_json"), py::arg("workers") = 1, "Runs the sweep and returns the written file names.");
  m.def(
      "run_map",
      [](const std::string& config_json, int workers) {
        const auto c = parse_config(config_json);
        return write_maps(c, compute_maps(c, workers));
      },
      py::arg("config_json"), py::arg("workers") = 1);
}
