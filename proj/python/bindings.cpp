#include <pybind11/complex.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "beamtraffic/analysis.hpp"
#include "beamtraffic/cli.hpp"
#include "beamtraffic/config.hpp"
#include "beamtraffic/error.hpp"
#include "beamtraffic/geo.hpp"
#include "beamtraffic/geometry.hpp"
#include "beamtraffic/ingest.hpp"
#include "beamtraffic/linkbudget.hpp"
#include "beamtraffic/pattern.hpp"
#include "beamtraffic/synth.hpp"
#include "beamtraffic/traffic.hpp"

namespace py = pybind11;
using namespace beamtraffic;

namespace {

std::vector<Point2> to_points(const std::vector<std::pair<double, double>>& xy) {
    std::vector<Point2> out;
    out.reserve(xy.size());
    for (const auto& [x, y] : xy) {
        out.push_back({x, y});
    }
    return out;
}

std::vector<std::pair<double, double>> from_polygon(const Polygon& p) {
    std::vector<std::pair<double, double>> out;
    for (const auto& v : p.vertices) {
        out.emplace_back(v.x, v.y);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multibeam GEO satellite traffic and channel simulator";
    m.attr("__version__") = BEAMTRAFFIC_VERSION;

    auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<SchemaError>(m, "SchemaError", base.ptr());
    py::register_exception<CollinearInput>(m, "CollinearInput", base.ptr());
    py::register_exception<DegenerateFootprint>(m, "DegenerateFootprint", base.ptr());
    py::register_exception<EmptyPattern>(m, "EmptyPattern", base.ptr());
    py::register_exception<BadThresholds>(m, "BadThresholds", base.ptr());
    py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);

    py::class_<GeoPoint>(m, "GeoPoint")
        .def(py::init(&GeoPoint::make), py::arg("lat"), py::arg("lon"))
        .def_readonly("lat", &GeoPoint::lat)
        .def_readonly("lon", &GeoPoint::lon)
        .def("__repr__", [](const GeoPoint& p) {
            return "GeoPoint(" + std::to_string(p.lat) + ", " + std::to_string(p.lon) + ")";
        });

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("sat_lat_deg", &ScenarioConfig::sat_lat_deg)
        .def_readwrite("sat_lon_deg", &ScenarioConfig::sat_lon_deg)
        .def_readwrite("altitude_m", &ScenarioConfig::altitude_m)
        .def_readwrite("earth_radius_m", &ScenarioConfig::earth_radius_m)
        .def_readwrite("carrier_freq_hz", &ScenarioConfig::carrier_freq_hz)
        .def_readwrite("rx_gain_db", &ScenarioConfig::rx_gain_db)
        .def_readwrite("total_power_w", &ScenarioConfig::total_power_w)
        .def_readwrite("bandwidth_hz", &ScenarioConfig::bandwidth_hz)
        .def_property_readonly("wavelength_m", &ScenarioConfig::wavelength_m);

    m.def("great_circle_distance", &great_circle_distance, py::arg("a"), py::arg("b"),
          py::arg("radius_m") = kMeanEarthRadius);
    m.def("slant_range", &slant_range, py::arg("user"), py::arg("config") = ScenarioConfig{});
    m.def("path_loss_db", &path_loss_db, py::arg("distance_m"), py::arg("wavelength_m"));

    m.def(
        "delaunay",
        [](const std::vector<std::pair<double, double>>& xy) {
            const auto pts = to_points(xy);
            return delaunay(pts).triangles;
        },
        py::arg("points"), "Delaunay triangles as index triples into the de-duplicated input.");
    m.def(
        "convex_hull", [](const std::vector<std::pair<double, double>>& xy) {
            const auto pts = to_points(xy);
            return from_polygon(convex_hull(pts));
        },
        py::arg("points"));
    m.def(
        "point_in_polygon",
        [](std::pair<double, double> p, const std::vector<std::pair<double, double>>& poly) {
            return point_in_polygon(Point2{p.first, p.second}, Polygon{to_points(poly)});
        },
        py::arg("point"), py::arg("polygon"));

    py::class_<BeamPattern>(m, "BeamPattern")
        .def_property_readonly("beam_count", &BeamPattern::beam_count)
        .def_property_readonly("samples_per_beam", &BeamPattern::samples_per_beam)
        .def("coefficient", &BeamPattern::coefficient, py::arg("sample"), py::arg("beam_id"));
    m.def("parse_pattern", py::overload_cast<const std::filesystem::path&>(&parse_pattern), py::arg("path"));

    py::class_<BeamFootprint>(m, "BeamFootprint")
        .def_readonly("beam_id", &BeamFootprint::beam_id)
        .def_readonly("peak_gain_db", &BeamFootprint::peak_gain_db)
        .def_readonly("qualifying_samples", &BeamFootprint::qualifying_samples)
        .def_property_readonly("latitudes", &BeamFootprint::latitudes)
        .def_property_readonly("longitudes", &BeamFootprint::longitudes)
        .def("contains", &BeamFootprint::contains, py::arg("point"));
    m.def("all_footprints", &all_footprints, py::arg("pattern"), py::arg("threads") = 1);

    py::enum_<TerminalType>(m, "TerminalType")
        .value("FSS", TerminalType::Fss)
        .value("AERO", TerminalType::Aero)
        .value("MARITIME", TerminalType::Maritime);

    py::class_<Terminal>(m, "Terminal")
        .def_readonly("id", &Terminal::id)
        .def_readonly("location", &Terminal::location)
        .def_readonly("type", &Terminal::type)
        .def_readonly("demand_mbps", &Terminal::demand_mbps);

    py::class_<IngestConfig>(m, "IngestConfig")
        .def(py::init<>())
        .def_readwrite("downscale", &IngestConfig::downscale)
        .def_readwrite("fss_mbps", &IngestConfig::fss_mbps)
        .def_readwrite("aero_mbps", &IngestConfig::aero_mbps)
        .def_readwrite("maritime_mbps", &IngestConfig::maritime_mbps);
    m.def("fss_terminal_count", &fss_terminal_count, py::arg("population"), py::arg("config") = IngestConfig{});

    py::class_<DemandSnapshot>(m, "DemandSnapshot")
        .def_readonly("hour", &DemandSnapshot::hour)
        .def_readonly("fss", &DemandSnapshot::fss)
        .def_readonly("aero", &DemandSnapshot::aero)
        .def_readonly("maritime", &DemandSnapshot::maritime);
    m.def(
        "load_snapshot",
        [](const std::filesystem::path& population, const std::filesystem::path& aero,
           const std::filesystem::path& maritime, int hour, const IngestConfig& cfg) {
            return load_snapshot({population, aero, maritime}, hour, cfg);
        },
        py::arg("population"), py::arg("aero"), py::arg("maritime"), py::arg("hour"),
        py::arg("config") = IngestConfig{});

    py::class_<TrafficRecord>(m, "TrafficRecord")
        .def_readonly("user", &TrafficRecord::user)
        .def_readonly("beam", &TrafficRecord::beam)
        .def_readonly("location", &TrafficRecord::location)
        .def_readonly("type", &TrafficRecord::type)
        .def_readonly("demand_mbps", &TrafficRecord::demand_mbps)
        .def_readonly("terminal_id", &TrafficRecord::terminal_id);
    py::class_<TrafficMatrix>(m, "TrafficMatrix")
        .def_readonly("rows", &TrafficMatrix::rows)
        .def_readonly("beam_count", &TrafficMatrix::beam_count)
        .def_readonly("excluded", &TrafficMatrix::excluded)
        .def_readonly("input_count", &TrafficMatrix::input_count)
        .def("__len__", &TrafficMatrix::size);
    m.def(
        "build_traffic_matrix",
        [](const std::vector<BeamFootprint>& footprints, const BeamPattern& pattern, const DemandSnapshot& s,
           unsigned threads) {
            return build_traffic_matrix(footprints, pattern, s.fss, s.aero, s.maritime, threads);
        },
        py::arg("footprints"), py::arg("pattern"), py::arg("snapshot"), py::arg("threads") = 1);

    py::class_<ChannelMatrix>(m, "ChannelMatrix")
        .def_property_readonly("users", &ChannelMatrix::users)
        .def_property_readonly("beams", &ChannelMatrix::beams)
        .def("coefficient", &ChannelMatrix::coefficient, py::arg("user"), py::arg("beam"))
        .def("serving_beam", &ChannelMatrix::serving_beam, py::arg("user"))
        .def("slant_range_m", [](const ChannelMatrix& h, std::size_t n) { return h.link(n).slant_range_m; })
        .def("path_loss_db", [](const ChannelMatrix& h, std::size_t n) { return h.link(n).path_loss_db; });
    m.def(
        "build_channel_matrix",
        [](const TrafficMatrix& t, const BeamPattern& p, const ScenarioConfig& cfg, bool phase, unsigned threads) {
            return build_channel_matrix(t, p, cfg, {phase, threads});
        },
        py::arg("traffic"), py::arg("pattern"), py::arg("config") = ScenarioConfig{},
        py::arg("apply_pattern_phase") = false, py::arg("threads") = 1);
    m.def(
        "interference",
        [](const ChannelMatrix& h, std::size_t user, const std::vector<int>& active,
           const std::vector<double>& power) { return interference(h, user, active, power); },
        py::arg("channel"), py::arg("user"), py::arg("active"), py::arg("power_w"));
    m.def(
        "equal_split_power",
        [](double total, const std::vector<int>& active, std::size_t beams) {
            return equal_split_power(total, active, beams);
        },
        py::arg("total_w"), py::arg("active"), py::arg("beams"));

    m.def("normalize_series", [](const std::vector<double>& s) { return normalize_series(s); }, py::arg("series"));

    m.def(
        "synth_pattern",
        [](const std::filesystem::path& out, int beams, std::uint64_t seed) {
            synth::PatternParams p;
            p.beams = beams;
            synth::write_pattern_file(out, p, seed);
        },
        py::arg("out"), py::arg("beams") = 7, py::arg("seed") = 1);
    m.def(
        "synth_population",
        [](const std::filesystem::path& out, std::uint64_t seed) {
            synth::write_population_file(out, {}, seed);
        },
        py::arg("out"), py::arg("seed") = 1);
    m.def(
        "synth_tracks",
        [](const std::filesystem::path& out, const std::string& kind, int count, std::uint64_t seed) {
            synth::TrackParams p;
            p.count = count;
            if (kind == "aero") {
                synth::write_aero_file(out, p, seed);
            } else if (kind == "maritime") {
                synth::write_maritime_file(out, p, seed);
            } else {
                throw InvalidParams("kind must be 'aero' or 'maritime'");
            }
        },
        py::arg("out"), py::arg("kind"), py::arg("count") = 500, py::arg("seed") = 1);

    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "beamtraffic");
            py::gil_scoped_release release;
            return run_cli(args);
        },
        py::arg("args"), "Runs the command-line front end in-process and returns its exit code.");
}
