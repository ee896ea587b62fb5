#pragma once

// Seeded synthetic stand-ins for the antenna pattern, population raster,
// flight tracks and AIS vessel tracks. Same parameters and seed produce
// byte-identical files.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "beamtraffic/geo.hpp"
#include "beamtraffic/ingest.hpp"
#include "beamtraffic/pattern.hpp"

namespace beamtraffic::synth {

enum class Kind { Pattern, Population, Aero, Maritime };

Kind parse_kind(const std::string& name);

/// Gaussian beams on a hexagonal layout: gain = peak - 3 (r / r3)^2 dB with r
/// the planar (lat, lon) distance to the boresight in degrees, floored at
/// peak - floor_db. The -3 dB contour is therefore a circle of radius r3.
struct PatternParams {
    int beams = 7;
    double center_lat = 50.0;
    double center_lon = 10.0;
    double spacing_deg = 2.0;
    double radius_3db_deg = 1.2;
    double pitch_deg = 0.1;
    double peak_gain_db = 52.0;
    double floor_db = 40.0;
    double margin_deg = 2.4;  // grid extends this far beyond the outermost boresights
};

struct PopulationParams {
    BoundingBox bbox{45.0, 55.0, 4.0, 16.0};
    double pitch_deg = 0.25;
    double background = 400.0;  // mean people per cell outside cities
    int cities = 12;
    double city_peak = 60'000.0;
    double city_sigma_deg = 0.3;
};

struct TrackParams {
    int count = 500;                         // vessels or flights
    BoundingBox bbox{45.0, 55.0, 4.0, 16.0};
    std::string date = "2020-06-01";
    int max_records_per_hour = 4;
    double defect_fraction = 0.0;            // rows emitted with missing or out-of-box coordinates
};

// Boresight positions, spiralling outward ring by ring.
std::vector<GeoPoint> beam_centers(const PatternParams& p);

double synthetic_gain_db(const PatternParams& p, const GeoPoint& boresight, const GeoPoint& at);

// Diurnal activity in (0, 1]: two daytime peaks for flights, a single
// morning peak for vessels tapering toward midnight.
double aero_intensity(int hour);
double maritime_intensity(int hour);

BeamPattern make_pattern(const PatternParams& p, std::uint64_t seed);

void write_pattern_file(const std::filesystem::path& out, const PatternParams& p, std::uint64_t seed);
void write_population_file(const std::filesystem::path& out, const PopulationParams& p, std::uint64_t seed);
void write_aero_file(const std::filesystem::path& out, const TrackParams& p, std::uint64_t seed);
void write_maritime_file(const std::filesystem::path& out, const TrackParams& p, std::uint64_t seed);

}  // namespace beamtraffic::synth
