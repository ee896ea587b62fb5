#pragma once

// Demand dataset preprocessing: population raster cells become FSS
// terminals, flight and vessel tracks are reduced to one terminal per id per
// hour at the id's first position within that hour.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "beamtraffic/geo.hpp"

namespace beamtraffic {

enum class TerminalType : int { Fss = 1, Aero = 2, Maritime = 3 };

std::string_view to_string(TerminalType t);

struct Terminal {
    std::string id;
    GeoPoint location;
    TerminalType type = TerminalType::Fss;
    double demand_mbps = 0.0;
};

struct BoundingBox {
    double lat_min = 25.0;
    double lat_max = 80.0;
    double lon_min = -40.0;
    double lon_max = 50.0;

    bool contains(const GeoPoint& p) const {
        return p.lat >= lat_min && p.lat <= lat_max && p.lon >= lon_min && p.lon <= lon_max;
    }
};

// Cells above the density threshold keep only a fraction of their terminals.
struct UrbanPolicy {
    double density_threshold = 50'000.0;  // people per cell
    double suppression_factor = 0.5;       // in [0, 1]
};

/// Preprocessing knobs. Per-terminal rates are placeholders with no
/// empirical basis; override them per study.
struct IngestConfig {
    long long downscale = 1000;
    UrbanPolicy urban;
    double fss_mbps = 2.0;
    double aero_mbps = 10.0;
    double maritime_mbps = 8.0;
    BoundingBox bbox;

    // Throws InvalidArgument on downscale < 1, factor outside [0, 1],
    // negative rates or an inverted box.
    void validate() const;
};

struct IngestStats {
    std::size_t records = 0;
    std::size_t dropped_out_of_box = 0;
    std::size_t dropped_missing = 0;  // NaN or empty coordinates
};

struct IngestResult {
    std::vector<Terminal> terminals;
    IngestStats stats;
};

/// Number of FSS terminals a cell of `population` people yields:
/// floor(p / downscale), then floor(count * factor) for urban cells.
long long fss_terminal_count(double population, const IngestConfig& cfg);

IngestResult load_population(std::istream& in, const IngestConfig& cfg,
                             const std::string& source = "<stream>");
IngestResult load_population(const std::filesystem::path& file, const IngestConfig& cfg);

/// Seconds since the Unix epoch for an ISO-8601 UTC timestamp such as
/// 2020-06-01T08:15:30Z (fractional seconds and a +00:00 suffix accepted).
/// Throws TimestampError.
double parse_timestamp(std::string_view text, const std::string& source = "<timestamp>",
                       std::size_t line = 0);

// Hour of day in [0, 23] of an epoch timestamp.
int hour_of_day(double epoch_seconds);

/// Terminals for every flight seen in [hour, hour+1) of the UTC day (all
/// dates in the file fold onto one day), each placed at the flight's
/// earliest record in that hour; ties go to the earlier file row.
IngestResult load_aero(std::istream& in, int hour, const IngestConfig& cfg,
                       const std::string& source = "<stream>");
IngestResult load_aero(const std::filesystem::path& file, int hour, const IngestConfig& cfg);

IngestResult load_maritime(std::istream& in, int hour, const IngestConfig& cfg,
                           const std::string& source = "<stream>");
IngestResult load_maritime(const std::filesystem::path& file, int hour, const IngestConfig& cfg);

struct DemandSnapshot {
    int hour = 0;
    std::vector<Terminal> fss;
    std::vector<Terminal> aero;
    std::vector<Terminal> maritime;

    std::size_t size() const { return fss.size() + aero.size() + maritime.size(); }
};

struct DemandInputs {
    std::filesystem::path population;
    std::filesystem::path aero;
    std::filesystem::path maritime;
};

// Population is hour-independent; it is loaded once and reused.
DemandSnapshot load_snapshot(const DemandInputs& inputs, int hour, const IngestConfig& cfg);
std::vector<DemandSnapshot> load_snapshots(const DemandInputs& inputs, const std::vector<int>& hours,
                                           const IngestConfig& cfg);

}  // namespace beamtraffic
