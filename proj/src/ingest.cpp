#include "beamtraffic/ingest.hpp"

#include <chrono>
#include <cmath>
#include <istream>
#include <unordered_map>

#include "beamtraffic/csv.hpp"
#include "beamtraffic/error.hpp"

namespace beamtraffic {

std::string_view to_string(TerminalType t) {
    switch (t) {
        case TerminalType::Fss: return "fss";
        case TerminalType::Aero: return "aero";
        case TerminalType::Maritime: return "maritime";
    }
    return "unknown";
}

void IngestConfig::validate() const {
    if (downscale < 1) {
        throw InvalidArgument("downscale must be >= 1");
    }
    if (!(urban.suppression_factor >= 0.0 && urban.suppression_factor <= 1.0)) {
        throw InvalidArgument("urban suppression factor must be in [0, 1]");
    }
    if (!(urban.density_threshold >= 0.0)) {
        throw InvalidArgument("urban density threshold must be non-negative");
    }
    if (!(fss_mbps >= 0.0 && aero_mbps >= 0.0 && maritime_mbps >= 0.0)) {
        throw InvalidArgument("per-terminal demand must be non-negative");
    }
    if (!(bbox.lat_min <= bbox.lat_max && bbox.lon_min <= bbox.lon_max)) {
        throw InvalidArgument("bounding box is inverted");
    }
}

long long fss_terminal_count(double population, const IngestConfig& cfg) {
    auto count = static_cast<long long>(std::floor(population / static_cast<double>(cfg.downscale)));
    if (population > cfg.urban.density_threshold) {
        count = static_cast<long long>(std::floor(static_cast<double>(count) * cfg.urban.suppression_factor));
    }
    return count;
}

namespace {

// Returns false (and counts the drop) for missing or out-of-box coordinates.
bool accept_location(double lat, double lon, const IngestConfig& cfg, IngestStats& stats, GeoPoint& out) {
    if (!std::isfinite(lat) || !std::isfinite(lon)) {
        ++stats.dropped_missing;
        return false;
    }
    if (lat < -90.0 || lat > 90.0) {
        ++stats.dropped_out_of_box;
        return false;
    }
    out = GeoPoint::make(lat, lon);
    if (!cfg.bbox.contains(out)) {
        ++stats.dropped_out_of_box;
        return false;
    }
    return true;
}

int parse_digits(std::string_view s, std::size_t pos, std::size_t len, bool& ok) {
    if (pos + len > s.size()) {
        ok = false;
        return 0;
    }
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (s[i] < '0' || s[i] > '9') {
            ok = false;
            return 0;
        }
        v = v * 10 + (s[i] - '0');
    }
    return v;
}

struct TrackRecord {
    std::string id;
    double time;
    GeoPoint location;
};

struct TrackFile {
    std::vector<TrackRecord> records;  // file order, valid rows only
    IngestStats stats;
};

TrackFile read_tracks(std::istream& in, std::string_view id_column, const IngestConfig& cfg,
                      const std::string& source) {
    csv::Reader reader(in, source);
    TrackFile out;
    if (reader.empty()) {
        return out;
    }
    const auto c_id = reader.column(id_column);
    const auto c_time = reader.column("timestamp_iso8601_utc");
    const auto c_lat = reader.column("lat_deg");
    const auto c_lon = reader.column("lon_deg");
    const auto width = reader.header().size();

    std::vector<std::string> f;
    while (reader.next(f)) {
        if (f.size() != width) {
            throw ParseError(source, reader.line(), "expected " + std::to_string(width) + " fields");
        }
        ++out.stats.records;
        const double t = parse_timestamp(f[c_time], source, reader.line());
        GeoPoint p;
        if (f[c_id].empty()) {
            ++out.stats.dropped_missing;
            continue;
        }
        if (!accept_location(reader.to_double(f[c_lat], "lat_deg"), reader.to_double(f[c_lon], "lon_deg"),
                             cfg, out.stats, p)) {
            continue;
        }
        out.records.push_back({f[c_id], t, p});
    }
    return out;
}

// One terminal per id: the minimum-timestamp record within the hour, earlier
// file rows winning ties. Output in order of first appearance in the file.
std::vector<Terminal> first_in_hour(const TrackFile& tracks, int hour, TerminalType type, double mbps) {
    std::unordered_map<std::string, std::size_t> slot;
    std::vector<const TrackRecord*> chosen;
    for (const auto& r : tracks.records) {
        if (hour_of_day(r.time) != hour) {
            continue;
        }
        auto [it, inserted] = slot.emplace(r.id, chosen.size());
        if (inserted) {
            chosen.push_back(&r);
        } else if (r.time < chosen[it->second]->time) {
            chosen[it->second] = &r;
        }
    }
    std::vector<Terminal> out;
    out.reserve(chosen.size());
    for (const auto* r : chosen) {
        out.push_back({r->id, r->location, type, mbps});
    }
    return out;
}

void check_hour(int hour) {
    if (hour < 0 || hour > 23) {
        throw InvalidArgument("hour must be in [0, 23], got " + std::to_string(hour));
    }
}

IngestResult load_tracks(std::istream& in, int hour, const IngestConfig& cfg, const std::string& source,
                         std::string_view id_column, TerminalType type, double mbps) {
    check_hour(hour);
    const auto tracks = read_tracks(in, id_column, cfg, source);
    return {first_in_hour(tracks, hour, type, mbps), tracks.stats};
}

}  // namespace

double parse_timestamp(std::string_view text, const std::string& source, std::size_t line) {
    auto fail = [&] { throw TimestampError(source, line, "unparseable timestamp '" + std::string(text) + "'"); };
    bool ok = true;
    if (text.size() < 19 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
        text[13] != ':' || text[16] != ':') {
        fail();
    }
    const int y = parse_digits(text, 0, 4, ok);
    const int mo = parse_digits(text, 5, 2, ok);
    const int d = parse_digits(text, 8, 2, ok);
    const int hh = parse_digits(text, 11, 2, ok);
    const int mm = parse_digits(text, 14, 2, ok);
    const int ss = parse_digits(text, 17, 2, ok);
    if (!ok || hh > 23 || mm > 59 || ss > 60) {
        fail();
    }
    std::size_t pos = 19;
    double frac = 0.0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        double scale = 0.1;
        const std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            frac += scale * (text[pos] - '0');
            scale *= 0.1;
            ++pos;
        }
        if (pos == start) {
            fail();
        }
    }
    const auto zone = text.substr(pos);
    if (!(zone.empty() || zone == "Z" || zone == "+00:00" || zone == "+0000")) {
        fail();
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        fail();
    }
    const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
    return static_cast<double>(days) * 86400.0 + hh * 3600.0 + mm * 60.0 + ss + frac;
}

int hour_of_day(double epoch_seconds) {
    double sod = std::fmod(epoch_seconds, 86400.0);
    if (sod < 0.0) {
        sod += 86400.0;
    }
    return static_cast<int>(sod / 3600.0);
}

IngestResult load_population(std::istream& in, const IngestConfig& cfg, const std::string& source) {
    cfg.validate();
    csv::Reader reader(in, source);
    IngestResult out;
    if (reader.empty()) {
        return out;
    }
    const auto c_lat = reader.column("lat_deg");
    const auto c_lon = reader.column("lon_deg");
    const auto c_pop = reader.column("population");
    const auto width = reader.header().size();

    std::vector<std::string> f;
    while (reader.next(f)) {
        if (f.size() != width) {
            throw ParseError(source, reader.line(), "expected " + std::to_string(width) + " fields");
        }
        ++out.stats.records;
        const double pop = reader.to_double(f[c_pop], "population");
        if (std::isnan(pop)) {
            ++out.stats.dropped_missing;
            continue;
        }
        if (pop < 0.0) {
            throw NegativePopulation(source, reader.line(), "negative population " + f[c_pop]);
        }
        GeoPoint p;
        if (!accept_location(reader.to_double(f[c_lat], "lat_deg"), reader.to_double(f[c_lon], "lon_deg"), cfg,
                             out.stats, p)) {
            continue;
        }
        const auto count = fss_terminal_count(pop, cfg);
        const auto cell = "fss:" + csv::fmt(p.lat) + ":" + csv::fmt(p.lon) + ":";
        for (long long k = 0; k < count; ++k) {
            out.terminals.push_back({cell + std::to_string(k), p, TerminalType::Fss, cfg.fss_mbps});
        }
    }
    return out;
}

IngestResult load_population(const std::filesystem::path& file, const IngestConfig& cfg) {
    auto in = csv::open_input(file);
    return load_population(in, cfg, file.string());
}

IngestResult load_aero(std::istream& in, int hour, const IngestConfig& cfg, const std::string& source) {
    return load_tracks(in, hour, cfg, source, "flight_id", TerminalType::Aero, cfg.aero_mbps);
}

IngestResult load_aero(const std::filesystem::path& file, int hour, const IngestConfig& cfg) {
    auto in = csv::open_input(file);
    return load_aero(in, hour, cfg, file.string());
}

IngestResult load_maritime(std::istream& in, int hour, const IngestConfig& cfg, const std::string& source) {
    return load_tracks(in, hour, cfg, source, "ship_id", TerminalType::Maritime, cfg.maritime_mbps);
}

IngestResult load_maritime(const std::filesystem::path& file, int hour, const IngestConfig& cfg) {
    auto in = csv::open_input(file);
    return load_maritime(in, hour, cfg, file.string());
}

DemandSnapshot load_snapshot(const DemandInputs& inputs, int hour, const IngestConfig& cfg) {
    return load_snapshots(inputs, {hour}, cfg).front();
}

std::vector<DemandSnapshot> load_snapshots(const DemandInputs& inputs, const std::vector<int>& hours,
                                           const IngestConfig& cfg) {
    cfg.validate();
    for (int h : hours) {
        check_hour(h);
    }
    const auto population = load_population(inputs.population, cfg);
    auto aero_in = csv::open_input(inputs.aero);
    const auto aero = read_tracks(aero_in, "flight_id", cfg, inputs.aero.string());
    auto sea_in = csv::open_input(inputs.maritime);
    const auto sea = read_tracks(sea_in, "ship_id", cfg, inputs.maritime.string());

    std::vector<DemandSnapshot> out;
    out.reserve(hours.size());
    for (int h : hours) {
        DemandSnapshot snap;
        snap.hour = h;
        snap.fss = population.terminals;
        snap.aero = first_in_hour(aero, h, TerminalType::Aero, cfg.aero_mbps);
        snap.maritime = first_in_hour(sea, h, TerminalType::Maritime, cfg.maritime_mbps);
        out.push_back(std::move(snap));
    }
    return out;
}

}  // namespace beamtraffic
