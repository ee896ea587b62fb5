#include "beamtraffic/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "beamtraffic/csv.hpp"
#include "beamtraffic/error.hpp"
#include "beamtraffic/rng.hpp"

namespace beamtraffic::synth {

namespace {

// Value as it reads back from its canonical text form.
double canonical(double v) { return std::stod(csv::fmt(v)); }

const BoundingBox kCoverage{25.0, 80.0, -40.0, 50.0};

void check_box(const BoundingBox& b, const char* what) {
    if (!(b.lat_min < b.lat_max && b.lon_min < b.lon_max) || b.lat_min < kCoverage.lat_min ||
        b.lat_max > kCoverage.lat_max || b.lon_min < kCoverage.lon_min || b.lon_max > kCoverage.lon_max) {
        throw InvalidParams(std::string(what) + ": bounding box must lie within lat [25, 80] x lon [-40, 50]");
    }
}

void check_params(const PatternParams& p) {
    if (p.beams < 1) {
        throw InvalidParams("pattern: beams must be >= 1");
    }
    if (!(p.spacing_deg > 0 && p.radius_3db_deg > 0 && p.pitch_deg > 0 && p.floor_db > 3.0 && p.margin_deg >= 0)) {
        throw InvalidParams("pattern: spacing, radius, pitch and margin must be positive and floor > 3 dB");
    }
}

void check_params(const TrackParams& p) {
    if (p.count < 0 || p.max_records_per_hour < 1 || !(p.defect_fraction >= 0.0 && p.defect_fraction <= 1.0)) {
        throw InvalidParams("tracks: count >= 0, max_records_per_hour >= 1, defect_fraction in [0, 1]");
    }
    check_box(p.bbox, "tracks");
    (void)parse_timestamp(p.date + "T00:00:00Z", "date");
}

std::string timestamp(const std::string& date, int hour, double minute_of_hour) {
    const int total = static_cast<int>(minute_of_hour * 60.0);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", date.c_str(), hour, total / 60, total % 60);
    return buf;
}

struct Row {
    std::string id;
    std::string time;
    std::string lat;
    std::string lon;
};

void write_rows(const std::filesystem::path& out, const char* id_column, std::vector<Row>& rows, Rng& rng) {
    rng.shuffle(rows);
    auto f = csv::open_output(out);
    f << id_column << ",timestamp_iso8601_utc,lat_deg,lon_deg\n";
    for (const auto& r : rows) {
        f << r.id << ',' << r.time << ',' << r.lat << ',' << r.lon << '\n';
    }
}

// Reflects a coordinate back into [lo, hi].
double reflect(double v, double lo, double hi) {
    while (v < lo || v > hi) {
        v = v < lo ? 2 * lo - v : 2 * hi - v;
    }
    return v;
}

Row make_row(const std::string& id, const std::string& time, double lat, double lon, double defect_fraction,
             Rng& rng) {
    if (defect_fraction > 0.0 && rng.bernoulli(defect_fraction)) {
        // Missing fix or a null-island position outside the coverage.
        return rng.bernoulli(0.5) ? Row{id, time, "", ""} : Row{id, time, "0", "0"};
    }
    return {id, time, csv::fmt(lat), csv::fmt(lon)};
}

}  // namespace

Kind parse_kind(const std::string& name) {
    if (name == "pattern") return Kind::Pattern;
    if (name == "population") return Kind::Population;
    if (name == "aero") return Kind::Aero;
    if (name == "maritime") return Kind::Maritime;
    throw InvalidParams("unknown synthetic data kind '" + name + "'");
}

std::vector<GeoPoint> beam_centers(const PatternParams& p) {
    check_params(p);
    // Axial hex coordinates, ring by ring.
    static constexpr int dirs[6][2] = {{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}};
    std::vector<std::pair<int, int>> cells{{0, 0}};
    for (int ring = 1; static_cast<int>(cells.size()) < p.beams; ++ring) {
        int q = -ring, r = ring;  // start at ring * direction 4
        for (const auto& d : dirs) {
            for (int step = 0; step < ring; ++step) {
                cells.emplace_back(q, r);
                q += d[0];
                r += d[1];
            }
        }
    }
    cells.resize(static_cast<std::size_t>(p.beams));
    std::vector<GeoPoint> out;
    for (const auto& [q, r] : cells) {
        const double lon = p.center_lon + p.spacing_deg * (q + 0.5 * r);
        const double lat = p.center_lat + p.spacing_deg * (std::numbers::sqrt3 / 2.0) * r;
        out.push_back(GeoPoint::make(canonical(lat), canonical(lon)));
    }
    return out;
}

double synthetic_gain_db(const PatternParams& p, const GeoPoint& boresight, const GeoPoint& at) {
    const double dlat = at.lat - boresight.lat;
    const double dlon = at.lon - boresight.lon;
    const double rel = (dlat * dlat + dlon * dlon) / (p.radius_3db_deg * p.radius_3db_deg);
    return p.peak_gain_db - std::min(3.0 * rel, p.floor_db);
}

double aero_intensity(int hour) {
    auto bump = [](double x) { return std::exp(-x * x / (2.0 * 1.5 * 1.5)); };
    const double h = hour;
    return 0.15 + 0.85 * std::max(bump(h - 7.0), 0.9 * bump(h - 17.0));
}

double maritime_intensity(int hour) {
    const double h = hour;
    if (h <= 4.0) return 0.25 + 0.05 * h;
    if (h <= 8.0) return 0.45 + (h - 4.0) * (0.55 / 4.0);
    return 1.0 - (h - 8.0) * (0.7 / 15.0);
}

BeamPattern make_pattern(const PatternParams& p, std::uint64_t seed) {
    const auto centers = beam_centers(p);
    double lat_lo = 90, lat_hi = -90, lon_lo = 180, lon_hi = -180;
    for (const auto& c : centers) {
        lat_lo = std::min(lat_lo, c.lat);
        lat_hi = std::max(lat_hi, c.lat);
        lon_lo = std::min(lon_lo, c.lon);
        lon_hi = std::max(lon_hi, c.lon);
    }
    const BoundingBox grid_box{lat_lo - p.margin_deg, lat_hi + p.margin_deg, lon_lo - p.margin_deg,
                               lon_hi + p.margin_deg};
    check_box(grid_box, "pattern grid");

    // Grid anchored on the first boresight, which is therefore a sample.
    const auto& anchor = centers.front();
    const int i_lo = static_cast<int>(std::ceil((grid_box.lat_min - anchor.lat) / p.pitch_deg - 1e-9));
    const int i_hi = static_cast<int>(std::floor((grid_box.lat_max - anchor.lat) / p.pitch_deg + 1e-9));
    const int j_lo = static_cast<int>(std::ceil((grid_box.lon_min - anchor.lon) / p.pitch_deg - 1e-9));
    const int j_hi = static_cast<int>(std::floor((grid_box.lon_max - anchor.lon) / p.pitch_deg + 1e-9));

    std::vector<GeoPoint> grid;
    for (int i = i_lo; i <= i_hi; ++i) {
        for (int j = j_lo; j <= j_hi; ++j) {
            grid.push_back(GeoPoint::make(canonical(anchor.lat + i * p.pitch_deg),
                                          canonical(anchor.lon + j * p.pitch_deg)));
        }
    }

    Rng rng(seed);
    std::vector<std::vector<SamplePoint>> beams(centers.size());
    for (std::size_t b = 0; b < centers.size(); ++b) {
        beams[b].reserve(grid.size());
        for (const auto& g : grid) {
            const double phase = canonical(rng.uniform(0.0, 2.0 * std::numbers::pi));
            beams[b].push_back({g, canonical(synthetic_gain_db(p, centers[b], g)),
                                phase >= 2.0 * std::numbers::pi ? 0.0 : phase});
        }
    }
    return BeamPattern(std::move(beams));
}

void write_pattern_file(const std::filesystem::path& out, const PatternParams& p, std::uint64_t seed) {
    write_pattern(out, make_pattern(p, seed));
}

void write_population_file(const std::filesystem::path& out, const PopulationParams& p, std::uint64_t seed) {
    check_box(p.bbox, "population");
    if (!(p.pitch_deg > 0 && p.background >= 0 && p.cities >= 0 && p.city_peak >= 0 && p.city_sigma_deg > 0)) {
        throw InvalidParams("population: pitch and sigma must be positive, counts non-negative");
    }
    Rng rng(seed);
    std::vector<GeoPoint> cities;
    for (int c = 0; c < p.cities; ++c) {
        cities.push_back({rng.uniform(p.bbox.lat_min, p.bbox.lat_max), rng.uniform(p.bbox.lon_min, p.bbox.lon_max)});
    }
    auto f = csv::open_output(out);
    f << "lat_deg,lon_deg,population\n";
    const int rows = static_cast<int>(std::floor((p.bbox.lat_max - p.bbox.lat_min) / p.pitch_deg));
    const int cols = static_cast<int>(std::floor((p.bbox.lon_max - p.bbox.lon_min) / p.pitch_deg));
    for (int i = 0; i < rows; ++i) {
        const double lat = p.bbox.lat_min + (i + 0.5) * p.pitch_deg;
        for (int j = 0; j < cols; ++j) {
            const double lon = p.bbox.lon_min + (j + 0.5) * p.pitch_deg;
            double people = p.background * (0.5 + rng.uniform());
            for (const auto& c : cities) {
                const double d2 = (lat - c.lat) * (lat - c.lat) + (lon - c.lon) * (lon - c.lon);
                people += p.city_peak * std::exp(-d2 / (2.0 * p.city_sigma_deg * p.city_sigma_deg));
            }
            f << csv::fmt(lat) << ',' << csv::fmt(lon) << ',' << csv::fmt(std::floor(people)) << '\n';
        }
    }
}

void write_aero_file(const std::filesystem::path& out, const TrackParams& p, std::uint64_t seed) {
    check_params(p);
    Rng rng(seed);
    std::vector<double> cdf;
    double total = 0.0;
    for (int h = 0; h < 24; ++h) {
        total += aero_intensity(h);
        cdf.push_back(total);
    }
    std::vector<Row> rows;
    for (int k = 0; k < p.count; ++k) {
        char id[16];
        std::snprintf(id, sizeof id, "FL%05d", k);
        const double u = rng.uniform() * total;
        const int dep_hour = static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        double t = dep_hour * 60.0 + rng.uniform(0.0, 60.0);  // minutes of day
        const double end = std::min(t + rng.uniform(60.0, 240.0), 24.0 * 60.0 - 1.0);
        double lat = rng.uniform(p.bbox.lat_min, p.bbox.lat_max);
        double lon = rng.uniform(p.bbox.lon_min, p.bbox.lon_max);
        const double heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double speed = 0.05;  // deg per minute
        while (t < end) {
            const int hour = static_cast<int>(t / 60.0);
            rows.push_back(make_row(id, timestamp(p.date, hour, t - hour * 60.0), lat, lon, p.defect_fraction, rng));
            const double step = rng.uniform(60.0 / (p.max_records_per_hour + 1), 60.0 / p.max_records_per_hour);
            t += step;
            lat = reflect(lat + speed * step * std::cos(heading), p.bbox.lat_min, p.bbox.lat_max);
            lon = reflect(lon + speed * step * std::sin(heading), p.bbox.lon_min, p.bbox.lon_max);
        }
    }
    write_rows(out, "flight_id", rows, rng);
}

void write_maritime_file(const std::filesystem::path& out, const TrackParams& p, std::uint64_t seed) {
    check_params(p);
    Rng rng(seed);
    std::vector<Row> rows;
    for (int k = 0; k < p.count; ++k) {
        char id[16];
        std::snprintf(id, sizeof id, "SH%05d", k);
        double lat = rng.uniform(p.bbox.lat_min, p.bbox.lat_max);
        double lon = rng.uniform(p.bbox.lon_min, p.bbox.lon_max);
        const double dlat = rng.uniform(-0.05, 0.05);  // deg per hour
        const double dlon = rng.uniform(-0.05, 0.05);
        for (int h = 0; h < 24; ++h) {
            if (rng.bernoulli(maritime_intensity(h))) {
                const int n = rng.integer(1, p.max_records_per_hour);
                for (int r = 0; r < n; ++r) {
                    const double minute = rng.uniform(0.0, 60.0);
                    const double la = reflect(lat + dlat * minute / 60.0, p.bbox.lat_min, p.bbox.lat_max);
                    const double lo = reflect(lon + dlon * minute / 60.0, p.bbox.lon_min, p.bbox.lon_max);
                    rows.push_back(make_row(id, timestamp(p.date, h, minute), la, lo, p.defect_fraction, rng));
                }
            }
            lat = reflect(lat + dlat, p.bbox.lat_min, p.bbox.lat_max);
            lon = reflect(lon + dlon, p.bbox.lon_min, p.bbox.lon_max);
        }
    }
    write_rows(out, "ship_id", rows, rng);
}

}  // namespace beamtraffic::synth
