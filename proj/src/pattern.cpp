#include "beamtraffic/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "beamtraffic/csv.hpp"
#include "beamtraffic/error.hpp"
#include "beamtraffic/parallel.hpp"

namespace beamtraffic {

double normalize_phase(double rad) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(rad, two_pi);
    if (r < 0.0) {
        r += two_pi;
    }
    return r >= two_pi ? 0.0 : r;
}

BeamPattern::BeamPattern(std::vector<std::vector<SamplePoint>> beams) : beams_(std::move(beams)) {
    if (beams_.empty()) {
        return;
    }
    const auto& first = beams_.front();
    for (std::size_t b = 0; b < beams_.size(); ++b) {
        const auto& beam = beams_[b];
        if (beam.size() != first.size()) {
            throw SchemaError("beam " + std::to_string(b + 1) + " has " + std::to_string(beam.size()) +
                              " samples, expected " + std::to_string(first.size()));
        }
        for (std::size_t s = 0; s < beam.size(); ++s) {
            if (!(beam[s].location == first[s].location)) {
                throw SchemaError("beam " + std::to_string(b + 1) + " sample " + std::to_string(s + 1) +
                                  " location differs from beam 1");
            }
            if (!std::isfinite(beam[s].gain_db)) {
                throw SchemaError("beam " + std::to_string(b + 1) + " sample " + std::to_string(s + 1) +
                                  " has non-finite gain");
            }
        }
    }
    locations_.reserve(first.size());
    for (const auto& s : first) {
        locations_.push_back(s.location);
    }
}

std::span<const SamplePoint> BeamPattern::beam(int beam_id) const {
    if (beam_id < 1 || static_cast<std::size_t>(beam_id) > beams_.size()) {
        throw InvalidArgument("beam id " + std::to_string(beam_id) + " out of range");
    }
    return beams_[static_cast<std::size_t>(beam_id - 1)];
}

std::complex<double> BeamPattern::coefficient(std::size_t sample, int beam_id) const {
    const auto& s = beam(beam_id)[sample];
    return std::polar(std::pow(10.0, s.gain_db / 20.0), s.phase_rad);
}

bool operator==(const BeamPattern& a, const BeamPattern& b) {
    if (a.beams_.size() != b.beams_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.beams_.size(); ++i) {
        const auto& x = a.beams_[i];
        const auto& y = b.beams_[i];
        if (x.size() != y.size()) {
            return false;
        }
        for (std::size_t s = 0; s < x.size(); ++s) {
            if (!(x[s].location == y[s].location) || x[s].gain_db != y[s].gain_db ||
                x[s].phase_rad != y[s].phase_rad) {
                return false;
            }
        }
    }
    return true;
}

namespace {

std::array<double, 3> unit_vector(const GeoPoint& p) {
    const double lat = deg2rad(p.lat);
    const double lon = deg2rad(p.lon);
    return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

// Dot products and law-of-cosines cosines differ by a few ulps; anything
// within this margin of the best is re-ranked by exact distance.
constexpr double kDotMargin = 1e-12;

}  // namespace

SampleGrid::SampleGrid(const std::vector<GeoPoint>& locations) : locations_(locations) {
    unit_.reserve(locations_.size());
    for (const auto& p : locations_) {
        unit_.push_back(unit_vector(p));
    }
}

std::size_t SampleGrid::nearest(const GeoPoint& p) const {
    const auto hits = k_nearest(p, 1);
    if (hits.empty()) {
        throw EmptyPattern();
    }
    return hits.front().index;
}

std::vector<SampleGrid::Neighbour> SampleGrid::k_nearest(const GeoPoint& p, std::size_t k) const {
    k = std::min(k, unit_.size());
    if (k == 0) {
        return {};
    }
    const auto u = unit_vector(p);
    std::vector<double> dots(unit_.size());
    for (std::size_t i = 0; i < unit_.size(); ++i) {
        dots[i] = u[0] * unit_[i][0] + u[1] * unit_[i][1] + u[2] * unit_[i][2];
    }
    // k-th largest dot product.
    std::vector<double> top(k, -2.0);
    for (double d : dots) {
        if (d > top.back()) {
            auto pos = std::upper_bound(top.begin(), top.end(), d, std::greater<>());
            top.insert(pos, d);
            top.pop_back();
        }
    }
    const double cutoff = top.back() - kDotMargin;
    std::vector<Neighbour> cand;
    for (std::size_t i = 0; i < dots.size(); ++i) {
        if (dots[i] >= cutoff) {
            cand.push_back({i, great_circle_distance(p, locations_[i])});
        }
    }
    std::stable_sort(cand.begin(), cand.end(),
                     [](const Neighbour& a, const Neighbour& b) { return a.distance_m < b.distance_m; });
    cand.resize(k);
    return cand;
}

BeamPattern parse_pattern(std::istream& in, const std::string& source) {
    csv::Reader reader(in, source);
    if (reader.empty()) {
        return {};
    }
    const auto c_beam = reader.column("beam_id");
    const auto c_lat = reader.column("lat_deg");
    const auto c_lon = reader.column("lon_deg");
    const auto c_gain = reader.column("gain_db");
    const auto c_phase = reader.column("phase_rad");
    const auto width = reader.header().size();

    std::vector<std::vector<SamplePoint>> beams;
    std::vector<std::string> f;
    while (reader.next(f)) {
        if (f.size() != width) {
            throw ParseError(source, reader.line(),
                             "expected " + std::to_string(width) + " fields, got " + std::to_string(f.size()));
        }
        const auto id = reader.to_int(f[c_beam], "beam_id");
        if (id == static_cast<long long>(beams.size()) + 1) {
            beams.emplace_back();
        } else if (id != static_cast<long long>(beams.size()) || id < 1) {
            throw SchemaError(source + ":" + std::to_string(reader.line()) +
                              ": beam ids must be contiguous groups 1..eta in order (got " +
                              std::to_string(id) + ")");
        }
        const double lat = reader.to_double(f[c_lat], "lat_deg");
        const double lon = reader.to_double(f[c_lon], "lon_deg");
        const double gain = reader.to_double(f[c_gain], "gain_db");
        const double phase = reader.to_double(f[c_phase], "phase_rad");
        if (!std::isfinite(gain) || !std::isfinite(phase)) {
            throw ParseError(source, reader.line(), "gain and phase must be finite");
        }
        SamplePoint s;
        try {
            s.location = GeoPoint::make(lat, lon);
        } catch (const InvalidArgument& e) {
            throw ParseError(source, reader.line(), e.what());
        }
        s.gain_db = gain;
        s.phase_rad = normalize_phase(phase);
        beams.back().push_back(s);
    }
    return BeamPattern(std::move(beams));
}

BeamPattern parse_pattern(const std::filesystem::path& file) {
    auto in = csv::open_input(file);
    return parse_pattern(in, file.string());
}

void write_pattern(std::ostream& out, const BeamPattern& pattern) {
    out << "beam_id,lat_deg,lon_deg,gain_db,phase_rad\n";
    for (int b = 1; b <= static_cast<int>(pattern.beam_count()); ++b) {
        for (const auto& s : pattern.beam(b)) {
            auto phase = csv::fmt(s.phase_rad);
            // 9 digits can round a phase just below 2pi up to 2pi.
            if (std::stod(phase) >= 2.0 * std::numbers::pi) {
                phase = "0";
            }
            out << b << ',' << csv::fmt(s.location.lat) << ',' << csv::fmt(s.location.lon) << ','
                << csv::fmt(s.gain_db) << ',' << phase << '\n';
        }
    }
}

void write_pattern(const std::filesystem::path& file, const BeamPattern& pattern) {
    auto out = csv::open_output(file);
    write_pattern(out, pattern);
}

std::vector<double> BeamFootprint::latitudes() const {
    std::vector<double> v;
    for (const auto& p : border.vertices) {
        v.push_back(p.y);
    }
    return v;
}

std::vector<double> BeamFootprint::longitudes() const {
    std::vector<double> v;
    for (const auto& p : border.vertices) {
        v.push_back(p.x);
    }
    return v;
}

BeamFootprint beam_footprint(const BeamPattern& pattern, int beam_id) {
    const auto samples = pattern.beam(beam_id);
    if (samples.empty()) {
        throw DegenerateFootprint(beam_id, "beam has no samples");
    }
    BeamFootprint fp;
    fp.beam_id = beam_id;
    fp.peak_gain_db = std::max_element(samples.begin(), samples.end(), [](const auto& a, const auto& b) {
                          return a.gain_db < b.gain_db;
                      })->gain_db;

    const double threshold = fp.peak_gain_db - 3.0;
    std::vector<Point2> qualifying;
    for (const auto& s : samples) {
        if (s.gain_db >= threshold) {
            qualifying.push_back(to_planar(s.location));
        }
    }
    fp.qualifying_samples = qualifying.size();
    if (qualifying.size() < 3) {
        throw DegenerateFootprint(beam_id, std::to_string(qualifying.size()) +
                                               " samples within 3 dB of peak");
    }
    try {
        fp.border = triangulation_hull(delaunay(qualifying));
    } catch (const CollinearInput&) {
        throw DegenerateFootprint(beam_id, "samples within 3 dB of peak are collinear");
    }
    return fp;
}

std::vector<BeamFootprint> all_footprints(const BeamPattern& pattern, unsigned threads) {
    if (pattern.empty()) {
        throw EmptyPattern();
    }
    std::vector<BeamFootprint> out(pattern.beam_count());
    parallel_for(out.size(), threads,
                 [&](std::size_t i) { out[i] = beam_footprint(pattern, static_cast<int>(i + 1)); });
    return out;
}

}  // namespace beamtraffic
