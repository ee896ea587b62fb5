#pragma once

// Sampled multibeam antenna pattern and per-beam -3 dB footprints.

#include <array>
#include <complex>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "beamtraffic/geo.hpp"
#include "beamtraffic/geometry.hpp"

namespace beamtraffic {

struct SamplePoint {
    GeoPoint location;
    double gain_db = 0.0;
    double phase_rad = 0.0;  // [0, 2pi)
};

// Wraps a phase into [0, 2pi).
double normalize_phase(double rad);

/// Gain/phase samples of every beam on one shared grid of locations.
class BeamPattern {
public:
    BeamPattern() = default;

    /// Validates that every beam has the same number of samples at the same
    /// locations in the same order; throws SchemaError otherwise.
    explicit BeamPattern(std::vector<std::vector<SamplePoint>> beams);

    std::size_t beam_count() const { return beams_.size(); }
    std::size_t samples_per_beam() const { return beams_.empty() ? 0 : beams_.front().size(); }
    bool empty() const { return samples_per_beam() == 0; }

    // Beam ids are 1-based throughout the public API.
    std::span<const SamplePoint> beam(int beam_id) const;
    const std::vector<GeoPoint>& locations() const { return locations_; }

    /// Complex coefficient B(sample, beam) = 10^(gain/20) e^(i phase).
    std::complex<double> coefficient(std::size_t sample, int beam_id) const;

    friend bool operator==(const BeamPattern& a, const BeamPattern& b);

private:
    std::vector<std::vector<SamplePoint>> beams_;
    std::vector<GeoPoint> locations_;
};

/// Nearest-neighbour lookup over the shared sample locations. Results are
/// identical to a brute-force scan ranking samples by
/// great_circle_distance with the lowest index winning ties; unit-vector dot
/// products only preselect candidates.
class SampleGrid {
public:
    explicit SampleGrid(const std::vector<GeoPoint>& locations);

    std::size_t size() const { return locations_.size(); }

    std::size_t nearest(const GeoPoint& p) const;

    struct Neighbour {
        std::size_t index;
        double distance_m;
    };
    // Up to k nearest samples ordered by (distance, index).
    std::vector<Neighbour> k_nearest(const GeoPoint& p, std::size_t k) const;

private:
    std::vector<GeoPoint> locations_;
    std::vector<std::array<double, 3>> unit_;
};

BeamPattern parse_pattern(std::istream& in, const std::string& source = "<stream>");
BeamPattern parse_pattern(const std::filesystem::path& file);

/// Canonical CSV form: header, rows grouped by beam, 9 significant digits.
void write_pattern(std::ostream& out, const BeamPattern& pattern);
void write_pattern(const std::filesystem::path& file, const BeamPattern& pattern);

struct BeamFootprint {
    int beam_id = 0;
    Polygon border;  // x = lon, y = lat
    double peak_gain_db = 0.0;
    std::size_t qualifying_samples = 0;

    std::vector<double> latitudes() const;
    std::vector<double> longitudes() const;
    bool contains(const GeoPoint& p) const { return point_in_polygon(p, border); }
};

/// Border of the region where the beam's gain is within 3 dB of its peak:
/// the boundary of the Delaunay triangulation of all samples with
/// gain >= peak - 3 dB. Throws DegenerateFootprint when fewer than three
/// non-collinear samples qualify.
BeamFootprint beam_footprint(const BeamPattern& pattern, int beam_id);

/// Footprints for beams 1..eta in beam order. `threads` caps the worker count.
std::vector<BeamFootprint> all_footprints(const BeamPattern& pattern, unsigned threads = 1);

}  // namespace beamtraffic
