#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "beamtraffic/error.hpp"
#include "beamtraffic/pattern.hpp"
#include "beamtraffic/synth.hpp"
#include "oracles.hpp"

using namespace beamtraffic;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// One beam on a regular grid with gains from `gain(lat, lon)`.
BeamPattern grid_pattern(int n, double pitch, const std::function<double(double, double)>& gain) {
    std::vector<SamplePoint> beam;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double lat = 50.0 + i * pitch, lon = 10.0 + j * pitch;
            beam.push_back({{lat, lon}, gain(lat, lon), 0.0});
        }
    }
    return BeamPattern({beam});
}

void check_footprint_contains_qualifying(const BeamPattern& p, const BeamFootprint& fp) {
    double peak = -1e300;
    for (const auto& s : p.beam(fp.beam_id)) {
        peak = std::max(peak, s.gain_db);
    }
    CHECK(fp.peak_gain_db == peak);
    std::size_t qualifying = 0;
    for (const auto& s : p.beam(fp.beam_id)) {
        if (s.gain_db >= peak - 3.0) {
            ++qualifying;
            CHECK(fp.contains(s.location));
        }
    }
    CHECK(fp.qualifying_samples == qualifying);
}

const char* kTwoBeams =
    "beam_id,lat_deg,lon_deg,gain_db,phase_rad\n"
    "1,50,10,45,0.5\n1,50,10.1,44,0.25\n1,50.1,10,43,0\n1,50.1,10.1,42,6\n"
    "2,50,10,40,1\n2,50,10.1,41,2\n2,50.1,10,42,3\n2,50.1,10.1,43,4\n";

}  // namespace

TEST_CASE("parse a valid pattern", "[pattern]") {
    std::istringstream in(kTwoBeams);
    const auto p = parse_pattern(in);
    CHECK(p.beam_count() == 2);
    CHECK(p.samples_per_beam() == 4);
    CHECK(p.beam(2)[3].gain_db == 43.0);
    CHECK(p.locations().size() == 4);
    const auto b = p.coefficient(0, 1);
    CHECK_THAT(std::abs(b), WithinRel(std::pow(10.0, 45.0 / 20.0), 1e-15));
    CHECK_THAT(std::arg(b), WithinAbs(0.5, 1e-15));
    CHECK_THROWS_AS(p.beam(3), InvalidArgument);
    CHECK_THROWS_AS(p.beam(0), InvalidArgument);
}

TEST_CASE("parse rejects malformed patterns", "[pattern]") {
    SECTION("ragged beam") {
        std::istringstream in("beam_id,lat_deg,lon_deg,gain_db,phase_rad\n"
                              "1,50,10,45,0\n1,50,10.1,44,0\n1,50.1,10,43,0\n1,50.1,10.1,42,0\n"
                              "2,50,10,40,0\n2,50,10.1,41,0\n2,50.1,10,42,0\n");
        CHECK_THROWS_AS(parse_pattern(in), SchemaError);
    }
    SECTION("mismatched grid") {
        std::istringstream in("beam_id,lat_deg,lon_deg,gain_db,phase_rad\n"
                              "1,50,10,45,0\n1,50,10.1,44,0\n2,50,10,40,0\n2,50,10.2,41,0\n");
        CHECK_THROWS_AS(parse_pattern(in), SchemaError);
    }
    SECTION("beam ids out of order") {
        std::istringstream in("beam_id,lat_deg,lon_deg,gain_db,phase_rad\n"
                              "1,50,10,45,0\n3,50,10,44,0\n");
        CHECK_THROWS_AS(parse_pattern(in), SchemaError);
    }
    SECTION("bad number carries a line number") {
        std::istringstream in("beam_id,lat_deg,lon_deg,gain_db,phase_rad\n1,50,10,45,0\n1,50,ten,44,0\n");
        try {
            parse_pattern(in, "p.csv");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
            CHECK(std::string(e.what()).find("p.csv:3") != std::string::npos);
        }
    }
    SECTION("missing column") {
        std::istringstream in("beam_id,lat_deg,lon_deg,gain_db\n1,50,10,45\n");
        CHECK_THROWS_AS(parse_pattern(in), ParseError);
    }
    SECTION("non-finite gain") {
        std::istringstream in("beam_id,lat_deg,lon_deg,gain_db,phase_rad\n1,50,10,nan,0\n");
        CHECK_THROWS_AS(parse_pattern(in), ParseError);
    }
    SECTION("empty input is an empty pattern") {
        std::istringstream in("");
        CHECK(parse_pattern(in).empty());
        CHECK_THROWS_AS(all_footprints(parse_pattern(in)), EmptyPattern);
    }
    SECTION("missing file names the path") {
        try {
            parse_pattern(std::filesystem::path("/nonexistent/pattern.csv"));
            FAIL("expected InvalidArgument");
        } catch (const InvalidArgument& e) {
            CHECK(std::string(e.what()).find("/nonexistent/pattern.csv") != std::string::npos);
        }
    }
}

TEST_CASE("phases are normalized into [0, 2pi)", "[pattern]") {
    CHECK(normalize_phase(-0.5) == Catch::Approx(2 * std::numbers::pi - 0.5));
    CHECK(normalize_phase(2 * std::numbers::pi) == 0.0);
    CHECK(normalize_phase(7.0) == Catch::Approx(7.0 - 2 * std::numbers::pi));
    std::istringstream in("beam_id,lat_deg,lon_deg,gain_db,phase_rad\n1,50,10,45,-1\n");
    const auto p = parse_pattern(in);
    CHECK(p.beam(1)[0].phase_rad == Catch::Approx(2 * std::numbers::pi - 1));
}

TEST_CASE("synthetic pattern round-trips byte-identically", "[pattern]") {
    const auto p = synth::make_pattern({}, 42);
    CHECK(p.beam_count() == 7);
    std::ostringstream first;
    write_pattern(first, p);
    std::istringstream in(first.str());
    const auto q = parse_pattern(in);
    CHECK(q == p);
    std::ostringstream second;
    write_pattern(second, q);
    CHECK(second.str() == first.str());
}

TEST_CASE("gaussian beam footprint approximates the analytic -3 dB circle", "[pattern]") {
    synth::PatternParams params;
    params.beams = 1;
    params.pitch_deg = 0.05;
    const auto p = synth::make_pattern(params, 1);
    const auto fp = beam_footprint(p, 1);
    const GeoPoint centre{params.center_lat, params.center_lon};
    CHECK(fp.contains(centre));
    CHECK(fp.peak_gain_db == params.peak_gain_db);
    // Gain falls by 3 dB at radius_3db_deg (planar degrees) from the boresight.
    for (const auto& v : fp.border.vertices) {
        const double r = std::hypot(v.x - centre.lon, v.y - centre.lat);
        CHECK(std::abs(r - params.radius_3db_deg) <= params.pitch_deg);
    }
    check_footprint_contains_qualifying(p, fp);
}

TEST_CASE("footprint of exactly four qualifying corners is that square", "[pattern]") {
    const auto p = grid_pattern(5, 0.1, [](double lat, double lon) {
        const bool corner = (std::abs(lat - 50.1) < 1e-9 || std::abs(lat - 50.3) < 1e-9) &&
                            (std::abs(lon - 10.1) < 1e-9 || std::abs(lon - 10.3) < 1e-9);
        return corner ? 50.0 : 40.0;
    });
    const auto fp = beam_footprint(p, 1);
    CHECK(fp.qualifying_samples == 4);
    REQUIRE(fp.border.vertices.size() == 4);
    CHECK(fp.latitudes() == std::vector<double>{p.beam(1)[6].location.lat, p.beam(1)[8].location.lat,
                                                 p.beam(1)[18].location.lat, p.beam(1)[16].location.lat});
    CHECK(fp.border.area() > 0);
}

TEST_CASE("uniform gain qualifies every sample", "[pattern]") {
    const auto p = grid_pattern(6, 0.1, [](double, double) { return 47.0; });
    const auto fp = beam_footprint(p, 1);
    CHECK(fp.qualifying_samples == 36);
    CHECK(fp.border.vertices.size() == 4);
    CHECK_THAT(fp.border.area(), WithinRel(0.25, 1e-9));
}

TEST_CASE("degenerate footprints name the beam", "[pattern]") {
    std::vector<SamplePoint> b1, b2;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const GeoPoint loc{50.0 + i * 0.1, 10.0 + j * 0.1};
            b1.push_back({loc, 40.0, 0.0});
            // Beam 2 peaks along one row only: collinear qualifying set.
            b2.push_back({loc, i == 1 ? 50.0 : 30.0, 0.0});
        }
    }
    const BeamPattern p({b1, b2});
    CHECK_NOTHROW(beam_footprint(p, 1));
    try {
        all_footprints(p);
        FAIL("expected DegenerateFootprint");
    } catch (const DegenerateFootprint& e) {
        CHECK(e.beam_id() == 2);
        CHECK(std::string(e.what()).find("beam 2") != std::string::npos);
    }

    std::vector<SamplePoint> b3 = b1;
    b3[5].gain_db = 60.0;  // single qualifying sample
    CHECK_THROWS_AS(beam_footprint(BeamPattern({b3}), 1), DegenerateFootprint);
}

TEST_CASE("overlapping gaussian footprints intersect", "[pattern]") {
    synth::PatternParams params;
    params.beams = 2;
    const auto p = synth::make_pattern(params, 3);
    const auto fps = all_footprints(p);
    REQUIRE(fps.size() == 2);
    const auto centres = synth::beam_centers(params);
    const GeoPoint mid{(centres[0].lat + centres[1].lat) / 2, (centres[0].lon + centres[1].lon) / 2};
    CHECK(fps[0].contains(mid));
    CHECK(fps[1].contains(mid));
}

TEST_CASE("single-beam pattern yields one footprint", "[pattern]") {
    synth::PatternParams params;
    params.beams = 1;
    CHECK(all_footprints(synth::make_pattern(params, 1)).size() == 1);
}

TEST_CASE("seven-beam hex footprints contain their own boresight", "[pattern][property]") {
    const synth::PatternParams params;
    const auto p = synth::make_pattern(params, 5);
    const auto fps = all_footprints(p, 1);
    const auto centres = synth::beam_centers(params);
    REQUIRE(fps.size() == 7);
    for (std::size_t b = 0; b < fps.size(); ++b) {
        CHECK(fps[b].beam_id == static_cast<int>(b + 1));
        CHECK(fps[b].contains(centres[b]));
        check_footprint_contains_qualifying(p, fps[b]);
    }
    // Identical across runs and thread counts.
    const auto again = all_footprints(p, 4);
    for (std::size_t b = 0; b < fps.size(); ++b) {
        CHECK(again[b].border.vertices == fps[b].border.vertices);
    }
}

TEST_CASE("sample grid nearest matches brute force", "[pattern][property]") {
    const auto p = synth::make_pattern({}, 9);
    const SampleGrid grid(p.locations());
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> lat(44, 56), lon(3, 17);
    for (int i = 0; i < 500; ++i) {
        // Mix of generic points and points exactly on samples.
        const GeoPoint u = i % 5 == 0 ? p.locations()[static_cast<std::size_t>(i * 37) % p.locations().size()]
                                      : GeoPoint{lat(gen), lon(gen)};
        std::vector<std::pair<double, std::size_t>> all;
        for (std::size_t s = 0; s < p.locations().size(); ++s) {
            all.emplace_back(oracle::cosine_law_distance(u.lat, u.lon, p.locations()[s].lat, p.locations()[s].lon,
                                                         kMeanEarthRadius),
                             s);
        }
        std::sort(all.begin(), all.end());
        CHECK(grid.nearest(u) == all[0].second);
        const auto k3 = grid.k_nearest(u, 3);
        REQUIRE(k3.size() == 3);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(k3[k].index == all[k].second);
        }
    }
}
