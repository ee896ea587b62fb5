#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "beamtraffic/error.hpp"
#include "beamtraffic/geo.hpp"
#include "oracles.hpp"

using namespace beamtraffic;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("scenario defaults", "[geo]") {
    const ScenarioConfig cfg;
    CHECK(cfg.sat_lat_deg == 0.0);
    CHECK(cfg.sat_lon_deg == 13.0);
    CHECK(cfg.altitude_m == 35'786'000.0);
    CHECK(cfg.carrier_freq_hz == 19.5e9);
    CHECK(cfg.rx_gain_db == 40.7);
    CHECK(cfg.total_power_w == 6000.0);
    CHECK(cfg.bandwidth_hz == 50e6);
    CHECK_THAT(cfg.wavelength_m() * cfg.carrier_freq_hz, WithinRel(kSpeedOfLight, 1e-9));
    CHECK_NOTHROW(cfg.validate());

    auto bad = cfg;
    bad.altitude_m = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = cfg;
    bad.carrier_freq_hz = -1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("geo point validation and longitude normalization", "[geo]") {
    CHECK(GeoPoint::make(10, 180).lon == -180.0);
    CHECK(GeoPoint::make(10, 190).lon == -170.0);
    CHECK(GeoPoint::make(10, -180).lon == -180.0);
    CHECK_THROWS_AS(GeoPoint::make(91, 0), InvalidArgument);
    CHECK_THROWS_AS(GeoPoint::make(std::nan(""), 0), InvalidArgument);
}

TEST_CASE("great circle distance examples", "[geo]") {
    const GeoPoint p{50, 10};
    CHECK(great_circle_distance(p, p) == 0.0);
    CHECK_THAT(great_circle_distance({0, 0}, {0, 180}), WithinRel(std::numbers::pi * kMeanEarthRadius, 1e-12));

    const double ours = great_circle_distance({48.8566, 2.3522}, {52.5200, 13.4050}, 6'371'000.0);
    const double ref = oracle::haversine(48.8566, 2.3522, 52.5200, 13.4050, 6'371'000.0);
    CHECK_THAT(ours, WithinRel(ref, 1e-6));
}

TEST_CASE("great circle distance properties", "[geo][property]") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> lat(-89, 89), lon(-180, 179.999);
    for (int i = 0; i < 2000; ++i) {
        const GeoPoint a{lat(gen), lon(gen)}, b{lat(gen), lon(gen)}, c{lat(gen), lon(gen)};
        const double ab = great_circle_distance(a, b);
        CHECK(ab >= 0.0);
        CHECK(ab == great_circle_distance(b, a));
        CHECK(great_circle_distance(a, c) <= (ab + great_circle_distance(b, c)) * (1 + 1e-9));
        CHECK_THAT(ab, WithinAbs(oracle::haversine(a.lat, a.lon, b.lat, b.lon, kMeanEarthRadius), 1e-3));
    }
}

TEST_CASE("slant range examples", "[geo]") {
    const ScenarioConfig cfg;
    CHECK_THAT(slant_range(cfg.sub_satellite_point(), cfg), WithinRel(35'786'000.0, 1e-9));

    for (const auto& [lat, lon] : {std::pair{48.8566, 2.3522}, std::pair{80.0, 50.0}}) {
        const double ref = oracle::ecef_slant_range(lat, lon, 0.0, 13.0, cfg.earth_radius_m, cfg.altitude_m);
        CHECK_THAT(slant_range({lat, lon}, cfg), WithinRel(ref, 1e-9));
    }

    ScenarioConfig inclined = cfg;
    inclined.sat_lat_deg = 5.0;
    const double ref = oracle::ecef_slant_range(40.0, -20.0, 5.0, 13.0, cfg.earth_radius_m, cfg.altitude_m);
    CHECK_THAT(slant_range({40.0, -20.0}, inclined), WithinRel(ref, 1e-9));
}

TEST_CASE("slant range properties", "[geo][property]") {
    const ScenarioConfig cfg;
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> lat(25, 80), lon(-40, 50);
    for (int i = 0; i < 10'000; ++i) {
        const GeoPoint u{lat(gen), lon(gen)};
        const double d = slant_range(u, cfg);
        CHECK(d >= cfg.altitude_m);
        CHECK(d <= 2 * cfg.earth_radius_m + cfg.altitude_m);
        const double ref = oracle::ecef_slant_range(u.lat, u.lon, 0.0, 13.0, cfg.earth_radius_m, cfg.altitude_m);
        REQUIRE_THAT(d, WithinRel(ref, 1e-9));
        // Reflection about the satellite longitude.
        const GeoPoint mirrored{u.lat, 2 * cfg.sat_lon_deg - u.lon};
        CHECK_THAT(slant_range(mirrored, cfg), WithinRel(d, 1e-12));
    }
}

TEST_CASE("path loss examples", "[geo]") {
    const double lambda = ScenarioConfig{}.wavelength_m();
    CHECK_THAT(path_loss_db(lambda / (4 * std::numbers::pi), lambda), WithinAbs(0.0, 1e-12));
    CHECK_THAT(path_loss_db(2000.0, lambda) - path_loss_db(1000.0, lambda), WithinAbs(20 * std::log10(2.0), 1e-12));

    const double nadir = path_loss_db(35'786'000.0, lambda);
    CHECK_THAT(nadir, WithinAbs(oracle::path_loss(35'786'000.0, lambda), 1e-9));
    CHECK(nadir > 209.0);
    CHECK(nadir < 209.5);

    CHECK_THROWS_AS(path_loss_db(0.0, lambda), InvalidArgument);
    CHECK_THROWS_AS(path_loss_db(-1.0, lambda), InvalidArgument);
    CHECK_THROWS_AS(path_loss_db(1.0, 0.0), InvalidArgument);
}

TEST_CASE("path loss properties", "[geo][property]") {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> logd(0, 9);
    const double lambda = 0.0153;
    for (int i = 0; i < 1000; ++i) {
        const double d = std::pow(10.0, logd(gen));
        CHECK(path_loss_db(d * 1.001, lambda) > path_loss_db(d, lambda));
        CHECK_THAT(path_loss_db(2 * d, lambda) - path_loss_db(d, lambda), WithinAbs(20 * std::log10(2.0), 1e-12));
    }
}
