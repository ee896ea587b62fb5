#pragma once

// Spherical-Earth geodesy and free-space propagation for a GEO downlink.

#include <numbers>

namespace beamtraffic {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kMeanEarthRadius = 6'371'000.0;  // m
inline constexpr double kGeoAltitude = 35'786'000.0;     // m

inline constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

// Wraps a longitude into [-180, 180).
double normalize_longitude(double lon_deg);

/// Geographic position in degrees. Construct through make() to get the
/// range checks and longitude normalization; aggregate init skips them.
struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;

    /// Throws InvalidArgument for latitude outside [-90, 90] or non-finite input.
    static GeoPoint make(double lat_deg, double lon_deg);

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Satellite orbit and RF parameters. Defaults follow the reference GEO
/// scenario: 13 deg E, 35 786 km, 19.5 GHz Ka-band downlink, 40.7 dB terminal
/// gain, 6 kW total radiated power over 50 MHz user bandwidth.
struct ScenarioConfig {
    double sat_lat_deg = 0.0;
    double sat_lon_deg = 13.0;
    double altitude_m = kGeoAltitude;
    double earth_radius_m = kMeanEarthRadius;
    double carrier_freq_hz = 19.5e9;
    double rx_gain_db = 40.7;
    double total_power_w = 6000.0;
    double bandwidth_hz = 50e6;

    double wavelength_m() const { return kSpeedOfLight / carrier_freq_hz; }
    GeoPoint sub_satellite_point() const { return {sat_lat_deg, sat_lon_deg}; }

    // Throws InvalidArgument when h, R, f, power or bandwidth are not positive.
    void validate() const;
};

// Spherical law of cosines with the cosine clamped to [-1, 1].
double great_circle_distance(const GeoPoint& a, const GeoPoint& b,
                             double radius_m = kMeanEarthRadius);

// Cosine of the central angle between a and b, unclamped.
double central_angle_cosine(const GeoPoint& a, const GeoPoint& b);

/// Straight-line distance from a ground user to the satellite:
///
///   d = (R+h) sqrt(1 + (R/(R+h))^2 - 2R/(R+h) (cos(dlon) cos(lat_s) cos(lat_u)
///                                              + sin(lat_s) sin(lat_u)))
double slant_range(const GeoPoint& user, const ScenarioConfig& cfg);

/// Free-space path loss 20 log10(4 pi d / lambda) in dB. Throws
/// InvalidArgument unless both arguments are positive and finite.
double path_loss_db(double distance_m, double wavelength_m);

}  // namespace beamtraffic
