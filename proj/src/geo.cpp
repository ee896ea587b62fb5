#include "beamtraffic/geo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "beamtraffic/error.hpp"

namespace beamtraffic {

double normalize_longitude(double lon_deg) {
    if (lon_deg >= -180.0 && lon_deg < 180.0) {
        return lon_deg;
    }
    double wrapped = std::fmod(lon_deg + 180.0, 360.0);
    if (wrapped < 0.0) {
        wrapped += 360.0;
    }
    return wrapped - 180.0;
}

GeoPoint GeoPoint::make(double lat_deg, double lon_deg) {
    if (!std::isfinite(lat_deg) || !std::isfinite(lon_deg)) {
        throw InvalidArgument("non-finite coordinate");
    }
    if (lat_deg < -90.0 || lat_deg > 90.0) {
        throw InvalidArgument("latitude out of range: " + std::to_string(lat_deg));
    }
    return {lat_deg, normalize_longitude(lon_deg)};
}

void ScenarioConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidArgument(std::string(name) + " must be positive");
        }
    };
    positive(altitude_m, "altitude_m");
    positive(earth_radius_m, "earth_radius_m");
    positive(carrier_freq_hz, "carrier_freq_hz");
    positive(total_power_w, "total_power_w");
    positive(bandwidth_hz, "bandwidth_hz");
    if (sat_lat_deg < -90.0 || sat_lat_deg > 90.0) {
        throw InvalidArgument("sat_lat_deg out of range");
    }
}

double central_angle_cosine(const GeoPoint& a, const GeoPoint& b) {
    const double lat1 = deg2rad(a.lat);
    const double lat2 = deg2rad(b.lat);
    const double dlon = deg2rad(b.lon - a.lon);
    return std::sin(lat1) * std::sin(lat2) + std::cos(lat1) * std::cos(lat2) * std::cos(dlon);
}

double great_circle_distance(const GeoPoint& a, const GeoPoint& b, double radius_m) {
    if (a == b) {
        return 0.0;
    }
    const double c = std::clamp(central_angle_cosine(a, b), -1.0, 1.0);
    return radius_m * std::acos(c);
}

double slant_range(const GeoPoint& user, const ScenarioConfig& cfg) {
    const double R = cfg.earth_radius_m;
    const double orbit = R + cfg.altitude_m;
    const double ratio = R / orbit;
    const double lat_s = deg2rad(cfg.sat_lat_deg);
    const double lat_u = deg2rad(user.lat);
    const double dlon = deg2rad(cfg.sat_lon_deg - user.lon);
    const double cos_angle =
        std::cos(dlon) * std::cos(lat_s) * std::cos(lat_u) + std::sin(lat_s) * std::sin(lat_u);
    const double radicand = 1.0 + ratio * ratio - 2.0 * ratio * cos_angle;
    return orbit * std::sqrt(std::max(radicand, 0.0));
}

double path_loss_db(double distance_m, double wavelength_m) {
    if (!(distance_m > 0.0) || !std::isfinite(distance_m)) {
        throw InvalidArgument("path loss distance must be positive");
    }
    if (!(wavelength_m > 0.0) || !std::isfinite(wavelength_m)) {
        throw InvalidArgument("wavelength must be positive");
    }
    return 20.0 * std::log10(4.0 * std::numbers::pi * distance_m / wavelength_m);
}

}  // namespace beamtraffic
