#include "beamtraffic/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "beamtraffic/csv.hpp"
#include "beamtraffic/error.hpp"

namespace beamtraffic {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

struct Binding {
    std::function<void(SimulationConfig&, const std::string&)> set;
    std::function<std::string(const SimulationConfig&)> get;
};

double to_number(const std::string& v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
        throw std::invalid_argument("not a finite number");
    }
    return out;
}

template <typename Field>
Binding number(Field field) {
    return {[field](SimulationConfig& c, const std::string& v) { field(c) = to_number(v); },
            [field](const SimulationConfig& c) { return csv::fmt(field(c)); }};
}

const std::vector<std::pair<std::string, Binding>>& bindings() {
    static const std::vector<std::pair<std::string, Binding>> table = {
        {"downscale",
         {[](SimulationConfig& c, const std::string& v) {
              long long n = 0;
              const auto* end = v.data() + v.size();
              const auto [ptr, ec] = std::from_chars(v.data(), end, n);
              if (ec != std::errc() || ptr != end) {
                  throw std::invalid_argument("not an integer");
              }
              c.ingest.downscale = n;
          },
          [](const SimulationConfig& c) { return std::to_string(c.ingest.downscale); }}},
        {"urban_density_threshold", number([](auto& c) -> auto& { return c.ingest.urban.density_threshold; })},
        {"urban_suppression_factor", number([](auto& c) -> auto& { return c.ingest.urban.suppression_factor; })},
        {"demand_fss_mbps", number([](auto& c) -> auto& { return c.ingest.fss_mbps; })},
        {"demand_aero_mbps", number([](auto& c) -> auto& { return c.ingest.aero_mbps; })},
        {"demand_maritime_mbps", number([](auto& c) -> auto& { return c.ingest.maritime_mbps; })},
        {"bbox_lat_min", number([](auto& c) -> auto& { return c.ingest.bbox.lat_min; })},
        {"bbox_lat_max", number([](auto& c) -> auto& { return c.ingest.bbox.lat_max; })},
        {"bbox_lon_min", number([](auto& c) -> auto& { return c.ingest.bbox.lon_min; })},
        {"bbox_lon_max", number([](auto& c) -> auto& { return c.ingest.bbox.lon_max; })},
        {"sat_lat_deg", number([](auto& c) -> auto& { return c.scenario.sat_lat_deg; })},
        {"sat_lon_deg", number([](auto& c) -> auto& { return c.scenario.sat_lon_deg; })},
        {"altitude_m", number([](auto& c) -> auto& { return c.scenario.altitude_m; })},
        {"earth_radius_m", number([](auto& c) -> auto& { return c.scenario.earth_radius_m; })},
        {"carrier_freq_hz", number([](auto& c) -> auto& { return c.scenario.carrier_freq_hz; })},
        {"rx_gain_db", number([](auto& c) -> auto& { return c.scenario.rx_gain_db; })},
        {"total_power_w", number([](auto& c) -> auto& { return c.scenario.total_power_w; })},
        {"bandwidth_hz", number([](auto& c) -> auto& { return c.scenario.bandwidth_hz; })},
        {"apply_pattern_phase",
         {[](SimulationConfig& c, const std::string& v) {
              if (v == "true" || v == "1") {
                  c.apply_pattern_phase = true;
              } else if (v == "false" || v == "0") {
                  c.apply_pattern_phase = false;
              } else {
                  throw std::invalid_argument("expected true or false");
              }
          },
          [](const SimulationConfig& c) { return std::string(c.apply_pattern_phase ? "true" : "false"); }}},
    };
    return table;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> SimulationConfig::entries() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [key, b] : bindings()) {
        out.emplace_back(key, b.get(*this));
    }
    return out;
}

void SimulationConfig::validate() const {
    scenario.validate();
    ingest.validate();
}

SimulationConfig parse_config(std::istream& in, const std::string& source) {
    std::map<std::string, const Binding*> lookup;
    for (const auto& [key, b] : bindings()) {
        lookup.emplace(key, &b);
    }
    SimulationConfig cfg;
    std::set<std::string> seen;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (line == 1 && raw.rfind("\xEF\xBB\xBF", 0) == 0) {
            raw.erase(0, 3);
        }
        const auto hash = raw.find('#');
        const auto text = trim(std::string_view(raw).substr(0, hash));
        if (text.empty()) {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ParseError(source, line, "expected 'key = value'");
        }
        const auto key = trim(std::string_view(text).substr(0, eq));
        const auto value = trim(std::string_view(text).substr(eq + 1));
        const auto it = lookup.find(key);
        if (it == lookup.end()) {
            throw ParseError(source, line, "unknown config key '" + key + "'");
        }
        if (!seen.insert(key).second) {
            throw ParseError(source, line, "repeated config key '" + key + "'");
        }
        try {
            it->second->set(cfg, value);
        } catch (const std::invalid_argument& e) {
            throw ParseError(source, line, key + ": " + e.what() + " ('" + value + "')");
        }
    }
    return cfg;
}

SimulationConfig parse_config(const std::filesystem::path& file) {
    auto in = csv::open_input(file);
    return parse_config(in, file.string());
}

void write_config(std::ostream& out, const SimulationConfig& cfg) {
    for (const auto& [k, v] : cfg.entries()) {
        out << k << " = " << v << '\n';
    }
}

}  // namespace beamtraffic
