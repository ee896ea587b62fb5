#pragma once

// Simulation config file: `key = value` lines, `#` comments, blank lines
// ignored. Unset keys keep their defaults.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "beamtraffic/geo.hpp"
#include "beamtraffic/ingest.hpp"

namespace beamtraffic {

struct SimulationConfig {
    ScenarioConfig scenario;
    IngestConfig ingest;
    bool apply_pattern_phase = false;

    // Every key with its canonical value, in a fixed order.
    std::vector<std::pair<std::string, std::string>> entries() const;

    // Validates both sub-configs.
    void validate() const;
};

/// Throws ParseError on malformed lines, unknown or repeated keys and
/// unparseable values.
SimulationConfig parse_config(std::istream& in, const std::string& source = "<config>");
SimulationConfig parse_config(const std::filesystem::path& file);

// Writes `entries()` in the same text format.
void write_config(std::ostream& out, const SimulationConfig& cfg);

}  // namespace beamtraffic
