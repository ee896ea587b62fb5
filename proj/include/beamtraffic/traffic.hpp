#pragma once

// Terminal-to-beam association and the per-terminal traffic matrix
// (user, beam, lat, lon, type, demand).

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "beamtraffic/ingest.hpp"
#include "beamtraffic/pattern.hpp"

namespace beamtraffic {

struct TrafficRecord {
    std::size_t user = 0;  // 1-based, dense
    int beam = 0;          // 1-based
    GeoPoint location;
    TerminalType type = TerminalType::Fss;
    double demand_mbps = 0.0;
    std::string terminal_id;
};

struct TrafficMatrix {
    std::vector<TrafficRecord> rows;
    std::size_t beam_count = 0;
    std::array<std::size_t, 3> excluded{};  // uncovered terminals by type (fss, aero, maritime)
    std::size_t input_count = 0;            // K + L + M

    std::size_t size() const { return rows.size(); }
    std::size_t excluded_total() const { return excluded[0] + excluded[1] + excluded[2]; }
};

/// Associates every terminal with a beam whose footprint contains it. A
/// terminal covered by several footprints goes to the beam with the highest
/// interpolated gain at its location (lowest beam id on ties); uncovered
/// terminals are counted and left out. Rows keep input order: FSS, then
/// aeronautical, then maritime.
TrafficMatrix build_traffic_matrix(const std::vector<BeamFootprint>& footprints, const BeamPattern& pattern,
                                   std::span<const Terminal> fss, std::span<const Terminal> aero,
                                   std::span<const Terminal> maritime, unsigned threads = 1);

struct BeamDemand {
    // per_beam[b - 1][type - 1] in Mbps.
    std::vector<std::array<double, 3>> per_beam;

    double beam_total(int beam) const;
    double total() const;
};

BeamDemand per_beam_demand(const TrafficMatrix& t);

void write_traffic_csv(std::ostream& out, const TrafficMatrix& t);
void write_traffic_csv(const std::filesystem::path& file, const TrafficMatrix& t);

}  // namespace beamtraffic
