#include <catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "beamtraffic/error.hpp"
#include "beamtraffic/synth.hpp"
#include "beamtraffic/traffic.hpp"
#include "oracles.hpp"

using namespace beamtraffic;

namespace {

Terminal term(const std::string& id, double lat, double lon, TerminalType type = TerminalType::Fss,
              double mbps = 2.0) {
    return {id, {lat, lon}, type, mbps};
}

// One beam whose footprint is the unit square lon [10, 11] x lat [50, 51].
struct UnitSquare {
    BeamPattern pattern;
    std::vector<BeamFootprint> footprints;

    UnitSquare() {
        std::vector<SamplePoint> beam;
        for (double lat : {50.0, 51.0}) {
            for (double lon : {10.0, 11.0}) {
                beam.push_back({{lat, lon}, 45.0, 0.0});
            }
        }
        pattern = BeamPattern({beam});
        footprints = all_footprints(pattern);
    }
};

std::vector<Terminal> random_terminals(std::mt19937_64& gen, std::size_t n, TerminalType type, const char* tag) {
    std::uniform_real_distribution<double> lat(45.5, 54.5), lon(4.5, 15.5);
    std::uniform_int_distribution<int> mbps(1, 20);
    std::vector<Terminal> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back({std::string(tag) + std::to_string(i), {lat(gen), lon(gen)}, type, double(mbps(gen))});
    }
    return out;
}

}  // namespace

TEST_CASE("single beam association", "[traffic]") {
    const UnitSquare s;
    REQUIRE(s.footprints[0].border.vertices.size() == 4);

    const std::vector<Terminal> inside{term("a", 50.5, 10.5)};
    const auto t = build_traffic_matrix(s.footprints, s.pattern, inside, {}, {});
    REQUIRE(t.size() == 1);
    CHECK(t.rows[0].user == 1);
    CHECK(t.rows[0].beam == 1);
    CHECK(t.excluded_total() == 0);

    const std::vector<Terminal> outside{term("b", 52.0, 10.5, TerminalType::Aero)};
    const auto u = build_traffic_matrix(s.footprints, s.pattern, {}, outside, {});
    CHECK(u.size() == 0);
    CHECK(u.excluded[1] == 1);
    CHECK(u.excluded_total() == 1);
    CHECK(u.input_count == 1);

    // Boundary points are covered.
    const std::vector<Terminal> edge{term("c", 51.0, 10.5), term("d", 50.0, 10.0)};
    CHECK(build_traffic_matrix(s.footprints, s.pattern, edge, {}, {}).size() == 2);
}

TEST_CASE("association errors", "[traffic]") {
    const UnitSquare s;
    CHECK_THROWS_AS(build_traffic_matrix({}, s.pattern, {}, {}, {}), InvalidArgument);
    const auto two = synth::make_pattern({2}, 1);
    CHECK_THROWS_AS(build_traffic_matrix(s.footprints, two, {}, {}, {}), MismatchedBeams);
}

TEST_CASE("overlap resolved by highest gain", "[traffic]") {
    synth::PatternParams params;
    params.beams = 2;
    const auto p = synth::make_pattern(params, 2);
    const auto fps = all_footprints(p);
    const auto c = synth::beam_centers(params);
    // Points along the segment between the two boresights, inside both footprints.
    std::vector<Terminal> ts;
    for (int k = 1; k < 10; ++k) {
        const double f = k / 10.0;
        ts.push_back(term("t" + std::to_string(k), c[0].lat + f * (c[1].lat - c[0].lat),
                          c[0].lon + f * (c[1].lon - c[0].lon)));
    }
    const auto t = build_traffic_matrix(fps, p, ts, {}, {});
    for (const auto& r : t.rows) {
        const double g1 = synth::synthetic_gain_db(params, c[0], r.location);
        const double g2 = synth::synthetic_gain_db(params, c[1], r.location);
        if (std::abs(g1 - g2) > 0.2) {
            CHECK(r.beam == (g2 > g1 ? 2 : 1));
        }
    }
    // A terminal nearer beam 2's boresight.
    const std::vector<Terminal> near2{term("n", c[0].lat + 0.7 * (c[1].lat - c[0].lat),
                                           c[0].lon + 0.7 * (c[1].lon - c[0].lon))};
    const auto t2 = build_traffic_matrix(fps, p, near2, {}, {});
    REQUIRE(t2.size() == 1);
    CHECK(t2.rows[0].beam == 2);
}

TEST_CASE("equal gains go to the lowest beam id", "[traffic]") {
    // Two identical beams: every covered terminal ties.
    std::vector<SamplePoint> beam;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            beam.push_back({{50.0 + 0.1 * i, 10.0 + 0.1 * j}, 45.0 - i - j, 0.0});
        }
    }
    const BeamPattern p({beam, beam});
    const auto fps = all_footprints(p);
    const std::vector<Terminal> ts{term("a", 50.05, 10.05)};
    const auto t = build_traffic_matrix(fps, p, ts, {}, {});
    REQUIRE(t.size() == 1);
    CHECK(t.rows[0].beam == 1);
}

TEST_CASE("per-beam demand", "[traffic]") {
    TrafficMatrix empty;
    empty.beam_count = 4;
    const auto z = per_beam_demand(empty);
    CHECK(z.total() == 0.0);
    CHECK(z.per_beam.size() == 4);

    TrafficMatrix t;
    t.beam_count = 3;
    t.rows.push_back({1, 3, {50, 10}, TerminalType::Fss, 2.0, "a"});
    t.rows.push_back({2, 3, {50, 10}, TerminalType::Maritime, 8.0, "b"});
    const auto d = per_beam_demand(t);
    CHECK(d.beam_total(3) == 10.0);
    CHECK(d.per_beam[2][0] == 2.0);
    CHECK(d.per_beam[2][2] == 8.0);
    CHECK(d.beam_total(1) == 0.0);
}

TEST_CASE("association properties on a 7-beam scenario", "[traffic][property]") {
    const synth::PatternParams params;
    const auto p = synth::make_pattern(params, 4);
    const auto fps = all_footprints(p);
    std::mt19937_64 gen(31);
    auto fss = random_terminals(gen, 600, TerminalType::Fss, "f");
    auto aero = random_terminals(gen, 200, TerminalType::Aero, "a");
    auto sea = random_terminals(gen, 200, TerminalType::Maritime, "m");

    const auto t = build_traffic_matrix(fps, p, fss, aero, sea, 1);
    CHECK(t.size() + t.excluded_total() == 1000);
    CHECK(t.size() > 0);
    CHECK(t.excluded_total() > 0);

    // Dense users in FSS, aero, maritime order; every row inside its beam.
    int last_type = 1;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        CHECK(r.user == i + 1);
        CHECK(static_cast<int>(r.type) >= last_type);
        last_type = static_cast<int>(r.type);
        CHECK(point_in_polygon(r.location, fps[static_cast<std::size_t>(r.beam - 1)].border));
    }

    // Coverage-count oracle: terminals inside at least one footprint.
    std::size_t covered = 0;
    for (const auto* list : {&fss, &aero, &sea}) {
        for (const auto& term : *list) {
            covered += std::any_of(fps.begin(), fps.end(), [&](const BeamFootprint& f) {
                std::vector<oracle::P> ring;
                for (const auto& v : f.border.vertices) ring.push_back({v.x, v.y});
                return oracle::winding_number({term.location.lon, term.location.lat}, ring) != 0;
            });
        }
    }
    CHECK(t.size() == covered);

    // Group-by oracle for per-beam totals (integer Mbps, exact).
    std::map<int, double> totals;
    double grand = 0.0;
    for (const auto& r : t.rows) {
        totals[r.beam] += r.demand_mbps;
        grand += r.demand_mbps;
    }
    const auto d = per_beam_demand(t);
    for (int b = 1; b <= 7; ++b) {
        CHECK(d.beam_total(b) == totals[b]);
    }
    CHECK(d.total() == grand);

    // Shuffle and thread-count invariance of the terminal -> beam mapping.
    std::map<std::string, int> mapping;
    for (const auto& r : t.rows) mapping[r.terminal_id] = r.beam;
    std::shuffle(fss.begin(), fss.end(), gen);
    std::shuffle(aero.begin(), aero.end(), gen);
    std::shuffle(sea.begin(), sea.end(), gen);
    const auto shuffled = build_traffic_matrix(fps, p, fss, aero, sea, 4);
    std::map<std::string, int> mapping2;
    for (const auto& r : shuffled.rows) mapping2[r.terminal_id] = r.beam;
    CHECK(mapping == mapping2);
    CHECK(shuffled.excluded == t.excluded);
}

TEST_CASE("traffic csv format", "[traffic]") {
    TrafficMatrix t;
    t.beam_count = 2;
    t.rows.push_back({1, 2, {50.123456789, 10.5}, TerminalType::Aero, 10.0, "x"});
    std::ostringstream out;
    write_traffic_csv(out, t);
    CHECK(out.str() == "user,beam,lat_deg,lon_deg,type,demand_mbps\n1,2,50.1234568,10.5,2,10\n");
}
