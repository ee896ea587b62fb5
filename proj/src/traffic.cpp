#include "beamtraffic/traffic.hpp"

#include <limits>
#include <ostream>

#include "beamtraffic/csv.hpp"
#include "beamtraffic/error.hpp"
#include "beamtraffic/linkbudget.hpp"
#include "beamtraffic/parallel.hpp"

namespace beamtraffic {

namespace {

struct Box {
    double xmin, xmax, ymin, ymax;

    bool contains(const Point2& p) const { return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax; }
};

Box bounds(const Polygon& poly) {
    Box b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& v : poly.vertices) {
        b.xmin = std::min(b.xmin, v.x);
        b.xmax = std::max(b.xmax, v.x);
        b.ymin = std::min(b.ymin, v.y);
        b.ymax = std::max(b.ymax, v.y);
    }
    // Pad so the polygon's edge tolerance is never cut off by the box test.
    const double pad = 1e-9 * std::max({1.0, b.xmax - b.xmin, b.ymax - b.ymin});
    b.xmin -= pad;
    b.xmax += pad;
    b.ymin -= pad;
    b.ymax += pad;
    return b;
}

}  // namespace

TrafficMatrix build_traffic_matrix(const std::vector<BeamFootprint>& footprints, const BeamPattern& pattern,
                                   std::span<const Terminal> fss, std::span<const Terminal> aero,
                                   std::span<const Terminal> maritime, unsigned threads) {
    if (footprints.empty()) {
        throw InvalidArgument("no beam footprints");
    }
    if (footprints.size() != pattern.beam_count()) {
        throw MismatchedBeams("footprint count " + std::to_string(footprints.size()) + " != pattern beams " +
                              std::to_string(pattern.beam_count()));
    }
    std::vector<Box> boxes;
    for (const auto& fp : footprints) {
        boxes.push_back(bounds(fp.border));
    }
    const SampleGrid grid(pattern.locations());

    std::vector<const Terminal*> all;
    all.reserve(fss.size() + aero.size() + maritime.size());
    for (auto list : {fss, aero, maritime}) {
        for (const auto& t : list) {
            all.push_back(&t);
        }
    }

    std::vector<int> assigned(all.size(), 0);
    parallel_for(all.size(), threads, [&](std::size_t i) {
        const auto& term = *all[i];
        const auto p = to_planar(term.location);
        int best = 0;
        double best_gain = -std::numeric_limits<double>::infinity();
        int covering = 0;
        for (std::size_t f = 0; f < footprints.size(); ++f) {
            if (!boxes[f].contains(p) || !point_in_polygon(p, footprints[f].border)) {
                continue;
            }
            const int beam = footprints[f].beam_id;
            if (++covering == 1) {
                best = beam;
                continue;
            }
            if (covering == 2) {
                best_gain = interpolate_gain(term.location, grid, pattern.beam(best));
            }
            const double g = interpolate_gain(term.location, grid, pattern.beam(beam));
            if (g > best_gain) {
                best = beam;
                best_gain = g;
            }
        }
        assigned[i] = best;
    });

    TrafficMatrix t;
    t.beam_count = pattern.beam_count();
    t.input_count = all.size();
    for (std::size_t i = 0; i < all.size(); ++i) {
        const auto& term = *all[i];
        if (assigned[i] == 0) {
            ++t.excluded[static_cast<int>(term.type) - 1];
            continue;
        }
        t.rows.push_back({t.rows.size() + 1, assigned[i], term.location, term.type, term.demand_mbps, term.id});
    }
    if (t.size() + t.excluded_total() != t.input_count) {
        throw InvariantViolation("traffic rows and exclusions do not cover the input");
    }
    return t;
}

double BeamDemand::beam_total(int beam) const {
    const auto& v = per_beam.at(static_cast<std::size_t>(beam - 1));
    return v[0] + v[1] + v[2];
}

double BeamDemand::total() const {
    double sum = 0.0;
    for (const auto& v : per_beam) {
        sum += v[0] + v[1] + v[2];
    }
    return sum;
}

BeamDemand per_beam_demand(const TrafficMatrix& t) {
    BeamDemand d;
    d.per_beam.assign(t.beam_count, {0.0, 0.0, 0.0});
    for (const auto& r : t.rows) {
        if (r.beam < 1 || static_cast<std::size_t>(r.beam) > t.beam_count) {
            throw InvariantViolation("traffic row with beam outside 1..eta");
        }
        d.per_beam[static_cast<std::size_t>(r.beam - 1)][static_cast<int>(r.type) - 1] += r.demand_mbps;
    }
    return d;
}

void write_traffic_csv(std::ostream& out, const TrafficMatrix& t) {
    out << "user,beam,lat_deg,lon_deg,type,demand_mbps\n";
    for (const auto& r : t.rows) {
        out << r.user << ',' << r.beam << ',' << csv::fmt(r.location.lat) << ',' << csv::fmt(r.location.lon) << ','
            << static_cast<int>(r.type) << ',' << csv::fmt(r.demand_mbps) << '\n';
    }
}

void write_traffic_csv(const std::filesystem::path& file, const TrafficMatrix& t) {
    auto out = csv::open_output(file);
    write_traffic_csv(out, t);
}

}  // namespace beamtraffic
