#include "beamtraffic/linkbudget.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "json.hpp"

#include "beamtraffic/csv.hpp"
#include "beamtraffic/error.hpp"
#include "beamtraffic/parallel.hpp"

namespace beamtraffic {

namespace {

constexpr std::size_t kInterpolationNeighbours = 3;

// Inverse-square-distance weighting; a zero distance is an exact hit.
template <typename Neighbours, typename GainOf>
double idw(const Neighbours& near, GainOf gain_of) {
    double num = 0.0;
    double den = 0.0;
    for (const auto& n : near) {
        if (n.distance_m == 0.0) {
            return gain_of(n.index);
        }
        const double w = 1.0 / (n.distance_m * n.distance_m);
        num += w * gain_of(n.index);
        den += w;
    }
    return num / den;
}

}  // namespace

double interpolate_gain(const GeoPoint& user, std::span<const SamplePoint> samples) {
    if (samples.empty()) {
        throw InvalidArgument("interpolate_gain needs at least one sample");
    }
    std::vector<SampleGrid::Neighbour> all;
    all.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        all.push_back({i, great_circle_distance(user, samples[i].location)});
    }
    const auto k = std::min(kInterpolationNeighbours, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(),
                      [](const auto& a, const auto& b) {
                          return a.distance_m < b.distance_m || (a.distance_m == b.distance_m && a.index < b.index);
                      });
    all.resize(k);
    return idw(all, [&](std::size_t i) { return samples[i].gain_db; });
}

double interpolate_gain(const GeoPoint& user, const SampleGrid& grid, std::span<const SamplePoint> samples) {
    if (samples.empty() || samples.size() != grid.size()) {
        throw InvalidArgument("sample list does not match the grid");
    }
    const auto near = grid.k_nearest(user, kInterpolationNeighbours);
    return idw(near, [&](std::size_t i) { return samples[i].gain_db; });
}

ChannelMatrix::ChannelMatrix(std::size_t users, std::size_t beams)
    : users_(users),
      beams_(beams),
      magnitude_(users * beams, 0.0),
      phase_(users * beams, 0.0),
      serving_(users, 0),
      links_(users) {}

std::size_t ChannelMatrix::offset(std::size_t user, int beam) const {
    if (user < 1 || user > users_) {
        throw UnknownUser(user);
    }
    if (beam < 1 || static_cast<std::size_t>(beam) > beams_) {
        throw InvalidArgument("beam id " + std::to_string(beam) + " out of range");
    }
    return (user - 1) * beams_ + static_cast<std::size_t>(beam - 1);
}

ChannelMatrix build_channel_matrix(const TrafficMatrix& t, const BeamPattern& pattern, const ScenarioConfig& cfg,
                                   const LinkOptions& options) {
    if (pattern.empty()) {
        throw EmptyPattern();
    }
    if (t.beam_count != pattern.beam_count()) {
        throw MismatchedBeams("traffic matrix has " + std::to_string(t.beam_count) + " beams, pattern has " +
                              std::to_string(pattern.beam_count()));
    }
    cfg.validate();
    const double lambda = cfg.wavelength_m();
    const int beams = static_cast<int>(pattern.beam_count());
    const SampleGrid grid(pattern.locations());

    ChannelMatrix h(t.size(), pattern.beam_count());
    h.set_wavelength(lambda);
    parallel_for(t.size(), options.threads, [&](std::size_t row) {
        const auto& rec = t.rows[row];
        const std::size_t n = row + 1;
        UserLink link;
        link.slant_range_m = slant_range(rec.location, cfg);
        link.path_loss_db = path_loss_db(link.slant_range_m, lambda);
        link.interpolated_gain_db = interpolate_gain(rec.location, grid, pattern.beam(rec.beam));
        // Every beam shares the sample grid, so the nearest sample is the same for all j.
        link.nearest_sample = grid.nearest(rec.location);
        h.set_user(n, rec.beam, link);

        const double propagation_phase =
            2.0 * std::numbers::pi * std::fmod(link.slant_range_m, lambda) / lambda;
        for (int j = 1; j <= beams; ++j) {
            const auto b = pattern.coefficient(link.nearest_sample, j);
            const double gain_db = 10.0 * std::log10(std::norm(b));
            const double link_db = gain_db - link.path_loss_db + cfg.rx_gain_db;
            const double amplitude = std::pow(10.0, link_db / 20.0);
            double phase = propagation_phase;
            if (options.apply_pattern_phase) {
                phase = normalize_phase(phase + pattern.beam(j)[link.nearest_sample].phase_rad);
            }
            h.set(n, j, amplitude, phase);
        }
    });
    return h;
}

std::vector<double> equal_split_power(double total_w, std::span<const int> active, std::size_t beams) {
    std::vector<double> power(beams, 0.0);
    std::vector<int> ids(active.begin(), active.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (int b : ids) {
        if (b < 1 || static_cast<std::size_t>(b) > beams) {
            throw InvalidArgument("active beam id " + std::to_string(b) + " out of range");
        }
        power[static_cast<std::size_t>(b - 1)] = total_w / static_cast<double>(ids.size());
    }
    return power;
}

double interference(const ChannelMatrix& h, std::size_t user, std::span<const int> active,
                    std::span<const double> power_w) {
    if (user < 1 || user > h.users()) {
        throw UnknownUser(user);
    }
    if (power_w.size() != h.beams()) {
        throw InvalidArgument("power vector must have one entry per beam");
    }
    std::vector<int> ids(active.begin(), active.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    const int serving = h.serving_beam(user);
    double sum = 0.0;
    for (int j : ids) {
        if (j == serving) {
            continue;
        }
        const double a = h.magnitude(user, j);
        sum += power_w[static_cast<std::size_t>(j - 1)] * a * a;
    }
    return sum;
}

void write_channel_csv(std::ostream& out, const ChannelMatrix& h) {
    out << "user,beam,magnitude,phase_rad\n";
    for (std::size_t n = 1; n <= h.users(); ++n) {
        for (int j = 1; j <= static_cast<int>(h.beams()); ++j) {
            out << n << ',' << j << ',' << csv::fmt(h.magnitude(n, j)) << ',' << csv::fmt(h.phase(n, j)) << '\n';
        }
    }
}

void write_channel_csv(const std::filesystem::path& file, const ChannelMatrix& h) {
    auto out = csv::open_output(file);
    write_channel_csv(out, h);
}

void write_channel_summary(std::ostream& out, const ChannelMatrix& h) {
    auto num = [](double v) { return std::stod(csv::fmt(v)); };
    nlohmann::ordered_json j;
    j["users"] = h.users();
    j["beams"] = h.beams();
    j["wavelength_m"] = num(h.wavelength_m());
    auto& diag = j["diagnostics"] = nlohmann::ordered_json::array();
    for (std::size_t n = 1; n <= h.users(); ++n) {
        const auto& l = h.link(n);
        diag.push_back({{"user", n},
                        {"serving_beam", h.serving_beam(n)},
                        {"slant_range_m", num(l.slant_range_m)},
                        {"path_loss_db", num(l.path_loss_db)},
                        {"interpolated_gain_db", num(l.interpolated_gain_db)},
                        {"nearest_sample", l.nearest_sample}});
    }
    out << j.dump(2) << '\n';
}

void write_channel_summary(const std::filesystem::path& file, const ChannelMatrix& h) {
    auto out = csv::open_output(file);
    write_channel_summary(out, h);
}

}  // namespace beamtraffic
