#include "beamtraffic/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>

#include "beamtraffic/csv.hpp"
#include "beamtraffic/error.hpp"
#include "beamtraffic/rng.hpp"
#include "beamtraffic/traffic.hpp"

namespace beamtraffic {

HourlyProfile::HourlyProfile(std::size_t beams)
    : beams_(beams),
      demand_((beams + 1) * kHours * kTypes, 0.0),
      normalized_((beams + 1) * kHours * kTypes, 0.0),
      series_zero_((beams + 1) * kTypes, 1) {}

std::size_t HourlyProfile::at(int beam, int hour, int type) const {
    if (beam < 0 || static_cast<std::size_t>(beam) > beams_ || hour < 0 || hour >= kHours || type < 0 ||
        type >= kTypes) {
        throw InvalidArgument("profile index out of range");
    }
    return (static_cast<std::size_t>(beam) * kHours + static_cast<std::size_t>(hour)) * kTypes +
           static_cast<std::size_t>(type);
}

void HourlyProfile::add(int beam, int hour, TerminalType type, double mbps) {
    const int t = static_cast<int>(type);
    for (int b : {0, beam}) {
        demand_[at(b, hour, t)] += mbps;
        demand_[at(b, hour, 0)] += mbps;
    }
}

double HourlyProfile::mean_hourly(int beam) const {
    double sum = 0.0;
    for (int h = 0; h < kHours; ++h) {
        sum += demand(beam, h, 0);
    }
    return sum / kHours;
}

void HourlyProfile::normalize() {
    std::vector<double> series(kHours);
    for (int b = 0; b <= static_cast<int>(beams_); ++b) {
        for (int t = 0; t < kTypes; ++t) {
            for (int h = 0; h < kHours; ++h) {
                series[static_cast<std::size_t>(h)] = demand(b, h, t);
            }
            const auto norm = normalize_series(series);
            bool zero = true;
            for (int h = 0; h < kHours; ++h) {
                normalized_[at(b, h, t)] = norm[static_cast<std::size_t>(h)];
                zero = zero && series[static_cast<std::size_t>(h)] == 0.0;
            }
            series_zero_[static_cast<std::size_t>(b * kTypes + t)] = zero;
        }
    }
}

std::vector<double> normalize_series(std::span<const double> series) {
    std::vector<double> out(series.begin(), series.end());
    const double peak = series.empty() ? 0.0 : *std::max_element(series.begin(), series.end());
    if (peak > 0.0) {
        for (auto& v : out) {
            v /= peak;
        }
    } else {
        std::fill(out.begin(), out.end(), 0.0);
    }
    return out;
}

HourlyProfile hourly_profiles(std::span<const DemandSnapshot> snapshots,
                              const std::vector<BeamFootprint>& footprints, const BeamPattern& pattern,
                              unsigned threads) {
    if (snapshots.empty()) {
        throw InvalidArgument("no demand snapshots");
    }
    std::set<int> hours;
    for (const auto& s : snapshots) {
        if (s.hour < 0 || s.hour > 23) {
            throw InvalidArgument("snapshot hour out of range: " + std::to_string(s.hour));
        }
        if (!hours.insert(s.hour).second) {
            throw InvalidArgument("duplicate snapshot for hour " + std::to_string(s.hour));
        }
    }
    HourlyProfile profile(pattern.beam_count());
    for (const auto& s : snapshots) {
        const auto t = build_traffic_matrix(footprints, pattern, s.fss, s.aero, s.maritime, threads);
        for (const auto& r : t.rows) {
            profile.add(r.beam, s.hour, r.type, r.demand_mbps);
        }
    }
    profile.normalize();
    return profile;
}

std::string_view to_string(BeamClass c) {
    switch (c) {
        case BeamClass::Cold: return "cold";
        case BeamClass::Warm: return "warm";
        case BeamClass::Hot: return "hot";
    }
    return "unknown";
}

BeamThresholds default_thresholds(const HourlyProfile& profile) {
    std::vector<double> means;
    for (int b = 1; b <= static_cast<int>(profile.beams()); ++b) {
        means.push_back(profile.mean_hourly(b));
    }
    if (means.empty()) {
        return {};
    }
    std::sort(means.begin(), means.end());
    auto percentile = [&](double q) {
        const double pos = q * static_cast<double>(means.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, means.size() - 1);
        return means[lo] + (pos - static_cast<double>(lo)) * (means[hi] - means[lo]);
    };
    return {percentile(0.25), percentile(0.75)};
}

std::vector<BeamClassification> classify_beams(const HourlyProfile& profile, const BeamThresholds& t) {
    if (!(t.lower >= 0.0) || !(t.upper > t.lower)) {
        throw BadThresholds("beam thresholds need upper > lower >= 0 (got lower " + csv::fmt(t.lower) + ", upper " +
                            csv::fmt(t.upper) + ")");
    }
    std::vector<BeamClassification> out;
    for (int b = 1; b <= static_cast<int>(profile.beams()); ++b) {
        const double mean = profile.mean_hourly(b);
        const auto cls = mean > t.upper ? BeamClass::Hot : mean < t.lower ? BeamClass::Cold : BeamClass::Warm;
        out.push_back({b, cls, mean});
    }
    return out;
}

namespace {

double set_interference(const ChannelMatrix& h, std::size_t user, const std::vector<int>& active,
                        const ScenarioConfig& cfg, const SweepOptions& o) {
    std::vector<double> power;
    if (o.beam_power_w > 0.0) {
        power.assign(h.beams(), 0.0);
        for (int b : active) {
            power[static_cast<std::size_t>(b - 1)] = o.beam_power_w;
        }
    } else {
        power = equal_split_power(cfg.total_power_w, active, h.beams());
    }
    return interference(h, user, active, power);
}

double binomial(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) {
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return r;
}

}  // namespace

std::vector<SweepRow> interference_sweep(const ChannelMatrix& h, const ScenarioConfig& cfg,
                                         const SweepOptions& o) {
    const auto beams = static_cast<int>(h.beams());
    for (int s : o.sizes) {
        if (s < 1 || s > beams) {
            throw InvalidArgument("active-set size " + std::to_string(s) + " outside [1, " + std::to_string(beams) +
                                  "]");
        }
    }
    if (o.trials < 1) {
        throw InvalidArgument("trials must be >= 1");
    }
    Rng rng(o.seed);

    std::vector<std::size_t> users = o.user_ids;
    if (users.empty()) {
        std::vector<std::size_t> all(h.users());
        std::iota(all.begin(), all.end(), std::size_t{1});
        if (o.users < all.size()) {
            // Partial Fisher-Yates: the first `users` slots are a uniform sample.
            for (std::size_t i = 0; i < o.users; ++i) {
                std::swap(all[i], all[i + rng.index(all.size() - i)]);
            }
            all.resize(o.users);
        }
        users = std::move(all);
    }
    for (auto u : users) {
        if (u < 1 || u > h.users()) {
            throw UnknownUser(u);
        }
    }

    std::vector<SweepRow> out;
    for (auto user : users) {
        const int serving = h.serving_beam(user);
        std::vector<int> others;
        for (int b = 1; b <= beams; ++b) {
            if (b != serving) {
                others.push_back(b);
            }
        }
        for (int s : o.sizes) {
            const auto pick = static_cast<std::size_t>(s - 1);
            SweepRow row{user, s, 0.0, 0.0, 0};
            if (o.mode == SweepMode::Exhaustive) {
                if (binomial(others.size(), pick) > 1e7) {
                    throw InvalidArgument("exhaustive sweep too large; use random mode");
                }
                std::vector<char> select(others.size(), 0);
                std::fill(select.begin(), select.begin() + static_cast<std::ptrdiff_t>(pick), 1);
                double sum = 0.0;
                do {
                    std::vector<int> active{serving};
                    for (std::size_t i = 0; i < others.size(); ++i) {
                        if (select[i]) {
                            active.push_back(others[i]);
                        }
                    }
                    sum += set_interference(h, user, active, cfg, o);
                    ++row.samples;
                } while (std::prev_permutation(select.begin(), select.end()));
                row.mean_w = sum / static_cast<double>(row.samples);
            } else {
                // Welford's update: identical samples give exactly zero spread.
                double mean = 0.0;
                double m2 = 0.0;
                auto pool = others;
                for (int trial = 0; trial < o.trials; ++trial) {
                    std::vector<int> active{serving};
                    for (std::size_t i = 0; i < pick; ++i) {
                        std::swap(pool[i], pool[i + rng.index(pool.size() - i)]);
                        active.push_back(pool[i]);
                    }
                    const double v = set_interference(h, user, active, cfg, o);
                    const double delta = v - mean;
                    mean += delta / static_cast<double>(trial + 1);
                    m2 += delta * (v - mean);
                }
                const auto n = static_cast<double>(o.trials);
                row.samples = static_cast<std::size_t>(o.trials);
                row.mean_w = mean;
                if (o.trials > 1) {
                    row.std_error_w = std::sqrt(std::max(0.0, m2 / (n - 1.0)) / n);
                }
            }
            out.push_back(row);
        }
    }
    return out;
}

void write_profile_csv(std::ostream& out, const HourlyProfile& p) {
    out << "beam,hour,type,demand_mbps,normalized,all_zero\n";
    for (int b = 0; b <= static_cast<int>(p.beams()); ++b) {
        for (int t = 0; t < HourlyProfile::kTypes; ++t) {
            for (int h = 0; h < HourlyProfile::kHours; ++h) {
                out << b << ',' << h << ',' << t << ',' << csv::fmt(p.demand(b, h, t)) << ','
                    << csv::fmt(p.normalized(b, h, t)) << ',' << (p.all_zero(b, t) ? 1 : 0) << '\n';
            }
        }
    }
}

void write_profile_csv(const std::filesystem::path& file, const HourlyProfile& p) {
    auto out = csv::open_output(file);
    write_profile_csv(out, p);
}

void write_beam_class_csv(std::ostream& out, std::span<const BeamClassification> c) {
    out << "beam,class,mean_mbps\n";
    for (const auto& r : c) {
        out << r.beam_id << ',' << to_string(r.cls) << ',' << csv::fmt(r.mean_mbps) << '\n';
    }
}

void write_beam_class_csv(const std::filesystem::path& file, std::span<const BeamClassification> c) {
    auto out = csv::open_output(file);
    write_beam_class_csv(out, c);
}

void write_interference_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << "user,size,mean_w,std_error_w,samples\n";
    for (const auto& r : rows) {
        out << r.user << ',' << r.size << ',' << csv::fmt(r.mean_w) << ',' << csv::fmt(r.std_error_w) << ','
            << r.samples << '\n';
    }
}

void write_interference_csv(const std::filesystem::path& file, std::span<const SweepRow> rows) {
    auto out = csv::open_output(file);
    write_interference_csv(out, rows);
}

}  // namespace beamtraffic
