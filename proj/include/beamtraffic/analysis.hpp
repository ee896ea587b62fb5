#pragma once

// Reporting over traffic and channel matrices: hourly demand profiles,
// hot/warm/cold beam classification and interference-vs-active-beams sweeps.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "beamtraffic/geo.hpp"
#include "beamtraffic/ingest.hpp"
#include "beamtraffic/linkbudget.hpp"
#include "beamtraffic/pattern.hpp"

namespace beamtraffic {

/// Demand per (beam, hour, type). Beam 0 aggregates the whole coverage and
/// type 0 aggregates all terminal types; beams 1..eta and types 1..3 are the
/// individual series. Each series of 24 hourly values is also normalized by
/// its own maximum.
class HourlyProfile {
public:
    static constexpr int kHours = 24;
    static constexpr int kTypes = 4;  // 0 = all, 1 = fss, 2 = aero, 3 = maritime

    explicit HourlyProfile(std::size_t beams = 0);

    std::size_t beams() const { return beams_; }

    void add(int beam, int hour, TerminalType type, double mbps);

    double demand(int beam, int hour, int type) const { return demand_[at(beam, hour, type)]; }
    double normalized(int beam, int hour, int type) const { return normalized_[at(beam, hour, type)]; }
    bool all_zero(int beam, int type) const { return series_zero_[beam * kTypes + type] != 0; }

    // Mean over the 24 hours of a beam's all-type demand.
    double mean_hourly(int beam) const;

    // Recomputes every normalized series from the raw demand.
    void normalize();

private:
    std::size_t at(int beam, int hour, int type) const;

    std::size_t beams_;
    std::vector<double> demand_;
    std::vector<double> normalized_;
    std::vector<char> series_zero_;
};

/// Divides a series by its maximum. An all-zero series is returned as zeros.
std::vector<double> normalize_series(std::span<const double> series);

/// Builds a traffic matrix per snapshot and accumulates per beam, hour and
/// type. Snapshots must have distinct hours; hours without a snapshot stay
/// zero. Throws InvalidArgument on an empty or duplicated snapshot set.
HourlyProfile hourly_profiles(std::span<const DemandSnapshot> snapshots,
                              const std::vector<BeamFootprint>& footprints, const BeamPattern& pattern,
                              unsigned threads = 1);

enum class BeamClass { Cold, Warm, Hot };
std::string_view to_string(BeamClass c);

struct BeamThresholds {
    double lower = 0.0;  // below: cold
    double upper = 0.0;  // above: hot
};

struct BeamClassification {
    int beam_id = 0;
    BeamClass cls = BeamClass::Warm;
    double mean_mbps = 0.0;
};

/// 25th and 75th percentiles (linear interpolation) of per-beam mean demand.
BeamThresholds default_thresholds(const HourlyProfile& profile);

/// Hot if mean > upper, cold if mean < lower, otherwise warm. Throws
/// BadThresholds unless upper > lower >= 0.
std::vector<BeamClassification> classify_beams(const HourlyProfile& profile, const BeamThresholds& t);

enum class SweepMode { Random, Exhaustive };

struct SweepOptions {
    std::vector<int> sizes{2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::size_t users = 5;            // sampled without replacement; all users when >= N
    std::vector<std::size_t> user_ids;  // explicit users (1-based); overrides `users`
    int trials = 100;
    std::uint64_t seed = 7;
    SweepMode mode = SweepMode::Random;
    // Fixed watts per active beam; <= 0 selects an equal split of total power.
    double beam_power_w = 0.0;
};

struct SweepRow {
    std::size_t user = 0;
    int size = 0;
    double mean_w = 0.0;
    double std_error_w = 0.0;  // standard error of the mean; 0 in exhaustive mode
    std::size_t samples = 0;
};

/// Mean interference at each selected user for each active-set size. Active
/// sets always contain the user's serving beam plus size - 1 others drawn
/// uniformly without replacement (Random) or enumerated (Exhaustive).
std::vector<SweepRow> interference_sweep(const ChannelMatrix& h, const ScenarioConfig& cfg,
                                         const SweepOptions& options);

void write_profile_csv(std::ostream& out, const HourlyProfile& p);
void write_profile_csv(const std::filesystem::path& file, const HourlyProfile& p);
void write_beam_class_csv(std::ostream& out, std::span<const BeamClassification> c);
void write_beam_class_csv(const std::filesystem::path& file, std::span<const BeamClassification> c);
void write_interference_csv(std::ostream& out, std::span<const SweepRow> rows);
void write_interference_csv(const std::filesystem::path& file, std::span<const SweepRow> rows);

}  // namespace beamtraffic
