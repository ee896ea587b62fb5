#pragma once

// Per-terminal complex channel coefficients for every beam, and the
// inter-beam interference they imply.

#include <complex>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "beamtraffic/geo.hpp"
#include "beamtraffic/pattern.hpp"
#include "beamtraffic/traffic.hpp"

namespace beamtraffic {

/// Inverse-distance-weighted (power 2) gain over the 3 nearest samples by
/// great-circle distance; a sample at exactly the user's location returns its
/// own gain. Fewer than 3 samples uses all of them. Throws InvalidArgument on
/// an empty sample list.
double interpolate_gain(const GeoPoint& user, std::span<const SamplePoint> samples);

// Same result using a prebuilt grid over the samples' shared locations.
double interpolate_gain(const GeoPoint& user, const SampleGrid& grid, std::span<const SamplePoint> samples);

struct LinkOptions {
    // Multiply the measured pattern phase of the selected sample into each
    // coefficient. Off by default: propagation phase only.
    bool apply_pattern_phase = false;
    unsigned threads = 1;
};

struct UserLink {
    double slant_range_m = 0.0;
    double path_loss_db = 0.0;
    double interpolated_gain_db = 0.0;  // serving-beam gain at the user; diagnostic only
    std::size_t nearest_sample = 0;     // 0-based sample index
};

/// N x eta matrix of complex coefficients stored as magnitude and phase.
/// User and beam arguments are 1-based like the traffic matrix.
class ChannelMatrix {
public:
    ChannelMatrix() = default;
    ChannelMatrix(std::size_t users, std::size_t beams);

    std::size_t users() const { return users_; }
    std::size_t beams() const { return beams_; }

    double magnitude(std::size_t user, int beam) const { return magnitude_[offset(user, beam)]; }
    double phase(std::size_t user, int beam) const { return phase_[offset(user, beam)]; }
    std::complex<double> coefficient(std::size_t user, int beam) const {
        return std::polar(magnitude(user, beam), phase(user, beam));
    }

    int serving_beam(std::size_t user) const { return serving_.at(user - 1); }
    const UserLink& link(std::size_t user) const { return links_.at(user - 1); }
    double wavelength_m() const { return wavelength_m_; }

    void set(std::size_t user, int beam, double magnitude, double phase) {
        magnitude_[offset(user, beam)] = magnitude;
        phase_[offset(user, beam)] = phase;
    }
    void set_user(std::size_t user, int serving, const UserLink& link) {
        serving_.at(user - 1) = serving;
        links_.at(user - 1) = link;
    }
    void set_wavelength(double w) { wavelength_m_ = w; }

private:
    std::size_t offset(std::size_t user, int beam) const;

    std::size_t users_ = 0;
    std::size_t beams_ = 0;
    std::vector<double> magnitude_;
    std::vector<double> phase_;
    std::vector<int> serving_;
    std::vector<UserLink> links_;
    double wavelength_m_ = 0.0;
};

/// For each user n and beam j:
///   d_n from the slant-range formula, PL_n = 20 log10(4 pi d_n / lambda),
///   G_nj = 10 log10 |B(s_n, j)|^2 at the sample s_n nearest the user,
///   A_nj = 10^((G_nj - PL_n + G_Rx) / 20),
///   a_nj = A_nj exp(2 pi i mod(d_n, lambda) / lambda).
/// Throws EmptyPattern or MismatchedBeams.
ChannelMatrix build_channel_matrix(const TrafficMatrix& t, const BeamPattern& pattern, const ScenarioConfig& cfg,
                                   const LinkOptions& options = {});

// total_w / |active| for each active beam, zero elsewhere; indexed beam - 1.
std::vector<double> equal_split_power(double total_w, std::span<const int> active, std::size_t beams);

/// Sum over active beams other than the user's serving beam of
/// power[j - 1] * |a_nj|^2, in watts. Duplicate beam ids count once.
double interference(const ChannelMatrix& h, std::size_t user, std::span<const int> active,
                    std::span<const double> power_w);

void write_channel_csv(std::ostream& out, const ChannelMatrix& h);
void write_channel_csv(const std::filesystem::path& file, const ChannelMatrix& h);

// N, eta, wavelength and per-user d_n, PL_n, interpolated gain, nearest sample.
void write_channel_summary(std::ostream& out, const ChannelMatrix& h);
void write_channel_summary(const std::filesystem::path& file, const ChannelMatrix& h);

}  // namespace beamtraffic
