#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace mmnorm {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

double db_to_linear(double db);
double linear_to_db(double linear);
double deg_to_rad(double deg);
double rad_to_deg(double rad);

/// Main/side lobe gains of a sectored antenna with beamwidth `beamwidth`
/// (radians) and side lobe level `sidelobe` (linear, in [0,1)). The main
/// gain follows from conservation of radiated power over the circle:
/// beamwidth*main + (2*pi - beamwidth)*side == 2*pi.
struct GainPair {
    double main_gain;
    double side_gain;
};

GainPair main_lobe_gain(double beamwidth, double sidelobe);

enum class PatternMode { Derived, Explicit };

/// Sectored antenna pattern. In Derived mode the main gain is computed from
/// the side lobe level so radiated power is conserved; in Explicit mode both
/// gains are given directly and need not conserve power.
struct AntennaPattern {
    PatternMode mode = PatternMode::Explicit;
    double beamwidth = 0.0;   // radians, in (0, 2*pi)
    double sidelobe = 0.0;    // linear side lobe level, Derived mode only
    double main_gain = 1.0;   // linear
    double side_gain = 1.0;   // linear

    static AntennaPattern derived(double beamwidth, double sidelobe);
    static AntennaPattern explicit_gains(double beamwidth, double main_gain,
                                         double side_gain);

    /// Same pattern re-pointed to a new beamwidth. Derived patterns recompute
    /// the main gain; explicit patterns keep their gains.
    AntennaPattern with_beamwidth(double new_beamwidth) const;

    void validate() const;

    bool operator==(const AntennaPattern&) const = default;
};

/// Composite BS/UE directivity for the four lobe alignment states, ordered
/// main/main, main/side, side/main, side/side.
struct DirectivityLevels {
    std::array<double, 4> a{};

    bool operator==(const DirectivityLevels&) const = default;
};

DirectivityLevels directivity_levels(const AntennaPattern& bs,
                                     const AntennaPattern& ue);

struct TierConfig {
    double power = 1.0;    // transmit power, watts
    double density = 0.0;  // BS density, per m^2
    std::optional<double> beamwidth;  // per-tier BS beamwidth override, radians

    void validate() const;

    bool operator==(const TierConfig&) const = default;
};

/// Distance-limited LOS model: a link of length x is line-of-sight with
/// probability `los_fraction` inside `los_radius` and never beyond it.
struct BlockageModel {
    double los_fraction = 0.117;
    double los_radius = 200.0;  // meters

    void validate() const;

    bool operator==(const BlockageModel&) const = default;
};

double los_probability(double distance, const BlockageModel& blockage);

/// Unbounded power-law path loss x^-alpha.
double path_loss(double distance, double alpha);

struct ChannelModel {
    double alpha_los = 2.0;
    double alpha_nlos = 4.0;
    double fading_rate = 1.0;  // rate of the exponential small-scale fading
    double noise = 1.0;        // noise power, linear

    void validate() const;

    bool operator==(const ChannelModel&) const = default;
};

struct NetworkConfig {
    std::vector<TierConfig> tiers;
    AntennaPattern bs_pattern;
    AntennaPattern ue_pattern;
    BlockageModel blockage;
    ChannelModel channel;
    double steering_sigma = 0.0;  // beam steering error std dev, radians

    void validate() const;

    /// BS pattern for tier k, honoring the tier's beamwidth override.
    AntennaPattern tier_bs_pattern(std::size_t k) const;
    DirectivityLevels tier_directivity(std::size_t k) const;

    bool operator==(const NetworkConfig&) const = default;
};

}  // namespace mmnorm
