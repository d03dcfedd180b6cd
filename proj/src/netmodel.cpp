#include "mmnorm/netmodel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mmnorm {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) {
    if (!(linear > 0.0))
        throw std::domain_error("linear_to_db: value must be positive");
    return 10.0 * std::log10(linear);
}

double deg_to_rad(double deg) { return deg * (kPi / 180.0); }

double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

GainPair main_lobe_gain(double beamwidth, double sidelobe) {
    if (!(beamwidth > 0.0) || beamwidth > kTwoPi)
        throw std::domain_error("main_lobe_gain: beamwidth must lie in (0, 2*pi]");
    if (!(sidelobe >= 0.0) || sidelobe >= 1.0)
        throw std::domain_error("main_lobe_gain: side lobe level must lie in [0, 1)");
    const double main = (kTwoPi - (kTwoPi - beamwidth) * sidelobe) / beamwidth;
    return {main, sidelobe};
}

AntennaPattern AntennaPattern::derived(double beamwidth, double sidelobe) {
    AntennaPattern p;
    p.mode = PatternMode::Derived;
    p.beamwidth = beamwidth;
    p.sidelobe = sidelobe;
    const GainPair g = main_lobe_gain(beamwidth, sidelobe);
    p.main_gain = g.main_gain;
    p.side_gain = g.side_gain;
    p.validate();
    return p;
}

AntennaPattern AntennaPattern::explicit_gains(double beamwidth, double main_gain,
                                              double side_gain) {
    AntennaPattern p;
    p.mode = PatternMode::Explicit;
    p.beamwidth = beamwidth;
    p.main_gain = main_gain;
    p.side_gain = side_gain;
    p.validate();
    return p;
}

AntennaPattern AntennaPattern::with_beamwidth(double new_beamwidth) const {
    if (mode == PatternMode::Derived) return derived(new_beamwidth, sidelobe);
    return explicit_gains(new_beamwidth, main_gain, side_gain);
}

void AntennaPattern::validate() const {
    if (!(beamwidth > 0.0) || !(beamwidth < kTwoPi))
        throw std::domain_error("antenna pattern: beamwidth must lie in (0, 2*pi)");
    if (mode == PatternMode::Derived) {
        if (!(sidelobe >= 0.0) || sidelobe >= 1.0)
            throw std::domain_error(
                "antenna pattern: side lobe level must lie in [0, 1)");
    }
    if (!(main_gain > side_gain))
        throw std::domain_error(
            "antenna pattern: main gain must exceed side gain");
    if (!(side_gain >= 0.0))
        throw std::domain_error("antenna pattern: side gain must be >= 0");
}

DirectivityLevels directivity_levels(const AntennaPattern& bs,
                                     const AntennaPattern& ue) {
    bs.validate();
    ue.validate();
    DirectivityLevels d;
    d.a[0] = bs.main_gain * ue.main_gain;
    d.a[1] = bs.main_gain * ue.side_gain;
    d.a[2] = bs.side_gain * ue.main_gain;
    d.a[3] = bs.side_gain * ue.side_gain;
    return d;
}

void TierConfig::validate() const {
    if (!(power > 0.0)) throw std::domain_error("tier: power must be positive");
    if (!(density > 0.0)) throw std::domain_error("tier: density must be positive");
    if (beamwidth && (!(*beamwidth > 0.0) || !(*beamwidth < kTwoPi)))
        throw std::domain_error("tier: beamwidth override must lie in (0, 2*pi)");
}

void BlockageModel::validate() const {
    if (!(los_fraction >= 0.0) || !(los_fraction <= 1.0))
        throw std::domain_error("blockage: LOS fraction must lie in [0, 1]");
    if (!(los_radius > 0.0))
        throw std::domain_error("blockage: LOS radius must be positive");
}

double los_probability(double distance, const BlockageModel& blockage) {
    if (!(distance >= 0.0))
        throw std::domain_error("los_probability: distance must be >= 0");
    return distance <= blockage.los_radius ? blockage.los_fraction : 0.0;
}

double path_loss(double distance, double alpha) {
    if (!(distance > 0.0))
        throw std::domain_error("path_loss: distance must be positive");
    if (!(alpha > 0.0))
        throw std::domain_error("path_loss: exponent must be positive");
    return std::pow(distance, -alpha);
}

void ChannelModel::validate() const {
    if (!(alpha_los > 0.0) || !(alpha_nlos > 0.0))
        throw std::domain_error("channel: path loss exponents must be positive");
    if (!(alpha_los < alpha_nlos))
        throw std::domain_error(
            "channel: LOS exponent must be smaller than NLOS exponent");
    if (!(fading_rate > 0.0))
        throw std::domain_error("channel: fading rate must be positive");
    if (!(noise > 0.0))
        throw std::domain_error("channel: noise power must be positive");
}

void NetworkConfig::validate() const {
    if (tiers.empty())
        throw std::domain_error("network: at least one tier is required");
    for (const TierConfig& t : tiers) t.validate();
    bs_pattern.validate();
    ue_pattern.validate();
    blockage.validate();
    channel.validate();
    if (!(steering_sigma >= 0.0))
        throw std::domain_error("network: steering sigma must be >= 0");
}

AntennaPattern NetworkConfig::tier_bs_pattern(std::size_t k) const {
    if (k >= tiers.size())
        throw std::out_of_range("network: tier index out of range");
    const TierConfig& t = tiers[k];
    if (t.beamwidth) return bs_pattern.with_beamwidth(*t.beamwidth);
    return bs_pattern;
}

DirectivityLevels NetworkConfig::tier_directivity(std::size_t k) const {
    return directivity_levels(tier_bs_pattern(k), ue_pattern);
}

}  // namespace mmnorm
