#include "mmnorm/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace mmnorm {

ScaledTier scale_tier_los(const TierConfig& tier, double gain, double alpha_los,
                          double los_radius, std::size_t source_tier,
                          int gain_state) {
    tier.validate();
    if (!(gain > 0.0))
        throw std::domain_error("scale_tier_los: composite gain must be positive");
    if (!(alpha_los > 0.0))
        throw std::domain_error("scale_tier_los: path loss exponent must be positive");
    if (!(los_radius > 0.0))
        throw std::domain_error("scale_tier_los: LOS radius must be positive");
    if (gain_state < 1 || gain_state > 4)
        throw std::domain_error("scale_tier_los: gain state must lie in 1..4");
    const double pa = tier.power * gain;
    ScaledTier s;
    s.scaled_density = std::pow(pa, 2.0 / alpha_los) * tier.density;
    s.scaled_radius = los_radius * std::pow(pa, -1.0 / alpha_los);
    s.source_tier = source_tier;
    s.gain_state = gain_state;
    return s;
}

ScaledTier scale_tier_nlos(const TierConfig& tier, double alpha_nlos,
                           double los_radius, std::size_t source_tier) {
    tier.validate();
    if (!(alpha_nlos > 0.0))
        throw std::domain_error("scale_tier_nlos: path loss exponent must be positive");
    if (!(los_radius > 0.0))
        throw std::domain_error("scale_tier_nlos: LOS radius must be positive");
    ScaledTier s;
    s.scaled_density = std::pow(tier.power, 2.0 / alpha_nlos) * tier.density;
    s.scaled_radius = los_radius * std::pow(tier.power, -1.0 / alpha_nlos);
    s.source_tier = source_tier;
    s.gain_state = 0;
    return s;
}

PiecewiseDensity::PiecewiseDensity(std::vector<double> breakpoints,
                                   std::vector<double> values, double prefactor)
    : breakpoints_(std::move(breakpoints)),
      values_(std::move(values)),
      prefactor_(prefactor) {
    if (values_.size() != breakpoints_.size() + 1)
        throw std::domain_error(
            "piecewise density: need exactly one more value than breakpoints");
    double prev = 0.0;
    for (double b : breakpoints_) {
        if (!std::isfinite(b) || !(b > prev))
            throw std::domain_error(
                "piecewise density: breakpoints must be positive and strictly "
                "increasing");
        prev = b;
    }
    for (double v : values_)
        if (!std::isfinite(v) || !(v >= 0.0))
            throw std::domain_error("piecewise density: values must be >= 0");
    if (!(prefactor_ >= 0.0) || !(prefactor_ <= 1.0))
        throw std::domain_error("piecewise density: prefactor must lie in [0, 1]");

    intensity_at_break_.reserve(breakpoints_.size());
    double acc = 0.0;
    double left = 0.0;
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        const double right = breakpoints_[i];
        acc += kPi * (right * right - left * left) * values_[i] * prefactor_;
        intensity_at_break_.push_back(acc);
        left = right;
    }
}

double PiecewiseDensity::density_at(double x) const {
    if (!(x >= 0.0))
        throw std::domain_error("piecewise density: distance must be >= 0");
    const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
    return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

double PiecewiseDensity::effective_density_at(double x) const {
    return prefactor_ * density_at(x);
}

double PiecewiseDensity::cumulative_intensity(double x) const {
    if (!(x >= 0.0))
        throw std::domain_error("piecewise density: distance must be >= 0");
    const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - breakpoints_.begin());
    const double base = i == 0 ? 0.0 : intensity_at_break_[i - 1];
    const double left = i == 0 ? 0.0 : breakpoints_[i - 1];
    return base + kPi * (x * x - left * left) * values_[i] * prefactor_;
}

double density_at(const PiecewiseDensity& profile, double x) {
    return profile.density_at(x);
}

namespace {

// radius -> density mass at that exact radius, duplicates merged
std::vector<std::pair<double, double>> merged_cutoffs(
    const std::vector<ScaledTier>& scaled) {
    std::vector<std::pair<double, double>> cut;
    cut.reserve(scaled.size());
    for (const ScaledTier& s : scaled)
        cut.emplace_back(s.scaled_radius, s.scaled_density);
    std::sort(cut.begin(), cut.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& [r, lam] : cut) {
        if (!merged.empty() && merged.back().first == r)
            merged.back().second += lam;
        else
            merged.emplace_back(r, lam);
    }
    return merged;
}

// Steps down at each cutoff: the segment left of a cutoff collects every
// tier whose cutoff lies at or beyond it. Zero after the last cutoff.
PiecewiseDensity stepping_down(const std::vector<ScaledTier>& scaled,
                               double prefactor) {
    const auto merged = merged_cutoffs(scaled);
    std::vector<double> breaks(merged.size());
    std::vector<double> values(merged.size() + 1);
    values.back() = 0.0;
    for (std::size_t i = merged.size(); i-- > 0;) {
        breaks[i] = merged[i].first;
        values[i] = values[i + 1] + merged[i].second;
    }
    return PiecewiseDensity(std::move(breaks), std::move(values), prefactor);
}

// Steps up at each cutoff: a tier contributes only beyond its own cutoff.
// Zero before the first cutoff, full scaled density after the last.
PiecewiseDensity stepping_up(const std::vector<ScaledTier>& scaled,
                             double prefactor) {
    const auto merged = merged_cutoffs(scaled);
    std::vector<double> breaks(merged.size());
    std::vector<double> values(merged.size() + 1);
    values[0] = 0.0;
    for (std::size_t i = 0; i < merged.size(); ++i) {
        breaks[i] = merged[i].first;
        values[i + 1] = values[i] + merged[i].second;
    }
    return PiecewiseDensity(std::move(breaks), std::move(values), prefactor);
}

}  // namespace

PiecewiseDensity build_los_profile(const NetworkConfig& config,
                                   int alignment_state) {
    config.validate();
    if (alignment_state < 1 || alignment_state > 4)
        throw std::domain_error("build_los_profile: alignment state must lie in 1..4");
    std::vector<ScaledTier> scaled;
    scaled.reserve(config.tiers.size());
    for (std::size_t k = 0; k < config.tiers.size(); ++k) {
        const double gain =
            config.tier_directivity(k).a[static_cast<std::size_t>(alignment_state - 1)];
        scaled.push_back(scale_tier_los(config.tiers[k], gain,
                                        config.channel.alpha_los,
                                        config.blockage.los_radius, k,
                                        alignment_state));
    }
    return stepping_down(scaled, config.blockage.los_fraction);
}

NlosProfiles build_nlos_profiles(const NetworkConfig& config) {
    config.validate();
    std::vector<ScaledTier> scaled;
    scaled.reserve(config.tiers.size());
    for (std::size_t k = 0; k < config.tiers.size(); ++k)
        scaled.push_back(scale_tier_nlos(config.tiers[k], config.channel.alpha_nlos,
                                         config.blockage.los_radius, k));
    return NlosProfiles{
        stepping_down(scaled, 1.0 - config.blockage.los_fraction),
        stepping_up(scaled, 1.0),
    };
}

}  // namespace mmnorm
