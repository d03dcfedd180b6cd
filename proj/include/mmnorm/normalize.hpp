#pragma once

#include <cstddef>
#include <vector>

#include "mmnorm/netmodel.hpp"

namespace mmnorm {

/// One tier after normalization to unit transmit power and unit directivity:
/// densities and the LOS cutoff are rescaled so nearest-point statistics of
/// the received power are preserved.
struct ScaledTier {
    double scaled_density = 0.0;
    double scaled_radius = 0.0;   // LOS cutoff after rescaling, meters
    std::size_t source_tier = 0;
    int gain_state = 0;           // 0 = NLOS; 1..4 = LOS lobe alignment state

    bool operator==(const ScaledTier&) const = default;
};

/// LOS normalization of one tier under composite directivity `gain`:
/// density scales by (power*gain)^(2/alpha_los), the LOS cutoff by
/// (power*gain)^(-1/alpha_los).
ScaledTier scale_tier_los(const TierConfig& tier, double gain, double alpha_los,
                          double los_radius, std::size_t source_tier = 0,
                          int gain_state = 1);

/// NLOS normalization of one tier (no directivity on NLOS links): density
/// scales by power^(2/alpha_nlos), the cutoff by power^(-1/alpha_nlos).
ScaledTier scale_tier_nlos(const TierConfig& tier, double alpha_nlos,
                           double los_radius, std::size_t source_tier = 0);

/// Radial density profile that is constant between consecutive breakpoints.
/// `values` has one more entry than `breakpoints`; values[i] applies on
/// (breakpoints[i-1], breakpoints[i]], values.back() beyond the last
/// breakpoint. `prefactor` is the independent thinning retained by each
/// point (LOS or blockage probability); it is stored separately because the
/// two density modes apply it differently.
class PiecewiseDensity {
public:
    PiecewiseDensity(std::vector<double> breakpoints, std::vector<double> values,
                     double prefactor);

    /// Segment value at x (prefactor not applied). Segments are closed on the
    /// right: density_at(breakpoints[i]) returns values[i].
    double density_at(double x) const;

    /// prefactor * density_at(x).
    double effective_density_at(double x) const;

    /// Mean number of points of the thinned process within radius x:
    /// integral of 2*pi*t*prefactor*value(t) over (0, x].
    double cumulative_intensity(double x) const;

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& values() const { return values_; }
    double prefactor() const { return prefactor_; }
    double tail_value() const { return values_.back(); }

    bool operator==(const PiecewiseDensity&) const = default;

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
    double prefactor_ = 1.0;
    std::vector<double> intensity_at_break_;  // cumulative_intensity at each breakpoint
};

double density_at(const PiecewiseDensity& profile, double x);

/// Virtual single-tier LOS density seen under lobe alignment state j (1..4).
/// Tiers are rescaled with their per-tier directivity, then superposed: the
/// profile steps down at each scaled cutoff and is zero beyond the largest
/// one. The prefactor is the LOS fraction.
PiecewiseDensity build_los_profile(const NetworkConfig& config, int alignment_state);

struct NlosProfiles {
    /// Blocked points inside the scaled cutoffs; prefactor 1 - los_fraction,
    /// profile steps down to zero at the largest cutoff.
    PiecewiseDensity inner;
    /// Points beyond the cutoffs (always NLOS there); zero until the smallest
    /// cutoff, steps up to the full scaled density afterwards, prefactor 1.
    PiecewiseDensity outer;
};

NlosProfiles build_nlos_profiles(const NetworkConfig& config);

}  // namespace mmnorm
