#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mmnorm/coverage.hpp"
#include "mmnorm/netmodel.hpp"
#include "mmnorm/normalize.hpp"
#include "mmnorm/rng.hpp"

namespace mmnorm {

enum class SimKind { BranchMirror, Physical };

const char* to_string(SimKind kind);

struct SimConfig {
    NetworkConfig network;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    /// Sampling window. When unset, chosen per process so the probability of
    /// an empty window is below 1e-6, then doubled.
    std::optional<double> window_radius;
    SimKind kind = SimKind::BranchMirror;
    /// Worker count. Purely a scheduling knob: trials draw from streams
    /// derived from (seed, trial index), so results do not depend on it.
    unsigned threads = 1;

    void validate() const;

    bool operator==(const SimConfig&) const = default;
};

struct BranchMeans {
    double los = 0.0;
    double nlos_inner = 0.0;
    double nlos_outer = 0.0;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample std of the per-trial sum / sqrt(trials)
    std::uint64_t trials = 0;
    std::uint64_t outage_trials = 0;  // trials with no point in any branch
    std::optional<BranchMeans> branches;  // BranchMirror only
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Homogeneous Poisson sample on a disk of the given radius: count is
/// Poisson(density*pi*R^2), positions uniform.
std::vector<Point> sample_ppp(double density, double window_radius, Rng& rng);

struct BlockagePartition {
    std::vector<Point> los;
    std::vector<Point> nlos;
};

/// Independent LOS marks for points within the LOS radius (boundary
/// inclusive); everything beyond is NLOS.
BlockagePartition mark_blockage(std::span<const Point> points,
                                const BlockageModel& blockage, Rng& rng);

/// Composite beamforming gain on the serving link: both ends draw a Gaussian
/// steering error and fall back to their side lobe when it exceeds half the
/// beamwidth.
double draw_serving_gain(double beamwidth, double sigma,
                         const DirectivityLevels& levels, Rng& rng);

/// Distance to the nearest point of the thinned inhomogeneous process
/// described by `profile`. A profile with unbounded support is truncated at
/// `tail_window` (required > last breakpoint to sample the tail at all).
/// Returns nothing when the truncated process is empty.
std::optional<double> sample_nearest(const PiecewiseDensity& profile,
                                     double tail_window, Rng& rng);

/// Auto window for a profile per the empty-window rule; equals the last
/// breakpoint when the profile has no tail.
double auto_tail_window(const PiecewiseDensity& profile);

/// Branch-mirror estimator: samples the three scaled processes (the LOS one
/// under a gain state drawn from the alignment weights) and mirrors the
/// analytic branch sum. One pass serves all thresholds; each trial reuses its
/// nearest-point and fading draws across them.
std::vector<McEstimate> run_branch_mirror(const SimConfig& sim,
                                          std::span<const double> thresholds);
McEstimate run_branch_mirror(const SimConfig& sim, double threshold);

/// Physical estimator: samples every tier in original coordinates, marks
/// blockage, associates by strongest mean power, then draws misalignment and
/// fading on the serving link only.
std::vector<McEstimate> run_physical(const SimConfig& sim,
                                     std::span<const double> thresholds);
McEstimate run_physical(const SimConfig& sim, double threshold);

}  // namespace mmnorm
