#include "mmnorm/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace mmnorm {

const char* to_string(SimKind kind) {
    return kind == SimKind::BranchMirror ? "branch-mirror" : "physical";
}

void SimConfig::validate() const {
    network.validate();
    if (trials == 0) throw std::domain_error("sim: trials must be >= 1");
    if (window_radius && !(*window_radius > 0.0))
        throw std::domain_error("sim: window radius must be positive");
    if (threads == 0) throw std::domain_error("sim: threads must be >= 1");
}

std::vector<Point> sample_ppp(double density, double window_radius, Rng& rng) {
    if (!(density >= 0.0))
        throw std::domain_error("sample_ppp: density must be >= 0");
    if (!(window_radius >= 0.0))
        throw std::domain_error("sample_ppp: window radius must be >= 0");
    const double mean = density * kPi * window_radius * window_radius;
    const std::uint64_t count = rng.poisson(mean);
    std::vector<Point> points;
    points.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const double r = window_radius * std::sqrt(rng.uniform());
        const double theta = kTwoPi * rng.uniform();
        points.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
    return points;
}

BlockagePartition mark_blockage(std::span<const Point> points,
                                const BlockageModel& blockage, Rng& rng) {
    blockage.validate();
    BlockagePartition part;
    part.los.reserve(points.size());
    part.nlos.reserve(points.size());
    for (const Point& p : points) {
        const double r = std::sqrt(p.x * p.x + p.y * p.y);
        if (r <= blockage.los_radius && rng.uniform() <= blockage.los_fraction)
            part.los.push_back(p);
        else
            part.nlos.push_back(p);
    }
    return part;
}

double draw_serving_gain(double beamwidth, double sigma,
                         const DirectivityLevels& levels, Rng& rng) {
    const double half = 0.5 * beamwidth;
    const bool bs_on = std::abs(rng.normal(sigma)) <= half;
    const bool ue_on = std::abs(rng.normal(sigma)) <= half;
    return levels.a[static_cast<std::size_t>((bs_on ? 0 : 2) + (ue_on ? 0 : 1))];
}

namespace {

// Mean point count below which an annulus is sampled in one shot. Small
// enough that the inside-out walk almost always stops in the first occupied
// sub-annulus it meets.
constexpr double kSubAnnulusMass = 4.0;

// Nearest point within one annulus [sqrt(a2), sqrt(b2)] of constant density
// lam, walking equal-mass sub-annuli inside out.
std::optional<double> nearest_in_annulus(double a2, double b2, double lam,
                                         Rng& rng) {
    const double mass = kPi * lam * (b2 - a2);
    const auto subs = static_cast<std::uint64_t>(
        std::max(1.0, std::ceil(mass / kSubAnnulusMass)));
    const double step = (b2 - a2) / static_cast<double>(subs);
    for (std::uint64_t s = 0; s < subs; ++s) {
        const double lo = a2 + static_cast<double>(s) * step;
        const double hi = s + 1 == subs ? b2 : lo + step;
        const std::uint64_t n = rng.poisson(kPi * lam * (hi - lo));
        if (n == 0) continue;
        // min of n squared radii uniform on [lo, hi]
        const double beta =
            1.0 - std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
        return std::sqrt(lo + (hi - lo) * beta);
    }
    return std::nullopt;
}

}  // namespace

std::optional<double> sample_nearest(const PiecewiseDensity& profile,
                                     double tail_window, Rng& rng) {
    const std::vector<double>& breaks = profile.breakpoints();
    const std::vector<double>& values = profile.values();
    double left = 0.0;
    for (std::size_t i = 0; i < breaks.size(); ++i) {
        const double lam = profile.prefactor() * values[i];
        if (lam > 0.0) {
            const auto hit =
                nearest_in_annulus(left * left, breaks[i] * breaks[i], lam, rng);
            if (hit) return hit;
        }
        left = breaks[i];
    }
    const double tail_lam = profile.prefactor() * profile.tail_value();
    if (tail_lam > 0.0 && tail_window > left)
        return nearest_in_annulus(left * left, tail_window * tail_window,
                                  tail_lam, rng);
    return std::nullopt;
}

double auto_tail_window(const PiecewiseDensity& profile) {
    const double last =
        profile.breakpoints().empty() ? 0.0 : profile.breakpoints().back();
    const double tail_lam = profile.prefactor() * profile.tail_value();
    if (tail_lam <= 0.0) return last;
    // Reach empty-tail probability below 1e-6, then double.
    const double need = std::log(1e6);
    const double have = profile.cumulative_intensity(last);
    const double w2 =
        last * last + std::max(0.0, need - have) / (kPi * tail_lam);
    return 2.0 * std::sqrt(w2);
}

namespace {

struct Accumulator {
    std::vector<std::uint64_t> sum;      // per threshold, per-trial indicator sum
    std::vector<std::uint64_t> sum_sq;   // its square
    std::vector<std::uint64_t> sum_los;  // per-branch indicator sums
    std::vector<std::uint64_t> sum_inner;
    std::vector<std::uint64_t> sum_outer;
    std::uint64_t outage = 0;

    explicit Accumulator(std::size_t thresholds)
        : sum(thresholds, 0),
          sum_sq(thresholds, 0),
          sum_los(thresholds, 0),
          sum_inner(thresholds, 0),
          sum_outer(thresholds, 0) {}

    void merge(const Accumulator& other) {
        for (std::size_t m = 0; m < sum.size(); ++m) {
            sum[m] += other.sum[m];
            sum_sq[m] += other.sum_sq[m];
            sum_los[m] += other.sum_los[m];
            sum_inner[m] += other.sum_inner[m];
            sum_outer[m] += other.sum_outer[m];
        }
        outage += other.outage;
    }
};

// Integer accumulation makes the reduction order-independent, so the thread
// count cannot change the result.
template <class TrialFn>
Accumulator run_trials(std::uint64_t trials, unsigned threads,
                       std::size_t n_thresholds, const TrialFn& trial) {
    const unsigned workers = static_cast<unsigned>(
        std::min<std::uint64_t>(threads, trials));
    std::vector<Accumulator> parts(workers, Accumulator(n_thresholds));
    const auto chunk = [&](unsigned w) -> std::pair<std::uint64_t, std::uint64_t> {
        const std::uint64_t base = trials / workers, extra = trials % workers;
        const std::uint64_t begin = w * base + std::min<std::uint64_t>(w, extra);
        return {begin, begin + base + (w < extra ? 1 : 0)};
    };
    const auto work = [&](unsigned w) {
        const auto [begin, end] = chunk(w);
        for (std::uint64_t t = begin; t < end; ++t) trial(t, parts[w]);
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w);
    work(0);
    for (std::thread& th : pool) th.join();
    for (unsigned w = 1; w < workers; ++w) parts[0].merge(parts[w]);
    return parts[0];
}

std::vector<McEstimate> finalize(const Accumulator& acc, std::uint64_t trials,
                                 bool with_branches) {
    std::vector<McEstimate> out(acc.sum.size());
    const double n = static_cast<double>(trials);
    for (std::size_t m = 0; m < acc.sum.size(); ++m) {
        McEstimate& e = out[m];
        e.trials = trials;
        e.outage_trials = acc.outage;
        const double s = static_cast<double>(acc.sum[m]);
        e.mean = s / n;
        if (trials > 1) {
            const double var =
                (static_cast<double>(acc.sum_sq[m]) - s * s / n) / (n - 1.0);
            e.std_error = std::sqrt(std::max(0.0, var) / n);
        }
        if (with_branches)
            e.branches = BranchMeans{
                static_cast<double>(acc.sum_los[m]) / n,
                static_cast<double>(acc.sum_inner[m]) / n,
                static_cast<double>(acc.sum_outer[m]) / n,
            };
    }
    return out;
}

}  // namespace

std::vector<McEstimate> run_branch_mirror(const SimConfig& sim,
                                          std::span<const double> thresholds) {
    sim.validate();
    const NetworkConfig& cfg = sim.network;
    const double mu = cfg.channel.fading_rate;
    const double noise = cfg.channel.noise;
    const double alpha_los = cfg.channel.alpha_los;
    const double alpha_nlos = cfg.channel.alpha_nlos;

    const AlignmentDistribution dist = alignment_distribution(
        cfg.bs_pattern.beamwidth, cfg.ue_pattern.beamwidth, cfg.steering_sigma,
        directivity_levels(cfg.bs_pattern, cfg.ue_pattern));

    std::array<std::optional<PiecewiseDensity>, 4> los_profiles;
    std::array<double, 4> los_windows{};
    for (int j = 1; j <= 4; ++j) {
        const auto idx = static_cast<std::size_t>(j - 1);
        if (dist.weights[idx] == 0.0 || dist.gains[idx] == 0.0) continue;
        los_profiles[idx] = build_los_profile(cfg, j);
        los_windows[idx] =
            sim.window_radius.value_or(auto_tail_window(*los_profiles[idx]));
    }
    const NlosProfiles nlos = build_nlos_profiles(cfg);
    const double inner_window =
        sim.window_radius.value_or(auto_tail_window(nlos.inner));
    const double outer_window =
        sim.window_radius.value_or(auto_tail_window(nlos.outer));

    const auto trial = [&](std::uint64_t t, Accumulator& acc) {
        Rng rng(sim.seed, t);

        // gain state for this trial's LOS link
        const double u = rng.uniform();
        std::size_t j = 0;
        for (double cum = 0.0; j < 3; ++j) {
            cum += dist.weights[j];
            if (u <= cum) break;
        }

        std::optional<double> x_los;
        if (los_profiles[j])
            x_los = sample_nearest(*los_profiles[j], los_windows[j], rng);
        const std::optional<double> x_inner =
            sample_nearest(nlos.inner, inner_window, rng);
        const std::optional<double> x_outer =
            sample_nearest(nlos.outer, outer_window, rng);
        if (!x_los && !x_inner && !x_outer) ++acc.outage;

        // One fading draw per branch, shared across thresholds.
        double z_los = 0.0, z_inner = 0.0, z_outer = 0.0;
        if (x_los) z_los = rng.exponential(mu) / std::pow(*x_los, alpha_los);
        if (x_inner)
            z_inner = rng.exponential(mu) / std::pow(*x_inner, alpha_nlos);
        if (x_outer)
            z_outer = rng.exponential(mu) / std::pow(*x_outer, alpha_nlos);

        for (std::size_t m = 0; m < thresholds.size(); ++m) {
            const double tn = thresholds[m] * noise;
            const std::uint64_t i_los = x_los && z_los > tn ? 1 : 0;
            const std::uint64_t i_inner = x_inner && z_inner > tn ? 1 : 0;
            const std::uint64_t i_outer = x_outer && z_outer > tn ? 1 : 0;
            const std::uint64_t total = i_los + i_inner + i_outer;
            acc.sum[m] += total;
            acc.sum_sq[m] += total * total;
            acc.sum_los[m] += i_los;
            acc.sum_inner[m] += i_inner;
            acc.sum_outer[m] += i_outer;
        }
    };

    for (double threshold : thresholds)
        if (!(threshold >= 0.0))
            throw std::domain_error("run_branch_mirror: thresholds must be >= 0");
    const Accumulator acc =
        run_trials(sim.trials, sim.threads, thresholds.size(), trial);
    return finalize(acc, sim.trials, true);
}

McEstimate run_branch_mirror(const SimConfig& sim, double threshold) {
    return run_branch_mirror(sim, std::span<const double>(&threshold, 1))[0];
}

std::vector<McEstimate> run_physical(const SimConfig& sim,
                                     std::span<const double> thresholds) {
    sim.validate();
    const NetworkConfig& cfg = sim.network;
    const double mu = cfg.channel.fading_rate;
    const double noise = cfg.channel.noise;
    const double alpha_los = cfg.channel.alpha_los;
    const double alpha_nlos = cfg.channel.alpha_nlos;
    const std::size_t tiers = cfg.tiers.size();

    std::vector<AntennaPattern> patterns(tiers);
    std::vector<DirectivityLevels> levels(tiers);
    std::vector<double> windows(tiers);
    for (std::size_t k = 0; k < tiers; ++k) {
        patterns[k] = cfg.tier_bs_pattern(k);
        levels[k] = directivity_levels(patterns[k], cfg.ue_pattern);
        // Window covers the LOS ball and is wide enough that an empty window
        // has probability below 1e-6, doubled for margin.
        const double r_void =
            2.0 * std::sqrt(std::log(1e6) / (kPi * cfg.tiers[k].density));
        windows[k] =
            sim.window_radius.value_or(std::max(cfg.blockage.los_radius, r_void));
    }

    const auto trial = [&](std::uint64_t t, Accumulator& acc) {
        Rng rng(sim.seed, t);

        bool found = false, serving_los = false;
        double best_power = 0.0, serving_r = 0.0;
        std::size_t serving_tier = 0;
        for (std::size_t k = 0; k < tiers; ++k) {
            const std::vector<Point> pts =
                sample_ppp(cfg.tiers[k].density, windows[k], rng);
            const BlockagePartition part =
                mark_blockage(pts, cfg.blockage, rng);
            const double p_k = cfg.tiers[k].power;
            const double a1 = levels[k].a[0];
            for (const Point& p : part.los) {
                const double r = std::sqrt(p.x * p.x + p.y * p.y);
                const double mean_power = p_k * a1 * std::pow(r, -alpha_los);
                if (!found || mean_power > best_power) {
                    found = true;
                    serving_los = true;
                    best_power = mean_power;
                    serving_r = r;
                    serving_tier = k;
                }
            }
            for (const Point& p : part.nlos) {
                const double r = std::sqrt(p.x * p.x + p.y * p.y);
                const double mean_power = p_k * std::pow(r, -alpha_nlos);
                if (!found || mean_power > best_power) {
                    found = true;
                    serving_los = false;
                    best_power = mean_power;
                    serving_r = r;
                    serving_tier = k;
                }
            }
        }

        if (!found) {
            ++acc.outage;
            return;
        }

        double signal;
        if (serving_los) {
            const double gain =
                draw_serving_gain(patterns[serving_tier].beamwidth,
                                  cfg.steering_sigma, levels[serving_tier], rng);
            signal = cfg.tiers[serving_tier].power * gain *
                     rng.exponential(mu) * std::pow(serving_r, -alpha_los);
        } else {
            signal = cfg.tiers[serving_tier].power * rng.exponential(mu) *
                     std::pow(serving_r, -alpha_nlos);
        }

        for (std::size_t m = 0; m < thresholds.size(); ++m) {
            const std::uint64_t hit = signal > thresholds[m] * noise ? 1 : 0;
            acc.sum[m] += hit;
            acc.sum_sq[m] += hit;
        }
    };

    for (double threshold : thresholds)
        if (!(threshold >= 0.0))
            throw std::domain_error("run_physical: thresholds must be >= 0");
    const Accumulator acc =
        run_trials(sim.trials, sim.threads, thresholds.size(), trial);
    return finalize(acc, sim.trials, false);
}

McEstimate run_physical(const SimConfig& sim, double threshold) {
    return run_physical(sim, std::span<const double>(&threshold, 1))[0];
}

}  // namespace mmnorm
