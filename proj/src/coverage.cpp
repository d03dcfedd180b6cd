#include "mmnorm/coverage.hpp"

#include <cmath>
#include <stdexcept>

namespace mmnorm {

const char* to_string(PdfMode mode) {
    return mode == PdfMode::PaperLiteral ? "paper-literal" : "rigorous";
}

const char* to_string(Alignment alignment) {
    return alignment == Alignment::WithErrors ? "with-errors" : "perfect";
}

std::string method_tag(PdfMode mode, Alignment alignment) {
    return std::string(to_string(mode)) + "/" + to_string(alignment);
}

AlignmentDistribution alignment_distribution(double beamwidth, double sigma,
                                             const DirectivityLevels& levels) {
    return alignment_distribution(beamwidth, beamwidth, sigma, levels);
}

AlignmentDistribution alignment_distribution(double bs_beamwidth,
                                             double ue_beamwidth, double sigma,
                                             const DirectivityLevels& levels) {
    if (!(bs_beamwidth > 0.0) || !(bs_beamwidth < kTwoPi) ||
        !(ue_beamwidth > 0.0) || !(ue_beamwidth < kTwoPi))
        throw std::domain_error(
            "alignment_distribution: beamwidth must lie in (0, 2*pi)");
    if (!(sigma >= 0.0))
        throw std::domain_error("alignment_distribution: sigma must be >= 0");
    // One side stays on target when its steering error is below half the
    // beamwidth; the error magnitude is half-normal.
    const auto on_target = [sigma](double beamwidth) {
        if (sigma == 0.0) return 1.0;
        return std::erf(beamwidth / (2.0 * std::sqrt(2.0) * sigma));
    };
    const double qb = on_target(bs_beamwidth);
    const double qu = on_target(ue_beamwidth);
    AlignmentDistribution d;
    d.gains = levels.a;
    d.weights = {qb * qu, qb * (1.0 - qu), (1.0 - qb) * qu,
                 (1.0 - qb) * (1.0 - qu)};
    return d;
}

double nearest_pdf(const PiecewiseDensity& profile, PdfMode mode, double x) {
    if (!(x >= 0.0)) throw std::domain_error("nearest_pdf: x must be >= 0");
    const double v = profile.density_at(x);
    if (v == 0.0) return 0.0;
    if (mode == PdfMode::PaperLiteral)
        return profile.prefactor() * kTwoPi * x * v * std::exp(-kPi * x * x * v);
    const double eff = profile.prefactor() * v;
    return kTwoPi * x * eff * std::exp(-profile.cumulative_intensity(x));
}

namespace {

// Integrand exponent over one segment, as a function of x:
//   E(x) = offset + pi*lam*x^2 + decay*x^alpha
// (offset = 0 in PaperLiteral mode; in Rigorous mode it carries the
// intensity accumulated before the segment). Monotone increasing.
struct SegmentExponent {
    double offset;
    double lam;  // density inside the exponent
    double decay;
    double alpha;

    double operator()(double x) const {
        return offset + kPi * lam * x * x + decay * std::pow(x, alpha);
    }
};

double bisect_exponent(const SegmentExponent& e, double level, double lo,
                       double hi) {
    // precondition: e(lo) < level < e(hi)
    for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (e(mid) < level ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// One segment [a, b] with constant exponent density. Splitting at the points
// where the exponent crosses fixed levels keeps the integrand's dynamic range
// small per panel, so the fixed-node rule cannot step over a narrow spike.
double segment_integral(double a, double b, double amplitude,
                        const SegmentExponent& e,
                        const QuadratureControl& control, double* err_acc) {
    if (!(b > a)) return 0.0;
    const auto f = [&](double x) { return amplitude * x * std::exp(-e(x)); };

    static constexpr double kLevels[] = {1.0, 4.0, 16.0, 64.0};
    double knots[6];
    std::size_t n = 0;
    knots[n++] = a;
    const double ea = e(a), eb = e(b);
    for (double level : kLevels)
        if (ea < level && level < eb)
            knots[n++] = bisect_exponent(e, level, a, b);
    knots[n++] = b;

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const IntegralEstimate est =
            integrate_adaptive(f, knots[i], knots[i + 1], control);
        total += est.value;
        if (err_acc) *err_acc += est.error;
    }
    return total;
}

}  // namespace

double branch_coverage_integral(const PiecewiseDensity& profile, double alpha,
                                double decay, PdfMode mode,
                                const QuadratureControl& control) {
    if (!(alpha > 0.0))
        throw std::domain_error("branch_coverage_integral: alpha must be positive");
    if (!(decay >= 0.0))
        throw std::domain_error("branch_coverage_integral: decay must be >= 0");
    if (profile.prefactor() == 0.0) return 0.0;

    // Exponent value beyond which the remaining mass is below e^-40.
    constexpr double kCutoff = 40.0;

    const std::vector<double>& breaks = profile.breakpoints();
    const std::vector<double>& values = profile.values();
    const bool literal = mode == PdfMode::PaperLiteral;

    double total = 0.0;
    double left = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const bool tail = i == breaks.size();
        double right = tail ? 0.0 : breaks[i];
        const double v = values[i];
        if (v == 0.0) {
            left = right;
            continue;
        }
        const double lam = literal ? v : profile.prefactor() * v;
        const double amplitude = kTwoPi * lam;
        SegmentExponent e{0.0, lam, decay, alpha};
        if (!literal)
            e.offset = profile.cumulative_intensity(left) - kPi * lam * left * left;

        if (tail) {
            // truncate where the exponent reaches the cutoff
            double x2 = (kCutoff - e.offset) / (kPi * lam);
            if (!(x2 > left * left)) {
                left = right;
                continue;
            }
            right = std::sqrt(x2);
            if (decay > 0.0)
                right = std::min(right, std::pow(kCutoff / decay, 1.0 / alpha));
            if (!(right > left)) continue;
        }
        total += segment_integral(left, right, amplitude, e, control, nullptr);
        left = right;
    }
    return literal ? profile.prefactor() * total : total;
}

namespace {

double query_decay(const CoverageQuery& query) {
    if (!(query.threshold >= 0.0))
        throw std::domain_error("coverage: threshold must be >= 0");
    return query.config.channel.fading_rate * query.threshold *
           query.config.channel.noise;
}

}  // namespace

double coverage_los(const CoverageQuery& query) {
    query.config.validate();
    const double decay = query_decay(query);
    const double alpha = query.config.channel.alpha_los;

    if (query.alignment == Alignment::Perfect) {
        const PiecewiseDensity profile = build_los_profile(query.config, 1);
        return branch_coverage_integral(profile, alpha, decay, query.mode,
                                        query.quadrature);
    }

    const DirectivityLevels levels =
        directivity_levels(query.config.bs_pattern, query.config.ue_pattern);
    const AlignmentDistribution dist = alignment_distribution(
        query.config.bs_pattern.beamwidth, query.config.ue_pattern.beamwidth,
        query.config.steering_sigma, levels);

    double p = 0.0;
    for (int j = 1; j <= 4; ++j) {
        const double w = dist.weights[static_cast<std::size_t>(j - 1)];
        // A zero composite gain kills the link outright; the branch then
        // contributes nothing regardless of its weight.
        if (w == 0.0 || dist.gains[static_cast<std::size_t>(j - 1)] == 0.0)
            continue;
        const PiecewiseDensity profile = build_los_profile(query.config, j);
        p += w * branch_coverage_integral(profile, alpha, decay, query.mode,
                                          query.quadrature);
    }
    return p;
}

std::pair<double, double> coverage_nlos(const CoverageQuery& query) {
    query.config.validate();
    const double decay = query_decay(query);
    const double alpha = query.config.channel.alpha_nlos;
    const NlosProfiles profiles = build_nlos_profiles(query.config);
    return {branch_coverage_integral(profiles.inner, alpha, decay, query.mode,
                                     query.quadrature),
            branch_coverage_integral(profiles.outer, alpha, decay, query.mode,
                                     query.quadrature)};
}

CoverageResult coverage(const CoverageQuery& query) {
    CoverageResult r;
    r.p_los = coverage_los(query);
    const auto [inner, outer] = coverage_nlos(query);
    r.p_nlos_inner = inner;
    r.p_nlos_outer = outer;
    r.p_cov = r.p_los + r.p_nlos_inner + r.p_nlos_outer;
    r.method = method_tag(query.mode, query.alignment);
    return r;
}

}  // namespace mmnorm
