#include "mmnorm/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmnorm {

const char* to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::ThresholdDb: return "threshold-db";
        case SweepAxis::BeamwidthDeg: return "beamwidth-deg";
        case SweepAxis::LosFraction: return "los-fraction";
    }
    return "?";
}

void SweepSpec::validate() const {
    base.validate();
    if (grid.empty()) throw std::domain_error("sweep: grid must be non-empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::domain_error("sweep: grid must be strictly increasing");
    if (variants.empty())
        throw std::domain_error("sweep: at least one variant is required");
}

namespace {

NetworkConfig with_beamwidth(NetworkConfig config, double beamwidth) {
    config.bs_pattern = config.bs_pattern.with_beamwidth(beamwidth);
    config.ue_pattern = config.ue_pattern.with_beamwidth(beamwidth);
    return config;
}

}  // namespace

std::vector<SweepRow> sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<SweepRow> rows;
    rows.reserve(spec.grid.size() * spec.variants.size());
    for (double value : spec.grid) {
        CoverageQuery query;
        query.config = spec.base;
        query.quadrature = spec.quadrature;
        double threshold_db = spec.threshold_db;
        switch (spec.axis) {
            case SweepAxis::ThresholdDb:
                threshold_db = value;
                break;
            case SweepAxis::BeamwidthDeg:
                query.config = with_beamwidth(spec.base, deg_to_rad(value));
                break;
            case SweepAxis::LosFraction:
                query.config.blockage.los_fraction = value;
                break;
        }
        query.threshold = db_to_linear(threshold_db);
        for (const SweepVariant& variant : spec.variants) {
            query.mode = variant.mode;
            query.alignment = variant.alignment;
            rows.push_back({value, threshold_db, coverage(query)});
        }
    }
    return rows;
}

BeamwidthOptimum optimal_beamwidth(const NetworkConfig& base, double threshold,
                                   double beamwidth_lo, double beamwidth_hi,
                                   PdfMode mode,
                                   const QuadratureControl& control) {
    base.validate();
    if (base.bs_pattern.mode != PatternMode::Derived)
        throw std::domain_error(
            "optimal_beamwidth: requires a Derived BS pattern; with explicit "
            "gains coverage is monotone in beamwidth");
    if (!(base.steering_sigma > 0.0))
        throw std::domain_error("optimal_beamwidth: requires steering sigma > 0");
    if (!(beamwidth_lo > 0.0) || !(beamwidth_hi < kTwoPi) ||
        !(beamwidth_lo <= beamwidth_hi))
        throw std::domain_error(
            "optimal_beamwidth: need 0 < lo <= hi < 2*pi");

    BeamwidthOptimum best;
    const auto eval = [&](double w) {
        CoverageQuery query;
        query.threshold = threshold;
        query.config = with_beamwidth(base, w);
        query.mode = mode;
        query.alignment = Alignment::WithErrors;
        query.quadrature = control;
        const double p = coverage(query).p_cov;
        if (p > best.coverage_value) {
            best.coverage_value = p;
            best.beamwidth = w;
        }
        return p;
    };

    const double tol = deg_to_rad(0.1);
    if (beamwidth_hi - beamwidth_lo <= tol) {
        eval(beamwidth_lo);
        if (beamwidth_hi > beamwidth_lo) eval(beamwidth_hi);
        best.at_boundary = true;
        return best;
    }

    // Coarse scan: roughly one-degree steps, at least nine points.
    const auto points = std::max<std::size_t>(
        9, static_cast<std::size_t>(
               std::ceil((beamwidth_hi - beamwidth_lo) / deg_to_rad(1.0))) +
               1);
    std::size_t best_i = 0;
    double best_coarse = -1.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double w =
            beamwidth_lo + (beamwidth_hi - beamwidth_lo) *
                               static_cast<double>(i) /
                               static_cast<double>(points - 1);
        const double p = eval(w);
        if (p > best_coarse) {
            best_coarse = p;
            best_i = i;
        }
    }

    const auto grid_point = [&](std::size_t i) {
        return beamwidth_lo + (beamwidth_hi - beamwidth_lo) *
                                  static_cast<double>(i) /
                                  static_cast<double>(points - 1);
    };
    double a = grid_point(best_i == 0 ? 0 : best_i - 1);
    double b = grid_point(best_i + 1 >= points ? points - 1 : best_i + 1);

    // Golden-section refinement of the bracket around the coarse maximum.
    constexpr double kGolden = 0.6180339887498949;
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double fc = eval(c);
    double fd = eval(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = eval(d);
        }
    }

    best.at_boundary = best.beamwidth - beamwidth_lo <= tol ||
                       beamwidth_hi - best.beamwidth <= tol;
    return best;
}

}  // namespace mmnorm
