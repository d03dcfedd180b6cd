#pragma once

#include <vector>

#include "mmnorm/coverage.hpp"
#include "mmnorm/netmodel.hpp"

namespace mmnorm {

enum class SweepAxis { ThresholdDb, BeamwidthDeg, LosFraction };

const char* to_string(SweepAxis axis);

struct SweepVariant {
    PdfMode mode = PdfMode::PaperLiteral;
    Alignment alignment = Alignment::WithErrors;

    bool operator==(const SweepVariant&) const = default;
};

struct SweepSpec {
    NetworkConfig base;
    SweepAxis axis = SweepAxis::ThresholdDb;
    std::vector<double> grid;  // axis values: dB, degrees, or a fraction
    double threshold_db = 0.0;  // fixed threshold for non-threshold axes
    std::vector<SweepVariant> variants{{}};
    QuadratureControl quadrature;

    void validate() const;

    bool operator==(const SweepSpec&) const = default;
};

struct SweepRow {
    double axis_value = 0.0;
    double threshold_db = 0.0;
    CoverageResult result;
};

/// One row per grid value per variant, ordered by grid position first and
/// variant order second. The beamwidth axis re-points both the BS and UE
/// patterns (per-tier overrides stay put); the LOS-fraction axis rewrites the
/// blockage model.
std::vector<SweepRow> sweep(const SweepSpec& spec);

struct BeamwidthOptimum {
    double beamwidth = 0.0;       // radians
    double coverage_value = 0.0;  // p_cov at the optimum
    bool at_boundary = false;
};

/// Argmax of coverage over beamwidth on [lo, hi]: a coarse scan guards
/// against multimodality, then golden-section refines the best bracket to
/// 0.1 degrees. Requires a Derived BS pattern (with explicit gains coverage
/// is monotone in beamwidth and the search is pointless) and a positive
/// steering sigma. Threshold is linear.
BeamwidthOptimum optimal_beamwidth(const NetworkConfig& base, double threshold,
                                   double beamwidth_lo, double beamwidth_hi,
                                   PdfMode mode = PdfMode::PaperLiteral,
                                   const QuadratureControl& control = {});

}  // namespace mmnorm
