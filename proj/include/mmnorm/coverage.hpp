#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "mmnorm/netmodel.hpp"
#include "mmnorm/normalize.hpp"
#include "mmnorm/quadrature.hpp"

namespace mmnorm {

/// How the nearest-point density is formed from a piecewise profile.
/// PaperLiteral substitutes the local segment value into the homogeneous
/// nearest-distance formula with the thinning prefactor kept outside the
/// exponent. Rigorous uses the inhomogeneous void probability with the
/// thinned density everywhere; only this mode corresponds to a realizable
/// point process and is what the branch-mirror simulation reproduces.
enum class PdfMode { PaperLiteral, Rigorous };

enum class Alignment { WithErrors, Perfect };

const char* to_string(PdfMode mode);
const char* to_string(Alignment alignment);

/// "mode/alignment" tag, e.g. "paper-literal/with-errors".
std::string method_tag(PdfMode mode, Alignment alignment);

/// Distribution of the composite beamforming gain on the serving LOS link:
/// each side of the link holds its main lobe on target with probability q
/// determined by the beam steering error, independently of the other side.
struct AlignmentDistribution {
    std::array<double, 4> gains{};    // directivity quadruple
    std::array<double, 4> weights{};  // probabilities, sum to 1
};

AlignmentDistribution alignment_distribution(double beamwidth, double sigma,
                                             const DirectivityLevels& levels);

/// Variant with distinct BS and UE beamwidths; each side keeps its own
/// on-target probability.
AlignmentDistribution alignment_distribution(double bs_beamwidth,
                                             double ue_beamwidth, double sigma,
                                             const DirectivityLevels& levels);

struct CoverageQuery {
    double threshold = 1.0;  // linear SNR threshold, >= 0
    NetworkConfig config;
    PdfMode mode = PdfMode::PaperLiteral;
    Alignment alignment = Alignment::WithErrors;
    QuadratureControl quadrature;
};

struct CoverageResult {
    double p_los = 0.0;
    double p_nlos_inner = 0.0;
    double p_nlos_outer = 0.0;
    double p_cov = 0.0;  // exact sum of the three branches
    std::string method;
    std::optional<double> ci_halfwidth;
};

/// Nearest-point distance density of the thinned profile at x.
double nearest_pdf(const PiecewiseDensity& profile, PdfMode mode, double x);

/// integral of exp(-decay * x^alpha) * nearest_pdf(profile, mode, x) over
/// x in [0, inf), by adaptive quadrature per profile segment with the tail
/// truncated once the exponent passes 40.
double branch_coverage_integral(const PiecewiseDensity& profile, double alpha,
                                double decay, PdfMode mode,
                                const QuadratureControl& control = {});

double coverage_los(const CoverageQuery& query);

/// (inner, outer): blocked points inside the cutoffs and everything beyond
/// them. Beamforming gains play no role on these links.
std::pair<double, double> coverage_nlos(const CoverageQuery& query);

CoverageResult coverage(const CoverageQuery& query);

}  // namespace mmnorm
