#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmnorm/mcsim.hpp"
#include "mmnorm/netmodel.hpp"
#include "mmnorm/sweep.hpp"

namespace mmnorm {

/// Everything a run needs, parsed from one JSON document. Angles arrive in
/// degrees, gains and thresholds in dB, powers in watts, densities per m^2
/// (a "1/x" string is also accepted); all are converted here, once.
struct RunConfig {
    NetworkConfig network;
    PdfMode mode = PdfMode::PaperLiteral;
    Alignment alignment = Alignment::WithErrors;
    std::vector<double> thresholds_db;  // defaulted in parse_config

    // Monte Carlo settings
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    std::optional<double> window_radius;
    SimKind kind = SimKind::BranchMirror;
    unsigned threads = 1;

    // sweep settings
    SweepAxis axis = SweepAxis::ThresholdDb;
    std::vector<double> grid;  // empty: threshold axis falls back to thresholds_db
    double sweep_threshold_db = 0.0;
    std::vector<SweepVariant> variants;  // empty: both alignments of `mode`

    std::string out_path;  // empty = stdout

    SimConfig sim_config() const;
    SweepSpec sweep_spec() const;

    bool operator==(const RunConfig&) const = default;
};

/// Name parsers shared by the config reader and the CLI; all throw
/// config_error mentioning `context` on unknown names.
PdfMode parse_pdf_mode(const std::string& text, const std::string& context);
Alignment parse_alignment_name(const std::string& text,
                               const std::string& context);
SimKind parse_sim_kind(const std::string& text, const std::string& context);
/// "mode/alignment" pair, e.g. "paper-literal/perfect".
SweepVariant parse_variant(const std::string& text, const std::string& context);

/// Parse and fully validate a JSON document. Unknown keys are rejected;
/// violations of model invariants surface as config errors naming the field.
RunConfig parse_config(const std::string& text);

/// parse_config on a file's contents.
RunConfig load_config(const std::string& path);

/// Canonical JSON for a RunConfig. Units are converted back so that parsing
/// the output reproduces the struct exactly.
std::string serialize_config(const RunConfig& config);

}  // namespace mmnorm
