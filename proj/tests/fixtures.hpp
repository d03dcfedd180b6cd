#pragma once

#include "mmnorm/netmodel.hpp"

namespace mmnorm::testing {

// Two-tier urban reference network used across the test suites:
// (1 W, 1/200 per m^2) and (5 W, 1/500 per m^2), 20 deg sectors with
// explicit 10 dB main / -10 dB side gains on both ends, Manhattan
// blockage (0.117, 200 m), 4 deg beam steering error.
inline NetworkConfig manhattan_network() {
    NetworkConfig cfg;
    cfg.tiers = {{1.0, 1.0 / 200.0, {}}, {5.0, 1.0 / 500.0, {}}};
    cfg.bs_pattern =
        AntennaPattern::explicit_gains(deg_to_rad(20.0), 10.0, 0.1);
    cfg.ue_pattern = cfg.bs_pattern;
    cfg.blockage = {0.117, 200.0};
    cfg.steering_sigma = deg_to_rad(4.0);
    return cfg;
}

// Same network with power-conserving sectored antennas (side lobe level
// 0.1), the configuration whose coverage is non-monotone in beamwidth.
inline NetworkConfig derived_network(double beamwidth) {
    NetworkConfig cfg = manhattan_network();
    cfg.bs_pattern = AntennaPattern::derived(beamwidth, 0.1);
    cfg.ue_pattern = cfg.bs_pattern;
    return cfg;
}

}  // namespace mmnorm::testing
