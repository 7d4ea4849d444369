#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mplsrisk {

struct ConfigState {
    std::uint64_t total_parameters = 1;      // N
    std::uint64_t misconfigured = 0;         // M, 0 <= M <= N
    double audit_fix_probability = 0.0;      // per-item chance an audit fixes it
};

struct RedundancyGroup {
    std::vector<double> component_reliabilities;  // each in [0, 1]
};

// R = exp(-M/N). A unitless reliability index.
double config_reliability(const ConfigState& state);

// R_red = 1 - prod(1 - R_i).
double redundant_reliability(const RedundancyGroup& group);

// One audit pass: each misconfiguration is fixed independently when its
// uniform draw falls below audit_fix_probability. Needs one draw per
// current misconfiguration; N is never changed.
ConfigState apply_audit(const ConfigState& state, std::span<const double> draws);

}  // namespace mplsrisk
