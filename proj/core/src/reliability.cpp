#include "mplsrisk/reliability.hpp"

#include <cmath>
#include <string>

#include "mplsrisk/errors.hpp"

namespace mplsrisk {

double config_reliability(const ConfigState& state) {
    if (state.total_parameters < 1) throw ModelError("total_parameters must be >= 1");
    if (state.misconfigured > state.total_parameters)
        throw ModelError("misconfigured count exceeds total parameters");
    return std::exp(-static_cast<double>(state.misconfigured) /
                    static_cast<double>(state.total_parameters));
}

double redundant_reliability(const RedundancyGroup& group) {
    if (group.component_reliabilities.empty())
        throw ModelError("redundancy group must have at least one component");
    double all_fail = 1.0;
    for (double r : group.component_reliabilities) {
        if (r < 0.0 || r > 1.0)
            throw ModelError("component reliability outside [0,1]: " + std::to_string(r));
        all_fail *= 1.0 - r;
    }
    return 1.0 - all_fail;
}

ConfigState apply_audit(const ConfigState& state, std::span<const double> draws) {
    if (draws.size() < state.misconfigured)
        throw ModelError("audit needs one draw per misconfiguration: have " +
                         std::to_string(draws.size()) + ", need " +
                         std::to_string(state.misconfigured));
    ConfigState next = state;
    for (std::uint64_t i = 0; i < state.misconfigured; ++i)
        if (draws[i] < state.audit_fix_probability) --next.misconfigured;
    return next;
}

}  // namespace mplsrisk
