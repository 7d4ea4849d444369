#include "mplsrisk/interception.hpp"

#include <cmath>

#include "mplsrisk/errors.hpp"

namespace mplsrisk {

double shannon_entropy(const SymbolDistribution& dist) {
    double sum = 0.0;
    double h = 0.0;
    for (const auto& [symbol, p] : dist.probabilities) {
        if (p < 0.0)
            throw ModelError("invalid distribution: negative probability for symbol " +
                             std::to_string(symbol));
        sum += p;
        if (p > 0.0) h -= p * std::log2(p);
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ModelError("invalid distribution: probabilities sum to " +
                         std::to_string(sum));
    return h;
}

double intercepted_information(const SymbolDistribution& dist,
                               const InterceptionScenario& scenario) {
    return shannon_entropy(dist) * scenario.tap_probability;
}

double interception_ratio(const SymbolDistribution& dist,
                          const InterceptionScenario& scenario) {
    if (!(scenario.secure_data_size_bits > 0.0))
        throw ModelError("secure_data_size_bits must be > 0");
    return intercepted_information(dist, scenario) / scenario.secure_data_size_bits;
}

double effective_exposure(const SymbolDistribution& dist,
                          const InterceptionScenario& scenario,
                          const ConfidentialityConfig& conf) {
    double exposure = interception_ratio(dist, scenario);
    if (conf.encryption_enabled) exposure *= conf.break_probability;
    if (conf.masking_enabled) exposure *= conf.trace_probability;
    return exposure;
}

double security_strength_log2(std::uint32_t key_bits) {
    if (key_bits < 1) throw ModelError("key_bits must be >= 1");
    return static_cast<double>(key_bits);
}

double ipsec_intact_probability(const ConfidentialityConfig& conf) {
    if (!conf.encryption_enabled || !conf.integrity_enabled)
        throw ModelError("mitigation disabled: ipsec model needs encryption and integrity");
    return (1.0 - conf.break_probability) * (1.0 - conf.tamper_detect_miss);
}

double empirical_entropy(const std::map<SymbolId, std::uint64_t>& counts) {
    std::uint64_t total = 0;
    for (const auto& [symbol, count] : counts) total += count;
    if (total == 0) return 0.0;
    double h = 0.0;
    for (const auto& [symbol, count] : counts) {
        if (count == 0) continue;
        double p = static_cast<double>(count) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace mplsrisk
