#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mplsrisk/topology.hpp"

namespace mplsrisk {

using SymbolId = std::uint32_t;

// Distribution of transmitted payload symbols. Probabilities must be
// non-negative and sum to 1 within 1e-9.
struct SymbolDistribution {
    std::vector<std::pair<SymbolId, double>> probabilities;
};

struct InterceptionScenario {
    double tap_probability = 0.0;       // per-packet capture chance at a tapped edge
    double secure_data_size_bits = 1.0;  // S
    std::vector<EdgeId> taps;
};

struct ConfidentialityConfig {
    bool encryption_enabled = false;
    std::uint32_t key_bits = 128;
    double break_probability = 0.0;   // 1 - P_encrypt
    bool masking_enabled = false;
    double trace_probability = 0.0;   // 1 - P_mask
    bool integrity_enabled = false;
    double tamper_detect_miss = 0.0;
};

// H(X) = -sum p log2 p in bits; zero-probability entries contribute nothing.
// Throws ModelError for an invalid distribution.
double shannon_entropy(const SymbolDistribution& dist);

// I = H(X) * tap_probability.
double intercepted_information(const SymbolDistribution& dist,
                               const InterceptionScenario& scenario);

// R_intercept = I / S.
double interception_ratio(const SymbolDistribution& dist,
                          const InterceptionScenario& scenario);

// R_intercept scaled by the residual leak of each enabled mitigation:
// break_probability for encryption, trace_probability for masking,
// stacking multiplicatively.
double effective_exposure(const SymbolDistribution& dist,
                          const InterceptionScenario& scenario,
                          const ConfidentialityConfig& conf);

// Key strength 2^k, reported in the log2 domain to avoid overflow.
double security_strength_log2(std::uint32_t key_bits);

// (1 - break_probability) * (1 - tamper_detect_miss). Requires encryption
// and integrity checking both enabled.
double ipsec_intact_probability(const ConfidentialityConfig& conf);

// Plug-in entropy estimate of an observed symbol frequency table.
double empirical_entropy(const std::map<SymbolId, std::uint64_t>& counts);

}  // namespace mplsrisk
