#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mplsrisk/interception.hpp"
#include "mplsrisk/label_security.hpp"
#include "mplsrisk/queueing.hpp"
#include "mplsrisk/reliability.hpp"
#include "mplsrisk/topology.hpp"

namespace mplsrisk {

// Volumetric attack stream aimed at one node. A labeled DoS stream is
// additionally subject to the filter and access matrix at the target.
struct DosConfig {
    double arrival_rate = 0.0;
    NodeId target = 0;
    std::optional<Label> label;
};

struct RateLimiterAttachment {
    RateLimiterConfig config;
    NodeId node = 0;
    double measure_interval = 1.0;  // window for the empirical P_limit fraction
};

struct ShaperAttachment {
    ShaperConfig config;
    NodeId node = 0;
};

struct SimulationParams {
    std::uint64_t seed = 1;
    double horizon = 1000.0;
    std::uint32_t trials = 1;
    double warmup = 0.0;  // events created before warmup are not counted
};

// Everything the attacker controls.
struct ThreatScenario {
    SpoofSet spoof;                      // empty labels = no spoofing
    double spoof_injection_rate = 0.0;   // Poisson injection attempts per time unit
    std::optional<DosConfig> dos;
    std::optional<InterceptionScenario> interception;
};

// Everything the operator controls. An absent optional means the
// mitigation is not deployed.
struct MitigationConfig {
    AuthModel auth;
    std::optional<FilterPolicy> filter;
    std::optional<AccessMatrix> access_matrix;
    std::optional<ConfidentialityConfig> confidentiality;
    std::optional<RateLimiterAttachment> rate_limiter;
    std::optional<ShaperAttachment> shaper;
    std::optional<RedundancyGroup> redundancy;
};

// A fully resolved scenario: parsed, defaulted, cross-checked. The digest
// is a content hash of the canonicalized JSON (stable under key reordering).
struct ScenarioFile {
    int version = 1;
    NetworkTopology topology;
    std::vector<double> lsp_arrival_rates;  // parallel to topology.lsps
    LabelSpace label_space;
    std::optional<SymbolDistribution> traffic_symbols;
    ThreatScenario threat;
    MitigationConfig mitigations;
    std::optional<ConfigState> config_state;
    SimulationParams simulation;
    std::string digest;
};

// Parses, applies documented defaults, validates the topology and every
// cross-reference. Throws ParseError / SchemaError / ValidationError; any
// byte input yields either a ScenarioFile or one of those.
ScenarioFile load_scenario(const std::string& path);
ScenarioFile load_scenario_from_string(const std::string& text,
                                       const std::string& origin = "<input>");

}  // namespace mplsrisk
