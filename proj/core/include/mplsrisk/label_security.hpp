#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "mplsrisk/topology.hpp"

namespace mplsrisk {

// Label space of size m plus the per-node sets of labels currently in use.
// Active sets are kept sorted and deduplicated by the loader.
struct LabelSpace {
    std::uint32_t size = 1;
    std::map<NodeId, std::vector<Label>> active_sets;
};

// The attacker's spoofed label set and the per-node attack weight mix.
// Weights double as the spoofed-packet injection points; they sum to 1.
struct SpoofSet {
    std::vector<Label> labels;  // sorted, deduplicated
    std::vector<std::pair<NodeId, double>> attack_weights;
};

// Abstract label-distribution authentication: bindings are deterministic
// tokens keyed by (label, key_id), and a forged binding passes verification
// with probability forgery_probability. No real cryptography.
struct AuthModel {
    bool enabled = false;
    std::string key_id = "k0";
    double forgery_probability = 0.0;
};

struct LabelBinding {
    Label label = 0;
    std::uint64_t signature = 0;
    NodeId signer = 0;
};

enum class FilterMode { Blocklist, Allowlist };

// In BLOCKLIST mode `labels` is the drop set; in ALLOWLIST mode it is the
// only set allowed through.
struct FilterPolicy {
    FilterMode mode = FilterMode::Blocklist;
    std::vector<Label> labels;  // sorted, deduplicated
};

// Per-(device, label) authorization bits. Unlisted pairs get default_bit;
// the loader default is deny.
struct AccessMatrix {
    std::unordered_map<std::uint64_t, bool> entries;
    bool default_bit = false;

    static std::uint64_t key(NodeId device, Label label) {
        return (static_cast<std::uint64_t>(device) << 32) | label;
    }
};

// |L_att| / m. Throws ModelError if the spoof set exceeds the space.
double p_spoof_uniform(const SpoofSet& spoof, const LabelSpace& space);

// Sum over weighted nodes of weight * |L_att intersect L_i| / |L_i|.
// Throws ModelError when a positively weighted node has no active labels.
double p_spoof_weighted(const SpoofSet& spoof, const LabelSpace& space);

// Deterministic signature token for (label, key_id). Throws ModelError when
// authentication is disabled.
LabelBinding sign_binding(Label label, const AuthModel& auth, NodeId signer = 0);

// Legitimate bindings always verify; forged ones pass iff the caller's
// uniform draw falls below forgery_probability.
bool verify_binding(const LabelBinding& binding, const AuthModel& auth,
                    double randomness);

// true = pass, false = drop.
bool filter_passes(Label label, const FilterPolicy& policy);

bool check_access(NodeId device, Label label, const AccessMatrix& matrix);

// Closed-form end-to-end acceptance probability of a spoofing attempt:
// (surviving spoofed labels / m) * (forgery_probability when auth enabled).
// This is the oracle the simulator's empirical estimate is checked against.
double spoof_acceptance_probability(const SpoofSet& spoof, const LabelSpace& space,
                                    const AuthModel& auth,
                                    const FilterPolicy& policy);

}  // namespace mplsrisk
