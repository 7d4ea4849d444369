#include "mplsrisk/label_security.hpp"

#include <algorithm>

#include "mplsrisk/errors.hpp"

namespace mplsrisk {

namespace {

// FNV-1a over the key id and label bytes; the signature is an opaque token,
// not a MAC.
std::uint64_t signature_token(Label label, const std::string& key_id) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix_byte = [&h](unsigned char b) {
        h ^= b;
        h *= 0x100000001B3ULL;
    };
    for (unsigned char c : key_id) mix_byte(c);
    for (int i = 0; i < 4; ++i) mix_byte(static_cast<unsigned char>(label >> (8 * i)));
    return h;
}

bool contains(const std::vector<Label>& sorted, Label l) {
    return std::binary_search(sorted.begin(), sorted.end(), l);
}

}  // namespace

double p_spoof_uniform(const SpoofSet& spoof, const LabelSpace& space) {
    if (spoof.labels.size() > space.size)
        throw ModelError("spoof set exceeds label space: " +
                         std::to_string(spoof.labels.size()) + " > " +
                         std::to_string(space.size));
    return static_cast<double>(spoof.labels.size()) / static_cast<double>(space.size);
}

double p_spoof_weighted(const SpoofSet& spoof, const LabelSpace& space) {
    double p = 0.0;
    for (const auto& [node, weight] : spoof.attack_weights) {
        if (weight <= 0.0) continue;
        auto it = space.active_sets.find(node);
        if (it == space.active_sets.end() || it->second.empty())
            throw ModelError("empty active set at weighted node " + std::to_string(node));
        const std::vector<Label>& active = it->second;
        std::size_t overlap = 0;
        for (Label l : active)
            if (contains(spoof.labels, l)) ++overlap;
        p += weight * static_cast<double>(overlap) / static_cast<double>(active.size());
    }
    return p;
}

LabelBinding sign_binding(Label label, const AuthModel& auth, NodeId signer) {
    if (!auth.enabled) throw ModelError("auth disabled: cannot sign binding");
    return LabelBinding{label, signature_token(label, auth.key_id), signer};
}

bool verify_binding(const LabelBinding& binding, const AuthModel& auth,
                    double randomness) {
    if (binding.signature == signature_token(binding.label, auth.key_id)) return true;
    return randomness < auth.forgery_probability;
}

bool filter_passes(Label label, const FilterPolicy& policy) {
    bool listed = contains(policy.labels, label);
    return policy.mode == FilterMode::Blocklist ? !listed : listed;
}

bool check_access(NodeId device, Label label, const AccessMatrix& matrix) {
    auto it = matrix.entries.find(AccessMatrix::key(device, label));
    return it == matrix.entries.end() ? matrix.default_bit : it->second;
}

double spoof_acceptance_probability(const SpoofSet& spoof, const LabelSpace& space,
                                    const AuthModel& auth,
                                    const FilterPolicy& policy) {
    if (spoof.labels.size() > space.size)
        throw ModelError("spoof set exceeds label space: " +
                         std::to_string(spoof.labels.size()) + " > " +
                         std::to_string(space.size));
    std::size_t surviving = 0;
    for (Label l : spoof.labels)
        if (filter_passes(l, policy)) ++surviving;
    double p = static_cast<double>(surviving) / static_cast<double>(space.size);
    if (auth.enabled) p *= auth.forgery_probability;
    return p;
}

}  // namespace mplsrisk
