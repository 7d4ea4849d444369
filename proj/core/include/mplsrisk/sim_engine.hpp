#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mplsrisk/scenario.hpp"

namespace mplsrisk {

enum class PacketKind { Legitimate, Spoofed, Dos };

// Attack traffic carries this sentinel so taps never record it; entropy
// accounting measures exposure of legitimate payload only.
inline constexpr SymbolId kReservedSymbol = 0xFFFFFFFFu;

struct Packet {
    std::uint64_t id = 0;
    PacketKind kind = PacketKind::Legitimate;
    SymbolId symbol = kReservedSymbol;
    std::array<Label, kMaxLabelStackDepth> stack{};
    std::uint8_t depth = 0;   // 0 = unlabeled (bare DoS traffic)
    std::uint16_t hops = 0;   // edge traversals, for the loop guard
    bool at_entry = true;     // label-plane checks run only at the entry node
    double created_at = 0.0;

    Label top() const { return stack[depth - 1]; }
};

// Per-node packet accounting. Every counted packet entering a node ends in
// exactly one of the drop buckets, served, or in_flight at the horizon.
struct NodeCounters {
    std::uint64_t offered = 0;
    std::uint64_t dropped_filter = 0;
    std::uint64_t dropped_matrix = 0;
    std::uint64_t dropped_auth = 0;
    std::uint64_t dropped_limiter = 0;
    std::uint64_t queue_offered = 0;  // reached the queueing stage
    std::uint64_t dropped_queue = 0;  // no waiting room (blocking when capacity 0)
    std::uint64_t served = 0;
    std::uint64_t in_flight = 0;      // queued/in service/shaper-held at horizon
};

struct TrialMetrics {
    std::uint64_t spoofed_injected = 0;
    std::uint64_t spoofed_accepted = 0;
    std::map<NodeId, NodeCounters> nodes;
    std::map<SymbolId, std::uint64_t> tapped_symbols;
    std::uint64_t tapped_count = 0;
    std::uint64_t tap_crossings = 0;  // tappable packets crossing tapped edges
    std::uint64_t delivered = 0;
    // Rate-limiter measurements use event-time gating (rates, not packets).
    std::uint64_t limiter_offered = 0;
    std::uint64_t limiter_admitted = 0;
    std::uint64_t limit_intervals_total = 0;
    std::uint64_t limit_intervals_conforming = 0;
    double measured_time = 0.0;  // horizon - warmup

    TrialMetrics& operator+=(const TrialMetrics& other);
};

// One line of the risk report: a closed-form model quantity with its
// analytic value and, after simulation, the paired empirical estimate.
struct MetricEntry {
    std::string id;
    std::string formula;
    std::optional<double> analytic;
    std::optional<double> empirical;
    std::optional<double> half_width;  // tolerance used by compare()
    std::optional<std::uint64_t> samples;
};

struct RiskReport {
    std::vector<MetricEntry> metrics;
    TrialMetrics merged;
    std::uint32_t trials = 0;
    bool simulated = false;
};

enum class Verdict { Consistent, Divergent, AnalyticOnly };

// CONSISTENT when |empirical - analytic| <= half_width; rows without an
// empirical estimate are analytic-only and excluded from verdicts.
std::vector<Verdict> compare(const RiskReport& report);

// One deterministic discrete-event trial. Identical (scenario, seed,
// trial_index) produce identical metrics; trials own all mutable state and
// may run concurrently.
TrialMetrics run_trial(const ScenarioFile& scenario, std::uint64_t trial_index);

// Runs scenario.simulation.trials independent trials (optionally on
// `threads` workers), merges them in trial order, and pairs empirical
// estimates with their analytic counterparts. The result does not depend
// on the thread count.
RiskReport run_experiment(const ScenarioFile& scenario, unsigned threads = 1);

}  // namespace mplsrisk
