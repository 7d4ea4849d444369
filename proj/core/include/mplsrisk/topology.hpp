#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace mplsrisk {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using Label = std::uint32_t;

enum class NodeRole { Ler, Lsr };

enum class LabelAction { Swap, Push, Pop };

// Label routers are also queueing stations: every packet visiting a node
// consumes one exponential service at rate service_rate on one of
// server_count parallel servers. queue_capacity limits the waiting room
// (0 = pure loss system, nullopt = unbounded).
struct Node {
    NodeId id = 0;
    NodeRole role = NodeRole::Lsr;
    double service_rate = 1.0;
    std::uint32_t server_count = 1;
    std::optional<std::uint64_t> queue_capacity;  // nullopt = unbounded
};

struct Edge {
    EdgeId id = 0;
    NodeId from = 0;
    NodeId to = 0;
};

// One row of a node's label forwarding table. out_label/out_edge are
// required for SWAP and PUSH. A POP entry may carry an out_edge for
// forwarding the revealed label; with none, an emptied stack at an LER
// means delivery.
struct ForwardingEntry {
    NodeId node = 0;
    Label in_label = 0;
    LabelAction action = LabelAction::Swap;
    std::optional<Label> out_label;
    std::optional<EdgeId> out_edge;
};

// A label-switched path: hop k is (edge, label) where label is the
// in-label presented at the edge's source node. Validation requires a
// swap chain: every interior lookup is a SWAP onto the hop's edge and the
// egress LER pops the final label. Push/pop stacking is supported by the
// forwarder itself but not inside declared LSPs.
struct Lsp {
    NodeId ingress = 0;
    NodeId egress = 0;
    std::vector<std::pair<EdgeId, Label>> hops;
};

struct NetworkTopology {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::vector<ForwardingEntry> forwarding;
    std::vector<Lsp> lsps;
    std::uint32_t label_space_size = 1;
};

struct ValidationResult {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Checks every structural invariant and returns all violations; never
// throws. Violations are data, not failures.
ValidationResult validate_topology(const NetworkTopology& topo);

enum class ForwardOutcome { Delivered, NoRoute, LoopAbort };

struct TraversalHop {
    NodeId node = 0;
    Label label = 0;  // top-of-stack label presented at this node
};

struct TraversalRecord {
    ForwardOutcome outcome = ForwardOutcome::NoRoute;
    std::vector<TraversalHop> hops;
    std::vector<EdgeId> edges;
};

// Hash lookup view over a topology; the topology must outlive the index.
// Build once, share read-only across trials.
class ForwardingIndex {
public:
    explicit ForwardingIndex(const NetworkTopology& topo);

    const Node* node(NodeId id) const;
    const Edge* edge(EdgeId id) const;
    const ForwardingEntry* entry(NodeId node, Label in_label) const;
    std::size_t node_count() const { return topo_->nodes.size(); }
    const NetworkTopology& topology() const { return *topo_; }

private:
    const NetworkTopology* topo_;
    std::unordered_map<NodeId, std::size_t> node_pos_;
    std::unordered_map<EdgeId, std::size_t> edge_pos_;
    std::unordered_map<std::uint64_t, std::size_t> entry_pos_;
};

inline constexpr std::size_t kMaxLabelStackDepth = 8;

// Hop-by-hop label-swap traversal from an ingress node. Terminates within
// |V| edge traversals: the cycle guard reports LOOP_ABORT instead of
// traversing a |V|+1-th edge.
TraversalRecord forward_packet(const ForwardingIndex& index, NodeId ingress,
                               Label initial_label);
TraversalRecord forward_packet(const NetworkTopology& topo, NodeId ingress,
                               Label initial_label);

// The hop edges of an LSP, in declaration order.
std::vector<EdgeId> path_of(const Lsp& lsp);

}  // namespace mplsrisk
