#include "mplsrisk/topology.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_set>

namespace mplsrisk {

namespace {

std::uint64_t node_label_key(NodeId node, Label label) {
    return (static_cast<std::uint64_t>(node) << 32) | label;
}

template <typename... Parts>
std::string msg(Parts&&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    return os.str();
}

}  // namespace

ValidationResult validate_topology(const NetworkTopology& topo) {
    ValidationResult result;
    auto fail = [&](std::string m) { result.violations.push_back(std::move(m)); };

    std::unordered_map<NodeId, const Node*> nodes;
    for (const Node& n : topo.nodes) {
        if (!nodes.emplace(n.id, &n).second)
            fail(msg("duplicate node id ", n.id));
        if (!(n.service_rate > 0.0))
            fail(msg("node ", n.id, ": service_rate must be > 0"));
        if (n.server_count < 1)
            fail(msg("node ", n.id, ": server_count must be >= 1"));
    }

    std::unordered_map<EdgeId, const Edge*> edges;
    for (const Edge& e : topo.edges) {
        if (!edges.emplace(e.id, &e).second)
            fail(msg("duplicate edge id ", e.id));
        if (!nodes.count(e.from))
            fail(msg("edge ", e.id, ": unknown node ", e.from));
        if (!nodes.count(e.to))
            fail(msg("edge ", e.id, ": unknown node ", e.to));
        if (e.from == e.to)
            fail(msg("edge ", e.id, ": self-loop at node ", e.from));
    }

    std::unordered_map<std::uint64_t, const ForwardingEntry*> entries;
    for (const ForwardingEntry& fe : topo.forwarding) {
        if (!nodes.count(fe.node))
            fail(msg("forwarding entry: unknown node ", fe.node));
        if (fe.in_label >= topo.label_space_size)
            fail(msg("forwarding entry at node ", fe.node, ": in_label ", fe.in_label,
                     " outside label space of size ", topo.label_space_size));
        if (fe.out_label && *fe.out_label >= topo.label_space_size)
            fail(msg("forwarding entry at node ", fe.node, ": out_label ", *fe.out_label,
                     " outside label space of size ", topo.label_space_size));
        if (!entries.emplace(node_label_key(fe.node, fe.in_label), &fe).second)
            fail(msg("duplicate forwarding entry for (node ", fe.node, ", label ",
                     fe.in_label, ")"));
        if (fe.action != LabelAction::Pop) {
            if (!fe.out_label)
                fail(msg("forwarding entry at node ", fe.node, ", label ", fe.in_label,
                         ": swap/push requires out_label"));
            if (!fe.out_edge) {
                fail(msg("forwarding entry at node ", fe.node, ", label ", fe.in_label,
                         ": swap/push requires out_edge"));
            }
        }
        if (fe.out_edge) {
            auto it = edges.find(*fe.out_edge);
            if (it == edges.end())
                fail(msg("forwarding entry at node ", fe.node, ": unknown edge ",
                         *fe.out_edge));
            else if (it->second->from != fe.node)
                fail(msg("forwarding entry at node ", fe.node, ": out_edge ",
                         *fe.out_edge, " does not originate at the node"));
        }
    }

    for (std::size_t li = 0; li < topo.lsps.size(); ++li) {
        const Lsp& lsp = topo.lsps[li];
        auto lsp_fail = [&](std::string m) { fail(msg("lsp ", li, ": ", m)); };

        auto ingress_it = nodes.find(lsp.ingress);
        auto egress_it = nodes.find(lsp.egress);
        if (ingress_it == nodes.end()) {
            lsp_fail(msg("unknown node ", lsp.ingress));
            continue;
        }
        if (egress_it == nodes.end()) {
            lsp_fail(msg("unknown node ", lsp.egress));
            continue;
        }
        if (ingress_it->second->role != NodeRole::Ler)
            lsp_fail(msg("ingress ", lsp.ingress, " is not an LER"));
        if (egress_it->second->role != NodeRole::Ler)
            lsp_fail(msg("egress ", lsp.egress, " is not an LER"));
        if (lsp.hops.empty()) {
            lsp_fail("no hops");
            continue;
        }
        if (lsp.hops.size() > topo.nodes.size()) {
            // forwarding aborts after |V| edge traversals, so longer paths
            // could never deliver
            lsp_fail(msg("path of ", lsp.hops.size(), " hops exceeds the node count"));
            continue;
        }

        NodeId at = lsp.ingress;
        std::optional<Label> expected;  // label forced by the previous swap
        bool chain_ok = true;
        for (std::size_t h = 0; h < lsp.hops.size() && chain_ok; ++h) {
            auto [edge_id, label] = lsp.hops[h];
            auto eit = edges.find(edge_id);
            if (eit == edges.end()) {
                lsp_fail(msg("hop ", h, ": unknown edge ", edge_id));
                chain_ok = false;
                break;
            }
            const Edge& e = *eit->second;
            if (e.from != at) {
                lsp_fail(msg("hop ", h, ": edge ", edge_id, " starts at node ", e.from,
                             ", path is at node ", at));
                chain_ok = false;
                break;
            }
            if (expected && *expected != label) {
                lsp_fail(msg("hop ", h, ": label ", label,
                             " does not chain from previous swap to ", *expected));
                chain_ok = false;
                break;
            }
            auto ent = entries.find(node_label_key(e.from, label));
            if (ent == entries.end()) {
                lsp_fail(msg("hop ", h, ": no forwarding entry at node ", e.from,
                             " for label ", label));
                chain_ok = false;
                break;
            }
            const ForwardingEntry& fe = *ent->second;
            if (fe.action == LabelAction::Pop) {
                lsp_fail(msg("hop ", h, ": POP entry mid-path at node ", e.from));
                chain_ok = false;
                break;
            }
            if (fe.action == LabelAction::Push) {
                lsp_fail(msg("hop ", h, ": PUSH entry inside an LSP at node ", e.from));
                chain_ok = false;
                break;
            }
            if (!fe.out_edge || *fe.out_edge != edge_id) {
                lsp_fail(msg("hop ", h, ": forwarding entry at node ", e.from,
                             " routes onto a different edge"));
                chain_ok = false;
                break;
            }
            expected = fe.out_label;
            at = e.to;
        }
        if (!chain_ok) continue;

        if (at != lsp.egress) {
            lsp_fail(msg("path ends at node ", at, ", egress is ", lsp.egress));
            continue;
        }
        auto ent = entries.find(node_label_key(lsp.egress, expected.value()));
        if (ent == entries.end() || ent->second->action != LabelAction::Pop)
            lsp_fail(msg("egress ", lsp.egress, " has no POP entry for label ",
                         expected.value()));
    }

    return result;
}

ForwardingIndex::ForwardingIndex(const NetworkTopology& topo) : topo_(&topo) {
    node_pos_.reserve(topo.nodes.size());
    for (std::size_t i = 0; i < topo.nodes.size(); ++i)
        node_pos_.emplace(topo.nodes[i].id, i);
    edge_pos_.reserve(topo.edges.size());
    for (std::size_t i = 0; i < topo.edges.size(); ++i)
        edge_pos_.emplace(topo.edges[i].id, i);
    entry_pos_.reserve(topo.forwarding.size());
    for (std::size_t i = 0; i < topo.forwarding.size(); ++i) {
        const ForwardingEntry& fe = topo.forwarding[i];
        entry_pos_.emplace(node_label_key(fe.node, fe.in_label), i);
    }
}

const Node* ForwardingIndex::node(NodeId id) const {
    auto it = node_pos_.find(id);
    return it == node_pos_.end() ? nullptr : &topo_->nodes[it->second];
}

const Edge* ForwardingIndex::edge(EdgeId id) const {
    auto it = edge_pos_.find(id);
    return it == edge_pos_.end() ? nullptr : &topo_->edges[it->second];
}

const ForwardingEntry* ForwardingIndex::entry(NodeId node, Label in_label) const {
    auto it = entry_pos_.find(node_label_key(node, in_label));
    return it == entry_pos_.end() ? nullptr : &topo_->forwarding[it->second];
}

TraversalRecord forward_packet(const ForwardingIndex& index, NodeId ingress,
                               Label initial_label) {
    TraversalRecord rec;
    std::vector<Label> stack{initial_label};
    NodeId at = ingress;

    for (;;) {
        rec.hops.push_back({at, stack.back()});
        const Node* here = index.node(at);
        if (here == nullptr) {
            rec.outcome = ForwardOutcome::NoRoute;
            return rec;
        }
        const ForwardingEntry* fe = index.entry(at, stack.back());
        if (fe == nullptr) {
            rec.outcome = ForwardOutcome::NoRoute;
            return rec;
        }

        std::optional<EdgeId> out_edge = fe->out_edge;
        switch (fe->action) {
            case LabelAction::Swap:
                stack.back() = fe->out_label.value_or(stack.back());
                break;
            case LabelAction::Push:
                if (stack.size() >= kMaxLabelStackDepth || !fe->out_label) {
                    rec.outcome = ForwardOutcome::NoRoute;
                    return rec;
                }
                stack.push_back(*fe->out_label);
                break;
            case LabelAction::Pop:
                stack.pop_back();
                if (stack.empty()) {
                    rec.outcome = here->role == NodeRole::Ler
                                      ? ForwardOutcome::Delivered
                                      : ForwardOutcome::NoRoute;
                    return rec;
                }
                break;
        }

        const Edge* e = out_edge ? index.edge(*out_edge) : nullptr;
        if (e == nullptr) {
            rec.outcome = ForwardOutcome::NoRoute;
            return rec;
        }
        if (rec.edges.size() >= index.node_count()) {
            rec.outcome = ForwardOutcome::LoopAbort;
            return rec;
        }
        rec.edges.push_back(e->id);
        at = e->to;
    }
}

TraversalRecord forward_packet(const NetworkTopology& topo, NodeId ingress,
                               Label initial_label) {
    return forward_packet(ForwardingIndex(topo), ingress, initial_label);
}

std::vector<EdgeId> path_of(const Lsp& lsp) {
    std::vector<EdgeId> out;
    out.reserve(lsp.hops.size());
    for (const auto& [edge, label] : lsp.hops) out.push_back(edge);
    return out;
}

}  // namespace mplsrisk
