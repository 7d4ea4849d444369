#include "mplsrisk/sim_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <queue>
#include <thread>

#include "mplsrisk/errors.hpp"
#include "mplsrisk/report.hpp"
#include "mplsrisk/rng.hpp"

namespace mplsrisk {

TrialMetrics& TrialMetrics::operator+=(const TrialMetrics& other) {
    spoofed_injected += other.spoofed_injected;
    spoofed_accepted += other.spoofed_accepted;
    for (const auto& [node, c] : other.nodes) {
        NodeCounters& mine = nodes[node];
        mine.offered += c.offered;
        mine.dropped_filter += c.dropped_filter;
        mine.dropped_matrix += c.dropped_matrix;
        mine.dropped_auth += c.dropped_auth;
        mine.dropped_limiter += c.dropped_limiter;
        mine.queue_offered += c.queue_offered;
        mine.dropped_queue += c.dropped_queue;
        mine.served += c.served;
        mine.in_flight += c.in_flight;
    }
    for (const auto& [symbol, count] : other.tapped_symbols)
        tapped_symbols[symbol] += count;
    tapped_count += other.tapped_count;
    tap_crossings += other.tap_crossings;
    delivered += other.delivered;
    limiter_offered += other.limiter_offered;
    limiter_admitted += other.limiter_admitted;
    limit_intervals_total += other.limit_intervals_total;
    limit_intervals_conforming += other.limit_intervals_conforming;
    measured_time += other.measured_time;
    return *this;
}

namespace {

enum class EventType : std::uint8_t {
    LegitSource,
    DosSource,
    SpoofSource,
    Arrival,
    ShaperRelease,
    ServiceComplete,
};

struct Event {
    double time = 0.0;
    std::uint64_t seq = 0;
    EventType type = EventType::Arrival;
    std::uint32_t slot = 0;  // LSP index for LegitSource, node id otherwise
    Packet packet{};
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;
    }
};

// Sampler for a discrete distribution via its CDF.
class DiscreteSampler {
public:
    explicit DiscreteSampler(const SymbolDistribution& dist) {
        double acc = 0.0;
        for (const auto& [symbol, p] : dist.probabilities) {
            acc += p;
            cdf_.emplace_back(acc, symbol);
        }
    }
    SymbolId sample(double u) const {
        for (const auto& [acc, symbol] : cdf_)
            if (u < acc) return symbol;
        return cdf_.back().second;
    }

private:
    std::vector<std::pair<double, SymbolId>> cdf_;
};

struct NodeRuntime {
    const Node* def = nullptr;
    std::uint32_t busy = 0;
    std::deque<Packet> queue;
    bool has_limiter = false;
    bool has_shaper = false;
    double shaper_interval = 0.0;
    double shaper_smoothing = 1.0;
    std::size_t shaper_budget = 0;
    std::deque<double> recent_releases;  // last shaper_budget release times
};

class Trial {
public:
    Trial(const ScenarioFile& sc, std::uint64_t trial_index)
        : sc_(sc),
          index_(sc.topology),
          rng_(RandomStream::for_trial(sc.simulation.seed, trial_index)) {
        if (sc.traffic_symbols) symbols_.emplace(*sc.traffic_symbols);
        if (sc.threat.interception)
            taps_.assign(sc.threat.interception->taps.begin(),
                         sc.threat.interception->taps.end());
        std::sort(taps_.begin(), taps_.end());

        for (const Node& n : sc.topology.nodes) {
            NodeRuntime& rt = nodes_[n.id];
            rt.def = &n;
        }
        if (sc.mitigations.rate_limiter) {
            const RateLimiterAttachment& a = *sc.mitigations.rate_limiter;
            nodes_[a.node].has_limiter = true;
            bucket_.emplace(a.config);
            double window = sc.simulation.horizon - sc.simulation.warmup;
            interval_count_ = static_cast<std::size_t>(window / a.measure_interval + 1e-9);
            interval_arrivals_.assign(interval_count_, 0);
        }
        if (sc.mitigations.shaper) {
            const ShaperAttachment& a = *sc.mitigations.shaper;
            NodeRuntime& rt = nodes_[a.node];
            rt.has_shaper = true;
            rt.shaper_interval = a.config.interval;
            rt.shaper_smoothing = a.config.smoothing;
            rt.shaper_budget = static_cast<std::size_t>(
                a.config.target_profile_rate * a.config.interval + 1e-9);
        }
        if (!sc.threat.spoof.attack_weights.empty()) {
            double acc = 0.0;
            for (const auto& [node, weight] : sc.threat.spoof.attack_weights) {
                acc += weight;
                spoof_node_cdf_.emplace_back(acc, node);
            }
        }
    }

    TrialMetrics run() {
        const SimulationParams& sim = sc_.simulation;
        metrics_.measured_time = sim.horizon - sim.warmup;

        for (std::size_t i = 0; i < sc_.topology.lsps.size(); ++i)
            if (sc_.lsp_arrival_rates[i] > 0.0)
                schedule_source(EventType::LegitSource, static_cast<std::uint32_t>(i), 0.0,
                                sc_.lsp_arrival_rates[i]);
        if (sc_.threat.dos && sc_.threat.dos->arrival_rate > 0.0)
            schedule_source(EventType::DosSource, sc_.threat.dos->target, 0.0,
                            sc_.threat.dos->arrival_rate);
        if (sc_.threat.spoof_injection_rate > 0.0 && !sc_.threat.spoof.labels.empty())
            schedule_source(EventType::SpoofSource, 0, 0.0, sc_.threat.spoof_injection_rate);

        while (!events_.empty() && events_.top().time <= sim.horizon) {
            Event ev = events_.top();
            events_.pop();
            dispatch(ev);
        }
        finalize_in_flight();
        finalize_intervals();
        return std::move(metrics_);
    }

private:
    bool counted(const Packet& p) const { return p.created_at >= sc_.simulation.warmup; }
    bool counted_time(double t) const { return t >= sc_.simulation.warmup; }

    void push_event(Event ev) {
        ev.seq = next_seq_++;
        events_.push(std::move(ev));
    }

    // Source events reschedule themselves with exponential gaps; the first
    // firing is one gap after time zero.
    void schedule_source(EventType type, std::uint32_t slot, double now, double rate) {
        double next = now + rng_.exponential(rate);
        if (next > sc_.simulation.horizon) return;
        Event ev;
        ev.time = next;
        ev.type = type;
        ev.slot = slot;
        push_event(std::move(ev));
    }

    void dispatch(const Event& ev) {
        switch (ev.type) {
            case EventType::LegitSource:
                fire_legit(ev);
                break;
            case EventType::DosSource:
                fire_dos(ev);
                break;
            case EventType::SpoofSource:
                fire_spoof(ev);
                break;
            case EventType::Arrival:
                handle_arrival(ev.slot, ev.packet, ev.time);
                break;
            case EventType::ShaperRelease:
                enter_queue(ev.slot, ev.packet, ev.time);
                break;
            case EventType::ServiceComplete:
                complete_service(ev.slot, ev.packet, ev.time);
                break;
        }
    }

    void fire_legit(const Event& ev) {
        const Lsp& lsp = sc_.topology.lsps[ev.slot];
        Packet p;
        p.id = next_packet_id_++;
        p.kind = PacketKind::Legitimate;
        p.symbol = symbols_ ? symbols_->sample(rng_.next_double()) : kReservedSymbol;
        p.stack[0] = lsp.hops.front().second;
        p.depth = 1;
        p.created_at = ev.time;
        send_arrival(lsp.ingress, p, ev.time);
        schedule_source(EventType::LegitSource, ev.slot, ev.time,
                        sc_.lsp_arrival_rates[ev.slot]);
    }

    void fire_dos(const Event& ev) {
        const DosConfig& dos = *sc_.threat.dos;
        Packet p;
        p.id = next_packet_id_++;
        p.kind = PacketKind::Dos;
        if (dos.label) {
            p.stack[0] = *dos.label;
            p.depth = 1;
        }
        p.created_at = ev.time;
        send_arrival(dos.target, p, ev.time);
        schedule_source(EventType::DosSource, ev.slot, ev.time, dos.arrival_rate);
    }

    // One injection attempt. The node's in-use label is drawn uniformly
    // from the space; the attempt proceeds only when it falls inside the
    // spoofed set, so per-attempt acceptance converges on
    // spoof_acceptance_probability.
    void fire_spoof(const Event& ev) {
        if (counted_time(ev.time)) ++metrics_.spoofed_injected;
        NodeId node = sample_spoof_node(rng_.next_double());
        Label in_use = static_cast<Label>(rng_.next_below(sc_.label_space.size));
        if (std::binary_search(sc_.threat.spoof.labels.begin(),
                               sc_.threat.spoof.labels.end(), in_use)) {
            Packet p;
            p.id = next_packet_id_++;
            p.kind = PacketKind::Spoofed;
            p.stack[0] = in_use;
            p.depth = 1;
            p.created_at = ev.time;
            send_arrival(node, p, ev.time);
        }
        schedule_source(EventType::SpoofSource, 0, ev.time,
                        sc_.threat.spoof_injection_rate);
    }

    NodeId sample_spoof_node(double u) const {
        for (const auto& [acc, node] : spoof_node_cdf_)
            if (u < acc) return node;
        return spoof_node_cdf_.back().second;
    }

    void send_arrival(NodeId node, const Packet& p, double t) {
        Event ev;
        ev.time = t;
        ev.type = EventType::Arrival;
        ev.slot = node;
        ev.packet = p;
        push_event(std::move(ev));
    }

    // Node entry pipeline, in fixed order:
    // filter -> access matrix -> auth -> rate limiter -> shaper -> queue.
    // Label-plane checks run once, where the packet enters the network.
    void handle_arrival(NodeId node, Packet p, double t) {
        NodeCounters& c = metrics_.nodes[node];
        bool count = counted(p);
        if (count) ++c.offered;

        if (p.at_entry) {
            bool label_checked = p.depth > 0 && p.kind != PacketKind::Dos;
            bool dos_labeled = p.kind == PacketKind::Dos && p.depth > 0;

            if ((label_checked || dos_labeled) && sc_.mitigations.filter &&
                !filter_passes(p.top(), *sc_.mitigations.filter)) {
                if (count) ++c.dropped_filter;
                return;
            }
            if ((label_checked || dos_labeled) && sc_.mitigations.access_matrix &&
                !check_access(node, p.top(), *sc_.mitigations.access_matrix)) {
                if (count) ++c.dropped_matrix;
                return;
            }
            if (sc_.mitigations.auth.enabled && label_checked) {
                if (!verify_label_plane(p)) {
                    if (count) ++c.dropped_auth;
                    return;
                }
            }
            if (p.kind == PacketKind::Spoofed && count) ++metrics_.spoofed_accepted;
            p.at_entry = false;
        }

        NodeRuntime& rt = nodes_.at(node);
        if (rt.has_limiter) {
            record_limiter_offered(t);
            bool admitted = bucket_->admit(t);
            if (!admitted) {
                if (count) ++c.dropped_limiter;
                return;
            }
            if (counted_time(t)) ++metrics_.limiter_admitted;
        }

        if (rt.has_shaper) {
            double release = shaped_release(rt, t);
            if (release > t) {
                Event ev;
                ev.time = release;
                ev.type = EventType::ShaperRelease;
                ev.slot = node;
                ev.packet = p;
                push_event(std::move(ev));
                return;
            }
        }
        enter_queue(node, p, t);
    }

    // Legitimate packets carry a binding signed under the scenario key and
    // always verify; spoofed packets carry a forged token and pass only
    // with forgery probability.
    bool verify_label_plane(const Packet& p) {
        const AuthModel& auth = sc_.mitigations.auth;
        if (p.kind == PacketKind::Legitimate) {
            LabelBinding binding = sign_binding(p.top(), auth);
            return verify_binding(binding, auth, 0.0);
        }
        LabelBinding legit = sign_binding(p.top(), auth);
        LabelBinding forged{p.top(), legit.signature ^ 0x1ULL, 0};
        return verify_binding(forged, auth, rng_.next_double());
    }

    void record_limiter_offered(double t) {
        if (counted_time(t)) ++metrics_.limiter_offered;
        if (interval_count_ == 0) return;
        double w = sc_.mitigations.rate_limiter->measure_interval;
        double rel = t - sc_.simulation.warmup;
        if (rel < 0.0) return;
        auto idx = static_cast<std::size_t>(rel / w);
        if (idx < interval_count_) ++interval_arrivals_[idx];
    }

    // Minimal-delay release against the (rate, interval) profile, same
    // recurrence as shape_traffic.
    double shaped_release(NodeRuntime& rt, double t) {
        double minimal = t;
        if (rt.recent_releases.size() >= rt.shaper_budget)
            minimal = std::max(minimal, rt.recent_releases.front() + rt.shaper_interval);
        double release = t + rt.shaper_smoothing * (minimal - t);
        if (!rt.recent_releases.empty())
            release = std::max(release, rt.recent_releases.back());
        rt.recent_releases.push_back(release);
        if (rt.recent_releases.size() > rt.shaper_budget) rt.recent_releases.pop_front();
        return release;
    }

    void enter_queue(NodeId node, const Packet& p, double t) {
        NodeRuntime& rt = nodes_.at(node);
        NodeCounters& c = metrics_.nodes[node];
        if (counted(p)) ++c.queue_offered;

        if (rt.busy < rt.def->server_count) {
            ++rt.busy;
            schedule_completion(node, p, t);
            return;
        }
        if (!rt.def->queue_capacity || rt.queue.size() < *rt.def->queue_capacity) {
            rt.queue.push_back(p);
            return;
        }
        if (counted(p)) ++c.dropped_queue;
    }

    void schedule_completion(NodeId node, const Packet& p, double t) {
        Event ev;
        ev.time = t + rng_.exponential(nodes_.at(node).def->service_rate);
        ev.type = EventType::ServiceComplete;
        ev.slot = node;
        ev.packet = p;
        push_event(std::move(ev));
    }

    void complete_service(NodeId node, const Packet& p, double t) {
        NodeRuntime& rt = nodes_.at(node);
        NodeCounters& c = metrics_.nodes[node];
        --rt.busy;
        if (counted(p)) ++c.served;

        if (!rt.queue.empty()) {
            Packet next = rt.queue.front();
            rt.queue.pop_front();
            ++rt.busy;
            schedule_completion(node, next, t);
        }

        if (p.kind != PacketKind::Dos) route_onward(node, p, t);
    }

    // One forwarding-table step, mirroring forward_packet.
    void route_onward(NodeId node, Packet p, double t) {
        if (p.depth == 0) return;
        const ForwardingEntry* fe = index_.entry(node, p.top());
        if (fe == nullptr) return;  // no route: packet leaves the model

        switch (fe->action) {
            case LabelAction::Swap:
                if (fe->out_label) p.stack[p.depth - 1] = *fe->out_label;
                break;
            case LabelAction::Push:
                if (p.depth >= kMaxLabelStackDepth || !fe->out_label) return;
                p.stack[p.depth++] = *fe->out_label;
                break;
            case LabelAction::Pop:
                --p.depth;
                if (p.depth == 0) {
                    const Node* here = index_.node(node);
                    if (here && here->role == NodeRole::Ler && counted(p))
                        ++metrics_.delivered;
                    return;
                }
                break;
        }

        const Edge* e = fe->out_edge ? index_.edge(*fe->out_edge) : nullptr;
        if (e == nullptr) return;
        if (p.hops >= index_.node_count()) return;  // loop guard
        ++p.hops;
        record_tap(e->id, p);
        send_arrival(e->to, p, t);
    }

    void record_tap(EdgeId edge, const Packet& p) {
        if (!sc_.threat.interception || p.symbol == kReservedSymbol || !counted(p)) return;
        if (!std::binary_search(taps_.begin(), taps_.end(), edge)) return;
        ++metrics_.tap_crossings;
        if (rng_.next_double() < sc_.threat.interception->tap_probability) {
            ++metrics_.tapped_symbols[p.symbol];
            ++metrics_.tapped_count;
        }
    }

    void finalize_in_flight() {
        while (!events_.empty()) {
            const Event& ev = events_.top();
            if ((ev.type == EventType::ServiceComplete ||
                 ev.type == EventType::ShaperRelease) &&
                counted(ev.packet))
                ++metrics_.nodes[ev.slot].in_flight;
            events_.pop();
        }
        for (const auto& [id, rt] : nodes_)
            for (const Packet& p : rt.queue)
                if (counted(p)) ++metrics_.nodes[id].in_flight;
    }

    void finalize_intervals() {
        if (interval_count_ == 0) return;
        double w = sc_.mitigations.rate_limiter->measure_interval;
        double budget = sc_.mitigations.rate_limiter->config.max_rate * w;
        metrics_.limit_intervals_total += interval_count_;
        for (std::uint64_t n : interval_arrivals_)
            if (static_cast<double>(n) <= budget + 1e-9)
                ++metrics_.limit_intervals_conforming;
    }

    const ScenarioFile& sc_;
    ForwardingIndex index_;
    RandomStream rng_;
    TrialMetrics metrics_;
    std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
    std::map<NodeId, NodeRuntime> nodes_;
    std::optional<DiscreteSampler> symbols_;
    std::optional<TokenBucket> bucket_;
    std::vector<EdgeId> taps_;
    std::vector<std::pair<double, NodeId>> spoof_node_cdf_;
    std::vector<std::uint64_t> interval_arrivals_;
    std::size_t interval_count_ = 0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t next_packet_id_ = 0;
};

}  // namespace

std::vector<Verdict> compare(const RiskReport& report) {
    std::vector<Verdict> verdicts;
    verdicts.reserve(report.metrics.size());
    for (const MetricEntry& m : report.metrics) {
        if (!m.analytic || !m.empirical) {
            verdicts.push_back(Verdict::AnalyticOnly);
            continue;
        }
        double tolerance = m.half_width.value_or(0.0) + 1e-12;
        verdicts.push_back(std::abs(*m.empirical - *m.analytic) <= tolerance
                               ? Verdict::Consistent
                               : Verdict::Divergent);
    }
    return verdicts;
}

TrialMetrics run_trial(const ScenarioFile& scenario, std::uint64_t trial_index) {
    Trial trial(scenario, trial_index);
    return trial.run();
}

RiskReport run_experiment(const ScenarioFile& scenario, unsigned threads) {
    const std::uint32_t trials = scenario.simulation.trials;
    std::vector<TrialMetrics> results(trials);

    unsigned workers = std::max(1u, std::min<unsigned>(threads, trials));
    if (workers == 1) {
        for (std::uint32_t t = 0; t < trials; ++t) results[t] = run_trial(scenario, t);
    } else {
        std::atomic<std::uint32_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    std::uint32_t t = next.fetch_add(1);
                    if (t >= trials) return;
                    results[t] = run_trial(scenario, t);
                }
            });
        for (std::thread& th : pool) th.join();
    }

    // Merge order is fixed by trial index, independent of execution order.
    TrialMetrics merged;
    for (std::uint32_t t = 0; t < trials; ++t) merged += results[t];

    return build_risk_report(scenario, &merged, trials);
}

}  // namespace mplsrisk
