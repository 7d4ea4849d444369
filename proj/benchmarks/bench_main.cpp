#include <benchmark/benchmark.h>

#include <vector>

#include "mplsrisk/interception.hpp"
#include "mplsrisk/queueing.hpp"
#include "mplsrisk/rng.hpp"
#include "mplsrisk/scenario.hpp"
#include "mplsrisk/sim_engine.hpp"
#include "mplsrisk/topology.hpp"

namespace {

using namespace mplsrisk;

void BM_ErlangB(benchmark::State& state) {
    const auto servers = static_cast<std::uint32_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(erlang_b(0.8 * servers, servers));
}
BENCHMARK(BM_ErlangB)->Arg(10)->Arg(100)->Arg(1000);

void BM_ShannonEntropy(benchmark::State& state) {
    SymbolDistribution dist;
    const auto n = static_cast<std::size_t>(state.range(0));
    for (std::size_t i = 0; i < n; ++i)
        dist.probabilities.emplace_back(static_cast<SymbolId>(i), 1.0 / n);
    for (auto _ : state)
        benchmark::DoNotOptimize(shannon_entropy(dist));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ShannonEntropy)->Range(16, 4096)->Complexity();

NetworkTopology chain_topology(std::size_t hops) {
    NetworkTopology t;
    t.label_space_size = 64;
    for (std::size_t i = 0; i <= hops; ++i)
        t.nodes.push_back({static_cast<NodeId>(i),
                           (i == 0 || i == hops) ? NodeRole::Ler : NodeRole::Lsr, 10.0, 1,
                           {}});
    for (std::size_t i = 0; i < hops; ++i) {
        t.edges.push_back({static_cast<EdgeId>(i), static_cast<NodeId>(i),
                           static_cast<NodeId>(i + 1)});
        t.forwarding.push_back({static_cast<NodeId>(i), 5, LabelAction::Swap, 5,
                                static_cast<EdgeId>(i)});
    }
    t.forwarding.push_back({static_cast<NodeId>(hops), 5, LabelAction::Pop, {}, {}});
    return t;
}

void BM_ForwardPacket(benchmark::State& state) {
    NetworkTopology topo = chain_topology(static_cast<std::size_t>(state.range(0)));
    ForwardingIndex index(topo);
    for (auto _ : state)
        benchmark::DoNotOptimize(forward_packet(index, 0, 5));
}
BENCHMARK(BM_ForwardPacket)->Arg(4)->Arg(16)->Arg(64);

void BM_TokenBucket(benchmark::State& state) {
    RandomStream rng(1);
    std::vector<double> times;
    double t = 0.0;
    for (int i = 0; i < 4096; ++i) times.push_back(t += rng.exponential(100.0));
    for (auto _ : state) {
        TokenBucket bucket({50.0, 16.0});
        std::uint64_t admitted = 0;
        for (double at : times) admitted += bucket.admit(at) ? 1 : 0;
        benchmark::DoNotOptimize(admitted);
    }
}
BENCHMARK(BM_TokenBucket);

void BM_ShapeTraffic(benchmark::State& state) {
    RandomStream rng(2);
    std::vector<double> arrivals;
    double t = 0.0;
    for (int i = 0; i < 4096; ++i)
        arrivals.push_back(t += rng.exponential(i % 16 ? 0.8 : 12.0));
    ShaperConfig cfg{1.0, 4.0, 1.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(shape_traffic(arrivals, cfg));
}
BENCHMARK(BM_ShapeTraffic);

ScenarioFile bench_scenario() {
    return load_scenario_from_string(R"({
      "version": 1,
      "topology": {
        "nodes": [
          {"id": 0, "role": "LER", "service_rate": 40.0},
          {"id": 1, "role": "LSR", "service_rate": 40.0},
          {"id": 2, "role": "LER", "service_rate": 40.0}
        ],
        "edges": [{"id": 0, "from": 0, "to": 1}, {"id": 1, "from": 1, "to": 2}],
        "forwarding": [
          {"node": 0, "in_label": 5, "action": "SWAP", "out_label": 7, "out_edge": 0},
          {"node": 1, "in_label": 7, "action": "SWAP", "out_label": 7, "out_edge": 1},
          {"node": 2, "in_label": 7, "action": "POP"}
        ],
        "lsps": [{"ingress": 0, "egress": 2, "hops": [[0, 5], [1, 7]], "arrival_rate": 10.0}]
      },
      "label_space": {"size": 64},
      "spoof": {"labels": [1, 2, 3, 4], "attack_weights": [[0, 1.0]], "injection_rate": 5.0},
      "dos": {"arrival_rate": 6.0, "target": 1},
      "simulation": {"seed": 5, "horizon": 200.0, "trials": 1, "warmup": 0.0}
    })");
}

void BM_RunTrial(benchmark::State& state) {
    ScenarioFile sc = bench_scenario();
    std::uint64_t trial = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(run_trial(sc, trial++));
}
BENCHMARK(BM_RunTrial);

}  // namespace

BENCHMARK_MAIN();
