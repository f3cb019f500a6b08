#include <benchmark/benchmark.h>

#include <cstdio>
#include <string>
#include <vector>

#include "tokentopo/graph.hpp"
#include "tokentopo/homology.hpp"
#include "tokentopo/rng.hpp"

namespace {

using namespace tokentopo;

DailyGraph dense_graph(int n, double edge_prob, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::string> addresses;
    addresses.reserve(static_cast<std::size_t>(n));
    char buf[8];
    for (int i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "a%03d", i);
        addresses.emplace_back(buf);
    }
    std::vector<DailyGraph::Edge> edges;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (!rng.bernoulli(edge_prob)) continue;
            DailyGraph::Edge e;
            e.u = u;
            e.v = v;
            e.amount = rng.uniform(0.5, 100.0);
            e.weight = rng.uniform(0.1, 1.0);
            edges.push_back(e);
        }
    }
    return DailyGraph("bench", Date(18628), std::move(addresses), std::move(edges));
}

void bench_build_filtration(benchmark::State& state) {
    const auto g = dense_graph(static_cast<int>(state.range(0)), 0.3, 99);
    homology::FiltrationSpec spec;
    std::size_t simplices = 0;
    for (auto _ : state) {
        auto complex = homology::build_filtration(g, spec);
        simplices = complex.simplices.size();
        benchmark::DoNotOptimize(complex);
    }
    state.counters["simplices"] = static_cast<double>(simplices);
}

void bench_betti_curves(benchmark::State& state) {
    const auto g = dense_graph(static_cast<int>(state.range(0)), 0.3, 99);
    homology::FiltrationSpec spec;
    for (auto _ : state) {
        auto curves = homology::betti_curves(homology::build_filtration(g, spec), spec);
        benchmark::DoNotOptimize(curves);
    }
}

}  // namespace

BENCHMARK(bench_build_filtration)->Arg(8)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(bench_betti_curves)->Arg(8)->Arg(16)->Arg(32)->Arg(64);
