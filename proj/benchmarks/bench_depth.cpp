#include <benchmark/benchmark.h>

#include <algorithm>
#include <vector>

#include "tokentopo/depth.hpp"
#include "tokentopo/homology.hpp"
#include "tokentopo/rng.hpp"

namespace {

using namespace tokentopo;

std::vector<homology::BettiCurve> curve_family(int count, int breaks, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<homology::BettiCurve> curves;
    curves.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        homology::BettiCurve c;
        c.breakpoints.push_back(0.0);
        for (int b = 1; b < breaks; ++b) c.breakpoints.push_back(rng.uniform(0.0, 1.0));
        std::sort(c.breakpoints.begin(), c.breakpoints.end());
        c.breakpoints.erase(std::unique(c.breakpoints.begin(), c.breakpoints.end()),
                            c.breakpoints.end());
        for (std::size_t b = 0; b < c.breakpoints.size(); ++b)
            c.values.push_back(static_cast<int>(rng.below(8)));
        curves.push_back(std::move(c));
    }
    return curves;
}

void bench_mbd_all(benchmark::State& state) {
    const auto curves = curve_family(static_cast<int>(state.range(0)), 12, 7);
    for (auto _ : state) {
        auto depths = depth::mbd_all(curves);
        benchmark::DoNotOptimize(depths);
    }
}

void bench_rolling_depth(benchmark::State& state) {
    const int days = static_cast<int>(state.range(0));
    auto curves = curve_family(days, 12, 11);
    std::vector<Date> dates;
    dates.reserve(static_cast<std::size_t>(days));
    for (int i = 0; i < days; ++i) dates.emplace_back(18628 + i);
    for (auto _ : state) {
        auto rd = depth::rolling_depth(dates, curves, 30);
        benchmark::DoNotOptimize(rd);
    }
}

}  // namespace

BENCHMARK(bench_mbd_all)->Arg(8)->Arg(32)->Arg(128)->Arg(512);
BENCHMARK(bench_rolling_depth)->Arg(90)->Arg(365);
