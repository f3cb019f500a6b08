#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "tokentopo/forecast.hpp"
#include "tokentopo/rng.hpp"

namespace {

using namespace tokentopo;

// Seven noisy features with a planted threshold rule on the first two.
forecast::Dataset planted_dataset(int rows, std::uint64_t seed) {
    Rng rng(seed);
    forecast::Dataset data;
    data.x.reserve(static_cast<std::size_t>(rows));
    data.y.reserve(static_cast<std::size_t>(rows));
    for (int i = 0; i < rows; ++i) {
        std::vector<double> row(7);
        for (auto& v : row) v = rng.uniform(0.0, 1.0);
        const bool hot = row[0] > 0.7 && row[1] < 0.4;
        data.x.push_back(std::move(row));
        data.y.push_back(hot != rng.bernoulli(0.05) ? 1 : 0);
        data.dates.emplace_back(18628 + i);
    }
    return data;
}

void bench_train_forest(benchmark::State& state) {
    const auto data = planted_dataset(400, 17);
    forecast::ForestParams params;
    params.num_trees = static_cast<int>(state.range(0));
    params.jobs = static_cast<int>(state.range(1));
    params.seed = 5;
    for (auto _ : state) {
        auto model = forecast::train_forest(data, forecast::ModelId::M4, 7, params);
        benchmark::DoNotOptimize(model);
    }
}

void bench_predict(benchmark::State& state) {
    const auto train = planted_dataset(400, 17);
    const auto test = planted_dataset(static_cast<int>(state.range(0)), 23);
    forecast::ForestParams params;
    params.num_trees = 500;
    params.seed = 5;
    const auto model = forecast::train_forest(train, forecast::ModelId::M4, 7, params);
    for (auto _ : state) {
        auto preds = forecast::predict(model, test);
        benchmark::DoNotOptimize(preds);
    }
}

}  // namespace

BENCHMARK(bench_train_forest)->Args({100, 1})->Args({500, 1})->Args({500, 4});
BENCHMARK(bench_predict)->Arg(100)->Arg(1000);
