#include "ridemarket/network.hpp"
#include "ridemarket/rng.hpp"
#include "ridemarket/simulation.hpp"
#include "ridemarket/withinday.hpp"

#include <benchmark/benchmark.h>

using namespace ridemarket;

namespace {

ScenarioConfig bench_config() {
    ScenarioConfig cfg;
    cfg.name = "bench";
    cfg.travelers = 200;
    cfg.drivers = 20;
    cfg.horizon_days = 10;
    cfg.game.enabled = false;
    return cfg;
}

void bm_grid_distances(benchmark::State& state) {
    auto rows = static_cast<int>(state.range(0));
    RoadNetwork net = generate_grid(rows, rows, 500.0, 10.0);
    SplitMix64 rng(7);
    const std::size_t n = net.node_count();
    for (auto _ : state) {
        auto o = rng.uniform_int(n);
        auto d = rng.uniform_int(n);
        benchmark::DoNotOptimize(net.path_length_by_index(o, d));
    }
}
BENCHMARK(bm_grid_distances)->Arg(5)->Arg(20);

void bm_run_day(benchmark::State& state) {
    RoadNetwork net = generate_grid(5, 5, 500.0, 10.0);
    SplitMix64 rng(11);
    std::vector<PlacedRequest> requests;
    for (int i = 0; i < 150; ++i) {
        auto o = static_cast<std::int64_t>(rng.uniform_int(25));
        auto d = static_cast<std::int64_t>(rng.uniform_int(25));
        if (o == d)
            d = (d + 1) % 25;
        requests.push_back({{i, o, d, static_cast<int>(rng.uniform_int(14400))},
                            static_cast<PlatformId>(rng.uniform_int(2))});
    }
    std::vector<DriverShiftState> drivers;
    for (int i = 0; i < 16; ++i) {
        DriverShiftState d;
        d.driver = i;
        d.platform = static_cast<PlatformId>(i % 2);
        d.position = static_cast<std::int64_t>(rng.uniform_int(25));
        drivers.push_back(d);
    }
    std::vector<double> fares{1.4, 1.4};
    for (auto _ : state) {
        auto out = run_day(net, requests, drivers, fares, 14400);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(bm_run_day);

void bm_plain_day(benchmark::State& state) {
    WorldState world = setup_world(bench_config());
    for (auto _ : state) {
        WorldState w = world;
        benchmark::DoNotOptimize(advance_one_day(w));
    }
}
BENCHMARK(bm_plain_day);

} // namespace

BENCHMARK_MAIN();
