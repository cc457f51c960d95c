#include <benchmark/benchmark.h>

#include "csra/campaign.hpp"

namespace {

using namespace csra;

SimConfig at_load(int k, int r) {
    SimConfig cfg;
    cfg.k = k;
    cfg.r = r;
    return cfg;
}

void bm_synthesize_trial(benchmark::State& state) {
    const SimConfig cfg = at_load(static_cast<int>(state.range(0)), 4);
    std::uint64_t seed = 100;
    for (auto _ : state) benchmark::DoNotOptimize(synthesize_trial(seed++, cfg));
}
BENCHMARK(bm_synthesize_trial)->Arg(10)->Arg(25)->Arg(50);

void bm_decode_no_sic(benchmark::State& state) {
    SimConfig cfg = at_load(static_cast<int>(state.range(0)), 4);
    cfg.sic = false;
    std::uint64_t seed = 200;
    for (auto _ : state) {
        state.PauseTiming();
        ReceivedSlot slot = synthesize_trial(seed++, cfg);
        state.ResumeTiming();
        benchmark::DoNotOptimize(decode_trial(slot, cfg));
    }
}
BENCHMARK(bm_decode_no_sic)->Arg(25)->Arg(50);

void bm_decode_sic(benchmark::State& state) {
    const SimConfig cfg = at_load(static_cast<int>(state.range(0)), 4);
    std::uint64_t seed = 300;
    for (auto _ : state) {
        state.PauseTiming();
        ReceivedSlot slot = synthesize_trial(seed++, cfg);
        state.ResumeTiming();
        benchmark::DoNotOptimize(decode_trial(slot, cfg));
    }
}
BENCHMARK(bm_decode_sic)->Arg(25)->Arg(50);

void bm_full_trial(benchmark::State& state) {
    const SimConfig cfg = at_load(25, 4);
    std::uint64_t seed = 400;
    for (auto _ : state) benchmark::DoNotOptimize(run_slot(seed++, cfg));
}
BENCHMARK(bm_full_trial);

}  // namespace
