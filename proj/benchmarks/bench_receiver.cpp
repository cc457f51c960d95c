#include <benchmark/benchmark.h>

#include "csra/campaign.hpp"
#include "csra/pilots.hpp"
#include "csra/receiver.hpp"

namespace {

using namespace csra;

// One shared K=25 R=4 slot; receiver stages are benchmarked in isolation.
struct Fixture {
    SimConfig cfg;
    ReceivedSlot slot;
    Eigen::MatrixXcd pilots;
    DetectionMap map;
    std::vector<Cluster> clusters;

    Fixture() {
        cfg.k = 25;
        cfg.r = 4;
        slot = synthesize_trial(17, cfg);
        pilots = walsh_pilots(cfg.pilot_count, cfg.n_p);
        map = build_detection_map(slot.pilot_part, pilots, cfg.tx_power_w, cfg.eta());
        clusters = build_clusters(map, false);
    }
};

const Fixture& fx() {
    static const Fixture f;
    return f;
}

void bm_estimate_channels(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            estimate_channels(fx().slot.pilot_part, fx().pilots, fx().cfg.tx_power_w));
    }
}
BENCHMARK(bm_estimate_channels);

void bm_detection_map(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_detection_map(fx().slot.pilot_part, fx().pilots,
                                                     fx().cfg.tx_power_w, fx().cfg.eta()));
    }
}
BENCHMARK(bm_detection_map);

void bm_clustering(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(build_clusters(fx().map, false));
}
BENCHMARK(bm_clustering);

void bm_mrc_largest_cluster(benchmark::State& state) {
    const Cluster* widest = &fx().clusters.front();
    for (const Cluster& c : fx().clusters) {
        if (c.span.size() > widest->span.size()) widest = &c;
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(mrc_combine(fx().slot.payload_part, fx().map.est, *widest));
    }
    state.counters["rows"] = widest->span.size();
}
BENCHMARK(bm_mrc_largest_cluster);

}  // namespace
