#include <benchmark/benchmark.h>

#include "csra/channel.hpp"
#include "csra/config.hpp"

namespace {

using namespace csra;

const SimConfig& cfg() {
    static const SimConfig c;
    return c;
}

UlaSpec user_array(double y) {
    return UlaSpec({0.0, y, 0.0}, {0.0, 1.0, 0.0}, cfg().n_t, cfg().element_spacing_m());
}

void bm_channel_build(benchmark::State& state) {
    const UlaSpec elaa = cfg().elaa_spec();
    const UlaSpec tx = user_array(1.25);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ChannelMatrix::los(elaa, tx, cfg().lambda_m()));
    }
}
BENCHMARK(bm_channel_build);

void bm_channel_product(benchmark::State& state) {
    const ChannelMatrix h = ChannelMatrix::los(cfg().elaa_spec(), user_array(-0.8), cfg().lambda_m());
    const BeamCodebook book(cfg().n_t);
    const Eigen::VectorXcd& w = book.vector(3);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(h.rows());
    for (auto _ : state) {
        h.accumulate_product(w, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(bm_channel_product);

void bm_noise_fill(benchmark::State& state) {
    Rng rng(9);
    Eigen::MatrixXcd block(cfg().n_r(), cfg().n_p);
    const double sigma2 = cfg().sigma2();
    for (auto _ : state) {
        rng.fill_complex_noise({block.data(), static_cast<std::size_t>(block.size())}, sigma2);
        benchmark::DoNotOptimize(block.data());
    }
}
BENCHMARK(bm_noise_fill);

}  // namespace
