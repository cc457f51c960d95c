#include <benchmark/benchmark.h>

#include "csra/bch.hpp"
#include "csra/qpsk.hpp"
#include "csra/rng.hpp"

namespace {

using namespace csra;

void bm_encode(benchmark::State& state) {
    Rng rng(1);
    const MessageBits msg = MessageBits::random(rng);
    for (auto _ : state) benchmark::DoNotOptimize(bch_encode(msg));
}
BENCHMARK(bm_encode);

void bm_decode_clean(benchmark::State& state) {
    Rng rng(2);
    const Codeword cw = bch_encode(MessageBits::random(rng));
    for (auto _ : state) benchmark::DoNotOptimize(bch_decode(cw));
}
BENCHMARK(bm_decode_clean);

void bm_decode_errors(benchmark::State& state) {
    Rng rng(3);
    Codeword cw = bch_encode(MessageBits::random(rng));
    const int e = static_cast<int>(state.range(0));
    for (int i = 0; i < e; ++i) cw.flip(37 * (i + 1));
    for (auto _ : state) benchmark::DoNotOptimize(bch_decode(cw));
}
BENCHMARK(bm_decode_errors)->Arg(1)->Arg(5)->Arg(10);

// The receiver's dominant codec path: rejecting a noise-only cluster.
void bm_decode_garbage(benchmark::State& state) {
    Rng rng(4);
    Codeword cw;
    for (int i = 0; i < Codeword::kCodeBits; ++i) {
        if (rng.uniform() < 0.5) cw.set(i, true);
    }
    for (auto _ : state) benchmark::DoNotOptimize(bch_decode(cw));
}
BENCHMARK(bm_decode_garbage);

void bm_qpsk_roundtrip(benchmark::State& state) {
    Rng rng(5);
    const Codeword cw = bch_encode(MessageBits::random(rng));
    for (auto _ : state) {
        const Eigen::VectorXcd sym = qpsk_map(cw);
        benchmark::DoNotOptimize(qpsk_demap(sym));
    }
}
BENCHMARK(bm_qpsk_roundtrip);

}  // namespace
