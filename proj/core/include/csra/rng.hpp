#pragma once

#include <complex>
#include <cstdint>
#include <span>

namespace csra {

// splitmix64 finalizer; used for seed expansion and stream derivation.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic per-trial stream seed: a counter-based hash chain, so results
// are independent of worker count and scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point_tag,
                                    std::uint64_t trial, std::uint64_t stream_tag) {
    std::uint64_t h = mix64(master);
    h = mix64(h ^ mix64(point_tag));
    h = mix64(h ^ mix64(trial));
    h = mix64(h ^ mix64(stream_tag));
    return h;
}

// xoshiro256++ with a hand-rolled uniform/normal layer. The standard library
// distributions are implementation-defined, which would break bitwise
// reproducibility of campaign output across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) { reseed(seed); }

    void reseed(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) w = mix64(x++);
        have_u32_ = false;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    std::uint32_t next_u32() {
        if (have_u32_) {
            have_u32_ = false;
            return spare_u32_;
        }
        const std::uint64_t v = next_u64();
        spare_u32_ = static_cast<std::uint32_t>(v >> 32);
        have_u32_ = true;
        return static_cast<std::uint32_t>(v);
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer on [0, n); n >= 1.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t v = next_u64();
            if (v >= threshold) return v % n;
        }
    }

    // Standard normal via 128-layer ziggurat (exact Gaussian tails).
    double normal();

    std::complex<double> complex_normal(double sigma_component) {
        return {sigma_component * normal(), sigma_component * normal()};
    }

    // Fills with i.i.d. circularly symmetric complex Gaussians of total
    // variance sigma2 (variance sigma2/2 per component).
    void fill_complex_noise(std::span<std::complex<double>> out, double sigma2);

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    double normal_tail(double x0, bool negative);

    std::uint64_t s_[4]{};
    std::uint32_t spare_u32_ = 0;
    bool have_u32_ = false;
};

}  // namespace csra
