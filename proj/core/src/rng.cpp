#include "csra/rng.hpp"

#include <cmath>

namespace csra {
namespace {

// Marsaglia-Tsang ziggurat tables for the standard normal, 128 layers.
// kn[i]: acceptance bound on the raw 32-bit integer, wn[i]: scale to double,
// fn[i]: density at layer edge.
struct ZigguratTables {
    std::uint32_t kn[128];
    double wn[128];
    double fn[128];

    ZigguratTables() {
        const double m = 2147483648.0;  // 2^31
        const double r = 3.442619855899;
        const double v = 9.91256303526217e-3;
        double dn = r, tn = r;
        const double q = v / std::exp(-0.5 * dn * dn);

        kn[0] = static_cast<std::uint32_t>((dn / q) * m);
        kn[1] = 0;
        wn[0] = q / m;
        wn[127] = dn / m;
        fn[0] = 1.0;
        fn[127] = std::exp(-0.5 * dn * dn);
        for (int i = 126; i >= 1; --i) {
            dn = std::sqrt(-2.0 * std::log(v / dn + std::exp(-0.5 * dn * dn)));
            kn[i + 1] = static_cast<std::uint32_t>((dn / tn) * m);
            tn = dn;
            fn[i] = std::exp(-0.5 * dn * dn);
            wn[i] = dn / m;
        }
    }
};

const ZigguratTables& zig() {
    static const ZigguratTables t;
    return t;
}

}  // namespace

double Rng::normal_tail(double x0, bool negative) {
    // Exponential-accept sampling of the tail beyond x0 (Marsaglia 1964).
    double x, y;
    do {
        x = -std::log(1.0 - uniform()) / x0;
        y = -std::log(1.0 - uniform());
    } while (y + y < x * x);
    return negative ? -(x0 + x) : (x0 + x);
}

double Rng::normal() {
    const auto& t = zig();
    const double r = 3.442619855899;
    for (;;) {
        const std::int32_t hz = static_cast<std::int32_t>(next_u32());
        const std::uint32_t iz = static_cast<std::uint32_t>(hz) & 127u;
        if (static_cast<std::uint32_t>(hz < 0 ? -hz : hz) < t.kn[iz]) {
            return hz * t.wn[iz];
        }
        // Rare path: tail or wedge.
        if (iz == 0) return normal_tail(r, hz < 0);
        const double x = hz * t.wn[iz];
        if (t.fn[iz] + uniform() * (t.fn[iz - 1] - t.fn[iz]) < std::exp(-0.5 * x * x)) {
            return x;
        }
    }
}

void Rng::fill_complex_noise(std::span<std::complex<double>> out, double sigma2) {
    if (sigma2 == 0.0) {
        for (auto& v : out) v = {0.0, 0.0};
        return;
    }
    const double sc = std::sqrt(0.5 * sigma2);
    for (auto& v : out) v = {sc * normal(), sc * normal()};
}

}  // namespace csra
