#include "csra/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace csra {

PlrEstimate wilson_interval(std::uint64_t lost, std::uint64_t total, double z) {
    if (total == 0) throw std::invalid_argument("wilson_interval: total == 0");
    if (lost > total) throw std::invalid_argument("wilson_interval: lost > total");
    const double n = static_cast<double>(total);
    const double p = static_cast<double>(lost) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double radius = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    PlrEstimate e;
    e.msgs_total = total;
    e.msgs_lost = lost;
    e.plr = p;
    // At the boundary counts center == radius analytically; snap so the
    // cancellation residue does not leak into the serialized tables.
    e.ci_low = lost == 0 ? 0.0 : std::max(0.0, center - radius);
    e.ci_high = lost == total ? 1.0 : std::min(1.0, center + radius);
    return e;
}

}  // namespace csra
