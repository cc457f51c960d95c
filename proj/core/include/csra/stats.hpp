#pragma once

#include <cstdint>

namespace csra {

struct PlrEstimate {
    std::uint64_t msgs_total = 0;
    std::uint64_t msgs_lost = 0;
    double plr = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

// Wilson score interval for a binomial proportion. z defaults to the 95%
// two-sided quantile. Throws std::invalid_argument on total == 0.
PlrEstimate wilson_interval(std::uint64_t lost, std::uint64_t total,
                            double z = 1.959963984540054);

}  // namespace csra
