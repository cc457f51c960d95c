#include "csra/pilots.hpp"

#include <bit>
#include <stdexcept>

namespace csra {

Eigen::MatrixXcd walsh_pilots(int count, int length) {
    if (length < 1 || !std::has_single_bit(static_cast<unsigned>(length))) {
        throw std::invalid_argument("walsh_pilots: length must be a power of two");
    }
    if (count < 1 || count > length) {
        throw std::invalid_argument("walsh_pilots: count must be in [1, length]");
    }
    Eigen::MatrixXcd p(count, length);
    for (int i = 0; i < count; ++i) {
        for (int j = 0; j < length; ++j) {
            const int par = std::popcount(static_cast<unsigned>(i & j)) & 1;
            p(i, j) = par ? -1.0 : 1.0;
        }
    }
    return p;
}

}  // namespace csra
