#include "csra/qpsk.hpp"

#include <cmath>
#include <stdexcept>

namespace csra {

Eigen::VectorXcd qpsk_map(const Codeword& cw) {
    const double a = 1.0 / std::sqrt(2.0);
    Eigen::VectorXcd s(kSymbolsPerFrame);
    for (int i = 0; i < kSymbolsPerFrame; ++i) {
        s[i] = {cw.get(2 * i + 1) ? -a : a, cw.get(2 * i) ? -a : a};
    }
    return s;
}

Codeword qpsk_demap(const Eigen::VectorXcd& symbols) {
    if (symbols.size() != kSymbolsPerFrame) {
        throw std::invalid_argument("qpsk_demap: expected one full frame of symbols");
    }
    Codeword cw;
    for (int i = 0; i < kSymbolsPerFrame; ++i) {
        if (symbols[i].imag() < 0.0) cw.set(2 * i);
        if (symbols[i].real() < 0.0) cw.set(2 * i + 1);
    }
    return cw;
}

}  // namespace csra
