#pragma once

#include <Eigen/Core>

#include "csra/bch.hpp"

namespace csra {

// One modulation frame: 512 coded bits as 256 unit-energy QPSK symbols.
inline constexpr int kSymbolsPerFrame = Codeword::kBits / 2;

// Bit 2i selects the imaginary sign, bit 2i+1 the real sign; 0 -> +1/sqrt(2).
Eigen::VectorXcd qpsk_map(const Codeword& cw);

// Hard decision, inverse of qpsk_map. Components exactly on the boundary
// (0.0) demap to bit 0.
Codeword qpsk_demap(const Eigen::VectorXcd& symbols);

}  // namespace csra
