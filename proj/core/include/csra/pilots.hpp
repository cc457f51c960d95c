#pragma once

#include <Eigen/Core>

namespace csra {

// First `count` rows of the Sylvester-Hadamard matrix of order `length`:
// +-1 sequences with P.row(a).dot(P.row(b).conjugate()) = length * delta_ab.
// Requires length a power of two and 1 <= count <= length.
Eigen::MatrixXcd walsh_pilots(int count, int length);

}  // namespace csra
