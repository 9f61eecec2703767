#pragma once

#include <vector>

#include "icdsel/dense.hpp"

namespace icdsel {

// Dense symmetric eigendecomposition: Householder tridiagonalization followed
// by implicit-shift QL iteration. Eigenvalues come back ascending with the
// matching eigenvectors in the columns of `vectors` (orthonormal). Each
// vector's sign is canonicalized so its largest-magnitude entry is positive,
// which keeps downstream selections seed-independent.
struct SymEig {
    std::vector<double> values;
    Matrix vectors;
};

SymEig sym_eigen(Matrix a);  // input is taken by value and destroyed

}  // namespace icdsel
