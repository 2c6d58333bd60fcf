#pragma once

#include <vector>

namespace seqsel {

// Fixed-node quadrature rule on (0, 1).
struct QuadratureRule {
    std::vector<double> x;
    std::vector<double> w;
    int size() const { return static_cast<int>(x.size()); }
};

// Gauss-Legendre nodes and weights mapped to (0, 1). n >= 1.
QuadratureRule gauss_legendre_01(int n);

}  // namespace seqsel
