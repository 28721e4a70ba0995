#pragma once

#include <vector>

namespace ncc {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;  // sum to one
};

// Gauss-Hermite rule for E[f(X)], X ~ N(0, sigma^2). Nodes are scaled by
// sqrt(2) sigma and weights normalized by sqrt(pi). sigma == 0 collapses to
// the single node 0 with weight 1.
QuadratureRule gauss_hermite_normal(int n, double sigma);

}  // namespace ncc
