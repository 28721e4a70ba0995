#include "ncc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ncc/errors.hpp"

namespace ncc {

namespace {

// Roots and weights of the physicists' Hermite polynomial H_n by Newton
// iteration on the orthonormal three-term recurrence. Weights are for the
// weight function exp(-x^2).
void hermite_roots(int n, std::vector<double>& x, std::vector<double>& w) {
    constexpr int kMaxIter = 100;
    const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int half = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < half; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * x[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * x[1];
        else
            z = 2.0 * z - x[i - 2];

        double pp = 0.0;
        for (int it = 0; it < kMaxIter; ++it) {
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    if (n % 2 == 1) x[n / 2] = 0.0;
}

}  // namespace

QuadratureRule gauss_hermite_normal(int n, double sigma) {
    if (n < 1) throw DomainError("quadrature node count must be >= 1");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be finite and >= 0");
    QuadratureRule rule;
    if (sigma == 0.0 || n == 1) {
        rule.nodes = {0.0};
        rule.weights = {1.0};
        return rule;
    }
    std::vector<double> x, w;
    hermite_roots(n, x, w);
    // ascending order
    std::reverse(x.begin(), x.end());
    std::reverse(w.begin(), w.end());
    const double scale = std::sqrt(2.0) * sigma;
    double total = 0.0;
    for (double wi : w) total += wi;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = scale * x[i];
        rule.weights[i] = w[i] / total;
    }
    return rule;
}

}  // namespace ncc
