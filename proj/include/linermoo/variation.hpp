#pragma once

#include <cmath>

#include "linermoo/rng.hpp"

namespace linermoo {

// Polynomial-mutation step as a fraction of the box width. Sampling the
// boundary-aware delta keeps mutants inside [lo, hi] up to rounding.
inline double polynomial_mutation_delta(Rng& rng, double rho, double value,
                                        double lo, double hi) {
    const double width = hi - lo;
    if (width <= 0) return 0;
    const double d = rng.uniform01();
    const double exponent = 1.0 / (rho + 1.0);
    if (d < 0.5) {
        const double rel = (hi - value) / width;
        return std::pow(2.0 * d + (1.0 - 2.0 * d) * std::pow(rel, rho + 1.0),
                        exponent) -
               1.0;
    }
    const double rel = (value - lo) / width;
    return 1.0 - std::pow(2.0 - 2.0 * d +
                              (2.0 * d - 1.0) * std::pow(rel, rho + 1.0),
                          exponent);
}

// Simulated binary crossover of one gene pair (unbounded spread; callers
// repair afterwards).
inline void sbx_gene(Rng& rng, double eta, double& y1, double& y2) {
    if (std::abs(y1 - y2) < 1e-14) return;
    const double u = rng.uniform01();
    double beta;
    if (u <= 0.5)
        beta = std::pow(2.0 * u, 1.0 / (eta + 1.0));
    else
        beta = std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta + 1.0));
    const double c1 = 0.5 * ((1.0 + beta) * y1 + (1.0 - beta) * y2);
    const double c2 = 0.5 * ((1.0 - beta) * y1 + (1.0 + beta) * y2);
    y1 = c1;
    y2 = c2;
}

}  // namespace linermoo
