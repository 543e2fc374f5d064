#include "crlab/quadrature.hpp"

#include <cmath>

namespace crlab {

GaussLegendre::GaussLegendre(int n, double a, double b) {
    nodes.resize(static_cast<size_t>(n));
    weights.resize(static_cast<size_t>(n));
    // Roots of P_n on [-1,1]; Chebyshev initial guesses, Newton polish.
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double half = 0.5 * (b - a);
        nodes[static_cast<size_t>(i)] = a + half * (1.0 - x);
        weights[static_cast<size_t>(i)] = 2.0 * half / ((1.0 - x * x) * pp * pp);
    }
}

double smooth_glue(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

double smooth_step(double x) {
    const double g = smooth_glue(x);
    return g / (g + smooth_glue(1.0 - x));
}

}  // namespace crlab
