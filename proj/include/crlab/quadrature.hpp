#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "crlab/types.hpp"

namespace crlab {

/// Composite trapezoid of a 2*pi-periodic integrand sampled at m uniform
/// angles.  Spectrally accurate for smooth periodic integrands.
template <typename F>
Complex trapezoid_periodic(const F& f, int m) {
    Complex acc(0.0, 0.0);
    const double h = 2.0 * kPi / m;
    for (int j = 0; j < m; ++j) acc += f(h * j);
    return acc * h;
}

/// Gauss-Legendre nodes and weights on [a, b].
/// Nodes by Newton iteration on the Legendre recurrence; deterministic.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    GaussLegendre(int n, double a, double b);

    template <typename F>
    auto integrate(const F& f) const -> decltype(f(0.0)) {
        using R = decltype(f(0.0));
        R acc = R(0.0);
        for (size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }
};

/// Smooth glue g(u) = exp(-1/u) for u > 0, 0 otherwise.
double smooth_glue(double u);

/// Smooth step: 0 for x <= 0, 1 for x >= 1, strictly increasing between.
double smooth_step(double x);

/// Smooth cutoff that is identically 1 on [0, lo] and 0 on [hi, inf).
struct SmoothCutoff {
    double lo;
    double hi;
    double operator()(double r) const {
        if (r <= lo) return 1.0;
        if (r >= hi) return 0.0;
        return smooth_step((hi - r) / (hi - lo));
    }
};

}  // namespace crlab
