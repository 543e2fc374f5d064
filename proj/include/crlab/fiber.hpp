#pragma once

#include <span>
#include <vector>

#include "crlab/surface.hpp"
#include "crlab/types.hpp"

namespace crlab {

/// Sampled level set K_s = { z : rho(z, zbar) = s } of a one-variable graph
/// surface, ordered by the polar marching angle.
struct Fiber {
    double level = 0.0;
    bool closed = false;
    std::vector<Complex> points;
    std::vector<double> arc_params;  // marching angle per point
    std::vector<Complex> tangents;   // d z / d theta, for closed fibers
    double fiber_tol = 1e-10;
    double max_gap = 0.0;  // largest consecutive-point spacing when closed

    bool empty() const { return points.empty(); }
};

struct FiberOptions {
    double fiber_tol = 1e-10;
    int radial_scan = 64;   // coarse bracketing nodes per ray
    int max_newton = 60;
    int degenerate_ray_samples = 24;  // radial fill when a whole ray lies in the fiber
};

/// Polar marching: for each of `mesh` uniform angles, solve
/// rho(r e^{i theta}) = s for r in (0, delta1] by bracketed Newton with a
/// bisection fallback.  A ray on which rho - s vanishes identically (the
/// degenerate direction of a level-zero hyperbolic fiber, or the flat half
/// plane of the exp-flat-step graph) is filled with radial samples instead.
/// Returns an empty fiber when no angle produces a root.
Fiber sample_fiber(const GraphSurface& surface, double s, int mesh, const FiberOptions& opts = {});

/// max( sup_{a in A} dist(a, B), sup_{b in B} dist(b, A) ) over the samples.
double hausdorff_distance(std::span<const Complex> a, std::span<const Complex> b);
double hausdorff_distance(std::span<const CVector> a, std::span<const CVector> b);

}  // namespace crlab
