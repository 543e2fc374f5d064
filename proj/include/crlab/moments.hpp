#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "crlab/fiber.hpp"
#include "crlab/polynomial.hpp"
#include "crlab/surface.hpp"

namespace crlab {

/// Function on a one-variable graph surface, parametrized by z.
using SurfaceFn1 = std::function<Complex(Complex)>;
/// Function on a two-variable graph surface, in graph coordinates (z1, z2).
using SurfaceFn2 = std::function<Complex(Complex, Complex)>;

/// Grid of moment integrals, one complex value per (level, order) pair.
struct MomentReport {
    std::vector<double> t_grid;
    int k_max = 0;
    int quad_mesh = 0;
    Eigen::MatrixXcd values;  // rows: t_grid entries, cols: k = 0..k_max

    Complex value(int ti, int k) const { return values(ti, k); }
};

struct MomentVerdict {
    bool pass = false;
    double worst_abs = 0.0;
    double worst_t = 0.0;
    int worst_k = 0;
};

/// Moment integrals of f over level curves of the surface.
///  - special-elliptic: the circle form, int_0^{2pi} f(t e^{i theta})
///    e^{i(k+1) theta} d theta at radius t, per grid entry t.
///  - elliptic-bishop: the contour form, closed-fiber integral of
///    f(zeta) zeta^k d zeta at level s, per grid entry s.
/// Composite trapezoid in the marching angle; spectrally accurate since the
/// integrands are smooth and periodic.
MomentReport moment_integrals(const SurfaceFn1& f, const GraphSurface& surface,
                              const std::vector<double>& t_grid, int k_max, int mesh);

/// Pass iff every |value| <= tol; the witness is the largest entry either way.
MomentVerdict moment_verdict(const MomentReport& report, double tol);

/// Central finite-difference approximation of the tangential CR derivative
/// L f at a CR point of w = conj(z1) z2, in graph coordinates (z1, z2).
/// The CR field in these coordinates is d/d zbar_2 (the ambient field
/// d/d zbar_2 + z1 d/d wbar pushed through the graph parametrization).
Complex cr_residual(const SurfaceFn2& f, const GraphSurface& surface, Complex z1, Complex z2,
                    double h);

/// Restriction of an ambient holomorphic polynomial P(z1, z2, w) to the
/// surface w = conj(z1) z2, as a graph-coordinate function.
SurfaceFn2 restrict_to_zbarz(const HoloPolynomial& p);

/// Restriction of an ambient holomorphic polynomial P(z, w) to a
/// one-variable graph surface, as a function of z.
SurfaceFn1 restrict_to_graph(const HoloPolynomial& p, const GraphSurface& surface);

}  // namespace crlab
