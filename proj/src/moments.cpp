#include "crlab/moments.hpp"

#include <cmath>

namespace crlab {

MomentReport moment_integrals(const SurfaceFn1& f, const GraphSurface& surface,
                              const std::vector<double>& t_grid, int k_max, int mesh) {
    MomentReport report;
    report.t_grid = t_grid;
    report.k_max = k_max;
    report.quad_mesh = mesh;
    report.values.resize(static_cast<Eigen::Index>(t_grid.size()), k_max + 1);

    const double h = 2.0 * kPi / mesh;

    if (surface.kind == SurfaceKind::SpecialElliptic) {
        for (size_t ti = 0; ti < t_grid.size(); ++ti) {
            const double t = t_grid[ti];
            if (t <= 0.0) throw DomainError("moment_integrals: level t must be positive");
            // Sample f once per angle, then accumulate all orders.
            std::vector<Complex> fv(static_cast<size_t>(mesh));
            for (int m = 0; m < mesh; ++m) {
                const double theta = h * m;
                fv[static_cast<size_t>(m)] = f(t * Complex(std::cos(theta), std::sin(theta)));
            }
            for (int k = 0; k <= k_max; ++k) {
                Complex acc(0.0, 0.0);
                for (int m = 0; m < mesh; ++m) {
                    const double phase = h * m * (k + 1);
                    acc += fv[static_cast<size_t>(m)] * Complex(std::cos(phase), std::sin(phase));
                }
                report.values(static_cast<Eigen::Index>(ti), k) = acc * h;
            }
        }
        return report;
    }

    if (surface.kind == SurfaceKind::EllipticBishop) {
        for (size_t ti = 0; ti < t_grid.size(); ++ti) {
            const double s = t_grid[ti];
            const Fiber fiber = sample_fiber(surface, s, mesh);
            if (fiber.empty())
                throw DomainError("moment_integrals: empty fiber at level " + std::to_string(s));
            if (!fiber.closed)
                throw UnsupportedKindError("moment_integrals: fiber at level " + std::to_string(s) +
                                           " is not a closed curve");
            std::vector<Complex> fz(fiber.points.size());
            for (size_t m = 0; m < fiber.points.size(); ++m) fz[m] = f(fiber.points[m]);
            for (int k = 0; k <= k_max; ++k) {
                Complex acc(0.0, 0.0);
                for (size_t m = 0; m < fiber.points.size(); ++m) {
                    Complex zk(1.0, 0.0);
                    for (int j = 0; j < k; ++j) zk *= fiber.points[m];
                    acc += fz[m] * zk * fiber.tangents[m];
                }
                report.values(static_cast<Eigen::Index>(ti), k) = acc * h;
            }
        }
        return report;
    }

    throw UnsupportedKindError("moment_integrals: surface kind " + kind_name(surface.kind) +
                               " has no moment form");
}

MomentVerdict moment_verdict(const MomentReport& report, double tol) {
    MomentVerdict v;
    v.pass = true;
    for (Eigen::Index ti = 0; ti < report.values.rows(); ++ti) {
        for (Eigen::Index k = 0; k < report.values.cols(); ++k) {
            const double a = std::abs(report.values(ti, k));
            if (a > v.worst_abs) {
                v.worst_abs = a;
                v.worst_t = report.t_grid[static_cast<size_t>(ti)];
                v.worst_k = static_cast<int>(k);
            }
        }
    }
    v.pass = v.worst_abs <= tol;
    return v;
}

Complex cr_residual(const SurfaceFn2& f, const GraphSurface& surface, Complex z1, Complex z2,
                    double h) {
    if (surface.kind != SurfaceKind::LeviFlatZbarZ)
        throw UnsupportedKindError("cr_residual: defined on the zbar-z surface only");
    if (std::abs(z2) == 0.0)
        throw DomainError("cr_residual: z2 = 0 is a CR singular point");
    // d/d zbar_2 = (d/dx + i d/dy)/2 in z2 = x + i y.
    const Complex dx = (f(z1, z2 + h) - f(z1, z2 - h)) / (2.0 * h);
    const Complex dy = (f(z1, z2 + kI * h) - f(z1, z2 - kI * h)) / (2.0 * h);
    return 0.5 * (dx + kI * dy);
}

SurfaceFn2 restrict_to_zbarz(const HoloPolynomial& p) {
    return [p](Complex z1, Complex z2) { return p.eval3(z1, z2, std::conj(z1) * z2); };
}

SurfaceFn1 restrict_to_graph(const HoloPolynomial& p, const GraphSurface& surface) {
    GraphSurface s = surface;
    return [p, s](Complex z) { return p.eval2(z, s.rho1(z)); };
}

}  // namespace crlab
