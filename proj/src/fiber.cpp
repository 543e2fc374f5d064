#include "crlab/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace crlab {

namespace {

struct RayRoot {
    double r;
    Complex z;
};

// Polish a bracketed root of g(r) = rho(r e^{i theta}) - s with Newton steps,
// falling back to bisection whenever a step leaves the bracket.
double polish_root(const GraphSurface& surf, double s, Complex dir, double lo, double hi,
                   double glo, double tol, int max_iter, double theta) {
    double r = 0.5 * (lo + hi);
    for (int it = 0; it < max_iter; ++it) {
        const Complex z = r * dir;
        const double g = std::real(surf.rho(std::span<const Complex>(&z, 1))) - s;
        if (std::abs(g) <= tol) return r;
        if ((g < 0.0) == (glo < 0.0)) {
            lo = r;
        } else {
            hi = r;
        }
        const double dg = surf.drho_dr(z);
        double next = dg != 0.0 ? r - g / dg : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        r = next;
    }
    const Complex z = r * dir;
    if (std::abs(std::real(surf.rho(std::span<const Complex>(&z, 1))) - s) > tol)
        throw NumericError("sample_fiber: root polish failed at theta = " + std::to_string(theta));
    return r;
}

}  // namespace

Fiber sample_fiber(const GraphSurface& surface, double s, int mesh, const FiberOptions& opts) {
    if (surface.graph_dim() != 1)
        throw UnsupportedKindError("sample_fiber: one complex graph variable required, surface " +
                                   kind_name(surface.kind));

    Fiber fiber;
    fiber.level = s;
    fiber.fiber_tol = opts.fiber_tol;

    // Exact circle for the special elliptic graph.
    if (surface.kind == SurfaceKind::SpecialElliptic) {
        if (s < 0.0) return fiber;
        if (s == 0.0) {
            fiber.points = {Complex(0.0, 0.0)};
            fiber.arc_params = {0.0};
            return fiber;
        }
        const double r = std::sqrt(s);
        fiber.closed = true;
        fiber.points.reserve(static_cast<size_t>(mesh));
        for (int m = 0; m < mesh; ++m) {
            const double theta = 2.0 * kPi * m / mesh;
            const Complex z = r * Complex(std::cos(theta), std::sin(theta));
            fiber.points.push_back(z);
            fiber.arc_params.push_back(theta);
            fiber.tangents.push_back(kI * z);
        }
        fiber.max_gap = 2.0 * r * std::sin(kPi / mesh);
        return fiber;
    }

    const double r_max = surface.delta1;
    const double scale = std::max(1.0, std::abs(s));
    const double degenerate_tol = 1e-13 * scale;
    bool every_angle_single_root = true;

    for (int m = 0; m < mesh; ++m) {
        const double theta = 2.0 * kPi * m / mesh;
        const Complex dir(std::cos(theta), std::sin(theta));

        // Coarse scan of g(r) = rho(r dir) - s on (0, r_max].
        const int K = opts.radial_scan;
        std::vector<double> g(static_cast<size_t>(K) + 1);
        double max_abs_g = 0.0;
        for (int j = 0; j <= K; ++j) {
            const Complex z = (r_max * j / K) * dir;
            g[static_cast<size_t>(j)] = std::real(surface.rho(std::span<const Complex>(&z, 1))) - s;
            max_abs_g = std::max(max_abs_g, std::abs(g[static_cast<size_t>(j)]));
        }

        if (max_abs_g <= degenerate_tol) {
            // The whole ray lies in the fiber; fill it radially.
            every_angle_single_root = false;
            for (int j = 1; j <= opts.degenerate_ray_samples; ++j) {
                const double r = r_max * j / opts.degenerate_ray_samples;
                fiber.points.push_back(r * dir);
                fiber.arc_params.push_back(theta);
            }
            continue;
        }

        std::vector<RayRoot> roots;
        for (int j = 0; j < K; ++j) {
            const double glo = g[static_cast<size_t>(j)];
            const double ghi = g[static_cast<size_t>(j) + 1];
            const double lo = r_max * j / K;
            const double hi = r_max * (j + 1) / K;
            if (glo == 0.0 && j > 0) {
                roots.push_back({lo, lo * dir});
                continue;
            }
            if (!(glo < 0.0 && ghi > 0.0) && !(glo > 0.0 && ghi < 0.0)) continue;
            const double polish_tol = std::min(opts.fiber_tol * 0.1, 1e-13 * scale);
            const double r =
                polish_root(surface, s, dir, lo, hi, glo, polish_tol, opts.max_newton, theta);
            if (r > 0.0) roots.push_back({r, r * dir});
        }

        if (roots.size() != 1) every_angle_single_root = false;
        for (const RayRoot& root : roots) {
            fiber.points.push_back(root.z);
            fiber.arc_params.push_back(theta);
        }
    }

    fiber.closed = every_angle_single_root && !fiber.points.empty() &&
                   fiber.points.size() == static_cast<size_t>(mesh);

    if (!fiber.closed && !fiber.points.empty()) {
        // Radial-marching supplement: arms that run nearly radially (steep
        // r(theta)) fall between the angular rays; marching the dual family
        // theta(r) fills them in.
        const int R = std::max(16, mesh / 2);
        for (int j = 1; j <= R; ++j) {
            const double r = r_max * j / R;
            double h_prev = 0.0;
            for (int i = 0; i <= mesh; ++i) {
                const double theta = 2.0 * kPi * i / mesh;
                const Complex z = r * Complex(std::cos(theta), std::sin(theta));
                const double h = std::real(surface.rho(std::span<const Complex>(&z, 1))) - s;
                if (i > 0 && ((h_prev < 0.0 && h > 0.0) || (h_prev > 0.0 && h < 0.0))) {
                    double lo = 2.0 * kPi * (i - 1) / mesh, hi = theta, glo = h_prev;
                    for (int it = 0; it < 80; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        const Complex zm = r * Complex(std::cos(mid), std::sin(mid));
                        const double gm =
                            std::real(surface.rho(std::span<const Complex>(&zm, 1))) - s;
                        if (std::abs(gm) <= degenerate_tol) break;
                        if ((gm < 0.0) == (glo < 0.0)) {
                            lo = mid;
                            glo = gm;
                        } else {
                            hi = mid;
                        }
                    }
                    const double root = 0.5 * (lo + hi);
                    fiber.points.push_back(r * Complex(std::cos(root), std::sin(root)));
                    fiber.arc_params.push_back(root);
                }
                h_prev = h;
            }
        }
    }

    if (fiber.closed) {
        // Tangent d z / d theta from implicit differentiation of rho(r e^{i theta}) = s.
        fiber.tangents.reserve(fiber.points.size());
        for (const Complex& z : fiber.points) {
            const double dr = surface.drho_dr(z);
            if (dr == 0.0) {
                fiber.closed = false;
                fiber.tangents.clear();
                break;
            }
            const double r = std::abs(z);
            const double r_prime = -surface.drho_dtheta(z) / dr;
            const Complex dir = z / r;
            fiber.tangents.push_back((r_prime + kI * r) * dir);
        }
    }
    if (fiber.closed) {
        for (size_t i = 0; i < fiber.points.size(); ++i) {
            const Complex a = fiber.points[i];
            const Complex b = fiber.points[(i + 1) % fiber.points.size()];
            fiber.max_gap = std::max(fiber.max_gap, std::abs(a - b));
        }
    }
    return fiber;
}

double hausdorff_distance(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.empty() || b.empty()) throw DomainError("hausdorff_distance: empty point set");
    double worst = 0.0;
    auto one_sided = [&](std::span<const Complex> from, std::span<const Complex> to) {
        for (const Complex& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const Complex& q : to) best = std::min(best, std::abs(p - q));
            worst = std::max(worst, best);
        }
    };
    one_sided(a, b);
    one_sided(b, a);
    return worst;
}

double hausdorff_distance(std::span<const CVector> a, std::span<const CVector> b) {
    if (a.empty() || b.empty()) throw DomainError("hausdorff_distance: empty point set");
    double worst = 0.0;
    auto one_sided = [&](std::span<const CVector> from, std::span<const CVector> to) {
        for (const CVector& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const CVector& q : to) best = std::min(best, (p - q).norm());
            worst = std::max(worst, best);
        }
    };
    one_sided(a, b);
    one_sided(b, a);
    return worst;
}

}  // namespace crlab
