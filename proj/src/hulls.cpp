#include "crlab/hulls.hpp"

#include <algorithm>
#include <cmath>

namespace crlab {

// ----------------------------------------------------------------------------
// First-step region and disc
// ----------------------------------------------------------------------------

double zbarz_region1_residual(const CVector& p, const TwoStepConstants& tc) {
    const Complex z1 = p[0], z2 = p[1], w = p[2];
    const Complex pairing = w * z1 * std::conj(z2);
    double worst = std::abs(pairing.imag());
    worst = std::max(worst, std::norm(z1 * z2) - pairing.real());
    worst = std::max(worst, std::abs(z2) / tc.C - std::abs(z1));
    worst = std::max(worst, std::abs(z1) - tc.C * std::abs(z2));
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(p[i]) - tc.C);
    return std::max(0.0, worst);
}

SetOracle zbarz_region1_oracle(const TwoStepConstants& tc) {
    return SetOracle{"zbarz:A1", [tc](const CVector& p) { return zbarz_region1_residual(p, tc); }};
}

AnalyticDisc disc_zbarz_step1(const CVector& p, const TwoStepConstants& tc) {
    const double viol = zbarz_region1_residual(p, tc);
    if (viol > tc.membership_tol)
        throw DomainError("disc_zbarz_step1: point violates the A1 constraints by " +
                          std::to_string(viol));
    const Complex z1 = p[0], z2 = p[1], w = p[2];

    if (std::abs(w - std::conj(z1) * z2) <= tc.membership_tol) {
        AnalyticDisc d = AnalyticDisc::constant(p);
        d.cache_boundary(64);
        return d;
    }

    if (std::abs(z2) <= tc.membership_tol) {
        // z2 = 0 forces z1 = 0 inside A1; the branch disc is (conj(w) zeta, zeta, w).
        AnalyticDisc d({{Complex(0.0), std::conj(w)}, {Complex(0.0), Complex(1.0)}, {w}});
        d.set_through(Complex(0.0), p);
        d.cache_boundary(64);
        return d;
    }

    const Complex ratio = w * z1 / z2;  // real and >= |z1|^2 on A1
    const double lambda = std::sqrt(std::max(ratio.real(), 0.0));
    if (lambda <= 0.0)
        throw DomainError("disc_zbarz_step1: degenerate lambda for point off the z2 = 0 branch");
    AnalyticDisc d({{Complex(0.0), lambda}, {Complex(0.0), w / lambda}, {w}});
    d.set_through(z1 / lambda, p);
    d.cache_boundary(64);
    return d;
}

CVector sample_zbarz_region1(const TwoStepConstants& tc, Rng& rng) {
    if (rng.uniform() < 1.0 / 16.0) {
        // z2 = 0 branch point (0, 0, w)
        const Complex w = rng.uniform(0.05 * tc.C, tc.C) * rng.circle();
        return make_point({Complex(0.0), Complex(0.0), w});
    }
    const double absw = rng.uniform(0.05 * tc.C, tc.C);
    const Complex w = absw * rng.circle();
    const double lam2 = rng.uniform(1.01 * absw / tc.C, 0.99 * tc.C * absw);
    const double lam = std::sqrt(lam2);
    const Complex zeta = rng.disc(1.0);
    return make_point({lam * zeta, w * zeta / lam, w});
}

// ----------------------------------------------------------------------------
// Second-step disc
// ----------------------------------------------------------------------------

namespace {

// Root of zeta f(zeta, 1/zeta) = e^{-i theta} z1 near 1/2; the branch of the
// square root is the principal one, continuous in z1 near 0, with z1 = 0
// giving zeta = 1/2.
Complex zbarz_step2_root(double theta, Complex z1) {
    const Complex u = std::exp(Complex(0.0, -theta)) * z1;
    return 1.25 - std::sqrt(Complex(0.5625, 0.0) - 4.5 * u);
}

}  // namespace

double zbarz_step2_boundary_profile(double theta) { return (4.0 / 9.0) * (1.25 - std::cos(theta)); }

AnalyticDisc disc_zbarz_step2(const CVector& p, const TwoStepConstants& tc) {
    const Complex z1 = p[0], z2 = p[1], w = p[2];
    const double tol = tc.membership_tol;
    if (std::abs(z1) > tc.epsilon + tol)
        throw DomainError("disc_zbarz_step2: |z1| exceeds epsilon");
    if (std::abs(w) < tc.K3 / tc.C - tol || std::abs(w) > tc.C + tol)
        throw DomainError("disc_zbarz_step2: |w| outside [K3/C, C]");
    if (std::abs(z2) < 1.0 / tc.K1 - tol || std::abs(z2) > std::abs(w) / tc.K2 + tol)
        throw DomainError("disc_zbarz_step2: |z2| outside [1/K1, |w|/K2]");

    // Argument matching: theta with arg(w lambda e^{i theta} zeta*(theta)) = arg z2.
    const double target = std::arg(z2) - std::arg(w);
    double theta = target;
    Complex zstar = zbarz_step2_root(theta, z1);
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
        const double next = target - std::arg(zstar);
        const double delta = std::remainder(next - theta, 2.0 * kPi);
        theta += delta;
        zstar = zbarz_step2_root(theta, z1);
        if (std::abs(delta) < 1e-14) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NumericError("disc_zbarz_step2: argument fixed point did not converge");
    if (std::abs(zstar) > 1.0 + 1e-12)
        throw InfeasiblePointError("disc_zbarz_step2: root lies outside the closed disc");

    // Modulus matching; the attachment window for lambda is [1/(C|w|), C/(9|w|)].
    const double lambda = std::abs(z2) / (std::abs(w) * std::abs(zstar));
    const double lo = 1.0 / (tc.C * std::abs(w));
    const double hi = tc.C / (9.0 * std::abs(w));
    if (lambda < lo * (1.0 - 1e-12) || lambda > hi * (1.0 + 1e-12))
        throw InfeasiblePointError("disc_zbarz_step2: lambda = " + std::to_string(lambda) +
                                   " outside the attachment window [" + std::to_string(lo) + ", " +
                                   std::to_string(hi) + "]");

    // zeta f(zeta, 1/zeta) = (4/9)(zeta - 1/2)(1 - zeta/2) expanded; no Laurent terms.
    const Complex u = std::exp(Complex(0.0, theta));
    AnalyticDisc d({{-(2.0 / 9.0) * u, (5.0 / 9.0) * u, -(2.0 / 9.0) * u},
                    {Complex(0.0), w * lambda * u},
                    {w}});
    d.set_through(zstar, p);
    d.cache_boundary(64);
    return d;
}

CVector sample_zbarz_region2(const TwoStepConstants& tc, Rng& rng) {
    for (int attempt = 0; attempt < 256; ++attempt) {
        const double absw = rng.uniform(tc.K3 / tc.C, tc.C);
        const Complex w = absw * rng.circle();
        const Complex z1 = rng.disc(tc.epsilon);
        const double theta = rng.uniform(0.0, 2.0 * kPi);
        const double abs_zstar = std::abs(zbarz_step2_root(theta, z1));
        const double lo = std::max(1.0 / (tc.C * absw), 1.0 / (tc.K1 * absw * abs_zstar));
        const double hi = std::min(tc.C / (9.0 * absw), 1.0 / (tc.K2 * abs_zstar));
        if (!(lo * 1.000001 < hi)) continue;
        const double lambda = rng.uniform(lo * 1.000001, hi * 0.999999);
        const Complex z2 = w * lambda * std::exp(Complex(0.0, theta)) * zbarz_step2_root(theta, z1);
        return make_point({z1, z2, w});
    }
    throw NumericError("sample_zbarz_region2: no feasible sample found");
}

// ----------------------------------------------------------------------------
// Signature-quadric discs
// ----------------------------------------------------------------------------

AnalyticDisc disc_quadric_linear(const CVector& p, QuadricBranch branch, double tol) {
    const Complex z1 = p[0], z2 = p[1], s = p[2];
    if (std::abs(s.imag()) > tol)
        throw DomainError("disc_quadric_linear: the last coordinate must be real");

    const double on_surface = std::abs(s.real() - (std::norm(z1) - std::norm(z2)));
    const bool vary_first = branch == QuadricBranch::VaryFirst;
    const double radius_sq = vary_first ? std::norm(z2) + s.real() : std::norm(z1) - s.real();
    const double through_sq = vary_first ? std::norm(z1) : std::norm(z2);

    if (radius_sq <= tol) {
        if (on_surface > tol || through_sq > tol)
            throw DomainError("disc_quadric_linear: degenerate radius with point off the surface");
        AnalyticDisc d = AnalyticDisc::constant(p);
        d.cache_boundary(64);
        return d;
    }
    if (through_sq > radius_sq * (1.0 + 1e-12) + tol)
        throw DomainError("disc_quadric_linear: point outside the branch disc (|zvary|^2 > R^2)");

    const double radius = std::sqrt(radius_sq);
    AnalyticDisc d = vary_first
                         ? AnalyticDisc({{Complex(0.0), radius}, {z2}, {s.real()}})
                         : AnalyticDisc({{z1}, {Complex(0.0), radius}, {s.real()}});
    d.set_through((vary_first ? z1 : z2) / radius, p);
    d.cache_boundary(64);
    return d;
}

// ----------------------------------------------------------------------------
// Torus / bidisc example
// ----------------------------------------------------------------------------

double torus_seed_residual(Complex z1, Complex z2, double c) {
    const double ring = std::abs(std::abs(z2) - c);
    const double piece1 =
        std::max({std::abs(std::abs(z1) - c), ring, std::max(0.0, -z2.imag())});
    const double piece2 =
        std::max({std::abs(std::abs(z1) - 2.0 * c), ring, std::max(0.0, z2.imag())});
    return std::min(piece1, piece2);
}

double torus_stage1_residual(Complex z1, Complex z2, double c) {
    const double ring = std::abs(std::abs(z2) - c);
    const double piece1 =
        std::max({std::max(0.0, std::abs(z1) - c), ring, std::max(0.0, -z2.imag())});
    const double piece2 =
        std::max({std::max(0.0, std::abs(z1) - 2.0 * c), ring, std::max(0.0, z2.imag())});
    return std::min(piece1, piece2);
}

std::optional<AnalyticDisc> bidisc_stage1_disc(Complex z1, Complex z2, double c, double tol) {
    if (std::abs(std::abs(z2) - c) > tol) return std::nullopt;
    if (z2.imag() >= -tol && std::abs(z1) <= c + tol) {
        AnalyticDisc d({{Complex(0.0), Complex(c)}, {z2}});
        d.set_through(z1 / c, make_point({z1, z2}));
        d.cache_boundary(64);
        return d;
    }
    if (z2.imag() <= tol && std::abs(z1) <= 2.0 * c + tol) {
        AnalyticDisc d({{Complex(0.0), Complex(2.0 * c)}, {z2}});
        d.set_through(z1 / (2.0 * c), make_point({z1, z2}));
        d.cache_boundary(64);
        return d;
    }
    return std::nullopt;
}

namespace {

// Taylor coefficients of the Blaschke factor (zeta + a)/(1 + conj(a) zeta),
// truncated so the boundary tail stays below trunc_tol.
std::vector<Complex> blaschke_coeffs(Complex a, double trunc_tol) {
    const double r = std::abs(a);
    if (r >= 1.0 - 1e-14) return {a / (r > 0.0 ? r : 1.0)};  // unimodular: constant factor
    if (r < 1e-14) return {Complex(0.0), Complex(1.0)};
    int n = static_cast<int>(std::ceil(std::log(trunc_tol / 2.0) / std::log(r)));
    n = std::clamp(n, 2, 400000);
    std::vector<Complex> coeffs(static_cast<size_t>(n) + 1);
    coeffs[0] = a;
    Complex lead = Complex(1.0 - r * r);
    for (int k = 1; k <= n; ++k) {
        coeffs[static_cast<size_t>(k)] = lead;
        lead *= -std::conj(a);
    }
    return coeffs;
}

}  // namespace

std::optional<AnalyticDisc> bidisc_stage2_disc(Complex z1, Complex z2, double c, double trunc_tol,
                                               double tol) {
    if (std::abs(z1) > c * (1.0 + tol) || std::abs(z2) > c * (1.0 + tol)) return std::nullopt;
    auto scaled = [&](Complex a) {
        std::vector<Complex> coeffs = blaschke_coeffs(a, trunc_tol);
        for (Complex& x : coeffs) x *= c;
        return coeffs;
    };
    AnalyticDisc d({scaled(z1 / c), scaled(z2 / c)});
    d.set_through(Complex(0.0), make_point({z1, z2}));
    d.cache_boundary(64);
    return d;
}

namespace {

CVector with_level(const CVector& p2, double c, TorusVariant variant) {
    if (variant == TorusVariant::PlainC2) return p2;
    return make_point({p2[0], p2[1], Complex(c, 0.0)});
}

AnalyticDisc lift_disc(const AnalyticDisc& d2, double c, TorusVariant variant) {
    if (variant == TorusVariant::PlainC2) return d2;
    std::vector<std::vector<Complex>> comps = d2.components();
    comps.push_back({Complex(c, 0.0)});
    AnalyticDisc d3(std::move(comps));
    if (d2.has_through())
        d3.set_through(d2.through_param(), with_level(d2.through_point(), c, variant));
    return d3;
}

}  // namespace

HullCloud torus_bidisc_hull(TorusVariant variant, const TorusHullOptions& opts, Rng& rng) {
    HullCloud cloud;
    cloud.label = variant == TorusVariant::PlainC2 ? "torus-bidisc" : "torus-bidisc-homogenized";
    cloud.stages = 2;

    std::vector<double> levels;
    if (variant == TorusVariant::PlainC2) {
        levels = {1.0};
    } else {
        for (int j = 1; j <= opts.c_levels; ++j)
            levels.push_back(static_cast<double>(j) / opts.c_levels);
    }

    auto seed_oracle = [&](double c) {
        return SetOracle{"torus-seed",
                         [c](const CVector& q) { return torus_seed_residual(q[0], q[1], c); }};
    };
    auto stage1_oracle = [&](double c) {
        return SetOracle{"torus-stage1",
                         [c](const CVector& q) { return torus_stage1_residual(q[0], q[1], c); }};
    };

    for (int i = 0; i < opts.stage1_count; ++i) {
        const double c = levels[static_cast<size_t>(rng.next_u64() % levels.size())];
        Complex z1, z2;
        if (rng.uniform() < 0.5) {
            z2 = c * std::exp(Complex(0.0, rng.uniform(0.0, kPi)));
            z1 = rng.disc(c);
        } else {
            z2 = c * std::exp(Complex(0.0, rng.uniform(kPi, 2.0 * kPi)));
            z1 = rng.disc(2.0 * c);
        }
        auto disc = bidisc_stage1_disc(z1, z2, c);
        if (!disc) continue;
        AnalyticDisc lifted = lift_disc(*disc, c, variant);
        const double resid = boundary_residual(lifted, seed_oracle(c), opts.boundary_mesh);
        if (resid > opts.attach_tol || lifted.through_error() > opts.attach_tol) continue;
        cloud.points.push_back(
            {with_level(make_point({z1, z2}), c, variant), 1, DiscChain{{lifted}, resid}});
    }

    for (int i = 0; i < opts.stage2_count; ++i) {
        const double c = levels[static_cast<size_t>(rng.next_u64() % levels.size())];
        const Complex z1 = c * rng.disc(1.0);
        const Complex z2 = c * rng.disc(1.0);
        auto disc = bidisc_stage2_disc(z1, z2, c);
        if (!disc) continue;
        AnalyticDisc lifted = lift_disc(*disc, c, variant);
        const double resid = boundary_residual(lifted, stage1_oracle(c), opts.boundary_mesh);
        if (resid > opts.attach_tol || lifted.through_error() > opts.attach_tol) continue;
        cloud.points.push_back(
            {with_level(make_point({z1, z2}), c, variant), 2, DiscChain{{lifted}, resid}});
    }

    return cloud;
}

// ----------------------------------------------------------------------------
// Generic Monte-Carlo hull iteration
// ----------------------------------------------------------------------------

HullCloud hull_iterate(const HullProblem& problem, int k, int samples, Rng& rng) {
    HullCloud cloud;
    cloud.label = problem.label;
    cloud.stages = k;

    if (problem.seed_sampler) {
        for (int i = 0; i < samples; ++i) {
            const CVector p = problem.seed_sampler(rng);
            cloud.points.push_back({p, 0, DiscChain{{}, problem.stage_oracles[0](p)}});
        }
    }

    for (int stage = 1; stage <= k; ++stage) {
        const size_t gi = static_cast<size_t>(stage - 1);
        if (gi >= problem.generators.size() || problem.generators[gi].empty()) continue;
        for (int i = 0; i < samples; ++i) {
            const CVector cand = problem.candidate_samplers[gi](rng);
            for (const HullGenerator& gen : problem.generators[gi]) {
                std::optional<AnalyticDisc> disc;
                try {
                    disc = gen.attach(cand);
                } catch (const std::runtime_error&) {
                    disc.reset();
                }
                if (!disc) continue;
                const double resid =
                    boundary_residual(*disc, problem.stage_oracles[gi], problem.boundary_mesh);
                if (resid > problem.attach_tol || disc->through_error() > problem.attach_tol)
                    continue;
                DiscChain chain{{*disc}, resid};
                // Best-effort witness for the previous stage through one boundary point.
                if (stage >= 2) {
                    const CVector b = disc->boundary(0.0);
                    for (const HullGenerator& wgen : problem.generators[gi - 1]) {
                        try {
                            if (auto witness = wgen.attach(b)) {
                                chain.discs.push_back(*witness);
                                chain.max_residual =
                                    std::max(chain.max_residual,
                                             boundary_residual(*witness, problem.stage_oracles[gi - 1],
                                                               problem.boundary_mesh));
                                break;
                            }
                        } catch (const std::runtime_error&) {
                        }
                    }
                }
                cloud.points.push_back({cand, stage, std::move(chain)});
                break;
            }
        }
    }
    return cloud;
}

// ----------------------------------------------------------------------------
// Maximum principle
// ----------------------------------------------------------------------------

MaxPrincipleReport max_principle_check(const HullCloud& cloud, std::span<const CVector> x_samples,
                                       std::span<const HoloPolynomial> polys, double mesh_h) {
    if (x_samples.empty()) throw DomainError("max_principle_check: empty sample set");
    MaxPrincipleReport report;
    report.points_checked = cloud.points.size();
    report.polys_checked = polys.size();

    for (size_t pi = 0; pi < polys.size(); ++pi) {
        const HoloPolynomial& poly = polys[pi];
        std::vector<HoloPolynomial> grad;
        for (int v = 0; v < poly.nvars(); ++v) grad.push_back(poly.derivative(v));

        double sup = 0.0;
        double lip = 0.0;
        for (const CVector& x : x_samples) {
            sup = std::max(sup, std::abs(poly.eval(x)));
            double gsq = 0.0;
            for (const auto& g : grad) gsq += std::norm(g.eval(x));
            lip = std::max(lip, std::sqrt(gsq));
        }
        const double bound = sup + lip * mesh_h + 1e-12;

        for (size_t qi = 0; qi < cloud.points.size(); ++qi) {
            const double value = std::abs(poly.eval(cloud.points[qi].p));
            const double margin = value - bound;
            if (margin > report.worst_margin) {
                report.worst_margin = margin;
                report.worst = MaxPrincipleWorst{qi, pi, value, bound};
            }
            if (margin > 0.0) report.pass = false;
        }
    }
    return report;
}

// ----------------------------------------------------------------------------
// Shrinking families
// ----------------------------------------------------------------------------

AnalyticDisc dilate_disc(const AnalyticDisc& disc, double t, std::span<const int> alpha) {
    std::vector<std::vector<Complex>> comps = disc.components();
    for (size_t i = 0; i < comps.size(); ++i) {
        double f = 1.0;
        for (int k = 0; k < alpha[i]; ++k) f *= t;
        for (Complex& c : comps[i]) c *= f;
    }
    AnalyticDisc out(std::move(comps));
    if (disc.has_through())
        out.set_through(disc.through_param(), weighted_dilate(disc.through_point(), t, alpha));
    return out;
}

namespace {

// Whether q lies on the dilation orbit of p (q = delta_u(p) for some u >= 0).
bool on_common_orbit(const CVector& p, const CVector& q, std::span<const int> alpha, double tol) {
    double u = -1.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double ap = std::abs(p[i]);
        const double aq = std::abs(q[i]);
        if (ap < tol && aq < tol) continue;
        if (ap < tol || aq < tol) return false;
        const double ui = std::pow(aq / ap, 1.0 / alpha[static_cast<size_t>(i)]);
        if (u < 0.0) {
            u = ui;
        } else if (std::abs(ui - u) > 1e-6 * std::max(1.0, u)) {
            return false;
        }
    }
    if (u < 0.0) return true;
    return (weighted_dilate(p, u, alpha) - q).norm() <= 1e-6 * std::max(1.0, q.norm());
}

}  // namespace

SadhReport sadh_paths(const HullCloud& cloud, std::span<const int> alpha, int t_mesh,
                      const SetOracle& target, double attach_tol, int boundary_mesh,
                      double separation_tol) {
    SadhReport report;

    for (const HullPoint& hp : cloud.points) {
        if (hp.chain.discs.empty()) continue;
        if (hp.p.norm() == 0.0) {
            ++report.excluded_origin_points;  // constant path, excluded
            continue;
        }
        ShrinkFamily fam;
        fam.endpoint = hp.p;
        fam.base_disc = hp.chain.discs.front();
        fam.alpha.assign(alpha.begin(), alpha.end());
        fam.t_grid.reserve(static_cast<size_t>(t_mesh));
        fam.monotone = true;
        double prev_norm = -1.0;
        for (int j = 0; j < t_mesh; ++j) {
            const double t = static_cast<double>(j) / (t_mesh - 1);
            fam.t_grid.push_back(t);
            fam.center_trace.push_back(weighted_dilate(hp.p, t, alpha));
            const AnalyticDisc dt = dilate_disc(fam.base_disc, t, alpha);
            const double resid = boundary_residual(dt, target, boundary_mesh);
            fam.residuals.push_back(resid);
            fam.epsilon = std::max(fam.epsilon, resid);
            const double norm = fam.center_trace.back().norm();
            if (norm <= prev_norm) fam.monotone = false;
            prev_norm = norm;
        }
        report.all_monotone = report.all_monotone && fam.monotone;
        report.max_residual = std::max(report.max_residual, fam.epsilon);
        if (fam.epsilon > attach_tol)
            report.diagnostics.push_back("family residual " + std::to_string(fam.epsilon) +
                                         " exceeds attach_tol");
        report.families.push_back(std::move(fam));
    }

    // Mesh-level pairwise nonintersection for t > 0.  Traces that touch are
    // tolerated only for endpoints on a common dilation orbit (equal initial
    // segments are allowed by the path-family definition).
    for (size_t i = 0; i < report.families.size(); ++i) {
        for (size_t j = i + 1; j < report.families.size(); ++j) {
            const auto& a = report.families[i].center_trace;
            const auto& b = report.families[j].center_trace;
            double min_dist = std::numeric_limits<double>::infinity();
            for (size_t ti = 1; ti < a.size(); ++ti)
                for (size_t tj = 1; tj < b.size(); ++tj)
                    min_dist = std::min(min_dist, (a[ti] - b[tj]).norm());
            report.min_pair_separation = std::min(report.min_pair_separation, min_dist);
            if (min_dist < separation_tol &&
                !on_common_orbit(report.families[i].endpoint, report.families[j].endpoint, alpha,
                                 1e-12)) {
                report.nonintersecting = false;
                report.diagnostics.push_back("paths " + std::to_string(i) + " and " +
                                             std::to_string(j) + " intersect off-orbit");
            }
        }
    }
    return report;
}

}  // namespace crlab
