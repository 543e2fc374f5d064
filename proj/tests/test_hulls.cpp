#include <doctest.h>

#include "crlab/hulls.hpp"

using namespace crlab;

namespace {

const TwoStepConstants kTwoStep{};

SetOracle zbarz_boxed() { return graph_oracle_boxed(preset_surface("zbar-z"), kTwoStep.C); }

}  // namespace

// ---------------------------------------------------------------------------
// First-step discs
// ---------------------------------------------------------------------------

TEST_CASE("surface points get a constant disc") {
    const Complex z1(0.5, 0.25), z2(1.0, -0.5);
    const CVector p = make_point({z1, z2, std::conj(z1) * z2});
    const AnalyticDisc d = disc_zbarz_step1(p, kTwoStep);
    CHECK(d.degree() == 0);
    CHECK(boundary_residual(d, zbarz_boxed(), 64) < 1e-12);
}

TEST_CASE("step-1 disc through (1/2, 1/2, 1/2)") {
    const CVector p = make_point({Complex(0.5), Complex(0.5), Complex(0.5)});
    const AnalyticDisc d = disc_zbarz_step1(p, kTwoStep);
    // lambda^2 = w z1 / z2 = 1/2, disc (zeta/sqrt2, zeta/sqrt2, 1/2).
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(d.components()[0][1] - Complex(r)) < 1e-14);
    CHECK(std::abs(d.components()[1][1] - Complex(r)) < 1e-14);
    CHECK(std::abs(d.components()[2][0] - Complex(0.5)) < 1e-15);
    CHECK(std::abs(d.through_param() - Complex(0.5) / r) < 1e-14);
    CHECK(d.through_error() < 1e-12);
    CHECK(boundary_residual(d, zbarz_boxed(), 256) < 1e-12);
}

TEST_CASE("z2 = 0 branch disc (conj w zeta, zeta, w)") {
    // The branch formula is attached for every w: conj(z1) z2 = w zbar zeta = w.
    const CVector p = make_point({Complex(0.0), Complex(0.0), Complex(0.5)});
    const AnalyticDisc d = disc_zbarz_step1(p, kTwoStep);
    CHECK(std::abs(d.components()[0][1] - Complex(0.5)) < 1e-15);
    CHECK(std::abs(d.components()[1][1] - Complex(1.0)) < 1e-15);
    CHECK(boundary_residual(d, zbarz_boxed(), 256) < 1e-12);
    CHECK(d.through_error() < 1e-12);

    // Complex w works as well.
    const CVector q = make_point({Complex(0.0), Complex(0.0), Complex(0.3, 0.7)});
    CHECK(boundary_residual(disc_zbarz_step1(q, kTwoStep), zbarz_boxed(), 256) < 1e-12);
}

TEST_CASE("points outside A1 are rejected with a domain error") {
    // (0, 1, 1/2) violates |z2|/C <= |z1|.
    CHECK_THROWS_AS(disc_zbarz_step1(make_point({Complex(0.0), Complex(1.0), Complex(0.5)}), kTwoStep),
                    DomainError);
    // Im(w z1 conj z2) != 0.
    CHECK_THROWS_AS(
        disc_zbarz_step1(make_point({Complex(1.0), Complex(1.0), Complex(0.0, 1.0)}), kTwoStep),
        DomainError);
}

TEST_CASE("random A1 members: residual and through-point within 1e-8") {
    Rng rng(61);
    const SetOracle target = zbarz_boxed();
    for (int trial = 0; trial < 200; ++trial) {
        const CVector p = sample_zbarz_region1(kTwoStep, rng);
        REQUIRE(zbarz_region1_residual(p, kTwoStep) <= kTwoStep.membership_tol);
        const AnalyticDisc d = disc_zbarz_step1(p, kTwoStep);
        CHECK(boundary_residual(d, target, 128) < 1e-8);
        CHECK(d.through_error() < 1e-8);
    }
}

// ---------------------------------------------------------------------------
// Second-step discs
// ---------------------------------------------------------------------------

TEST_CASE("z1 = 0 pins the root at 1/2") {
    // |w| = 3.5 in [K3/C, C]; |z2| = 0.15 in [1/K1, |w|/K2]; the implied
    // lambda = 0.15/(3.5 * 0.5) sits inside the attachment window.
    const Complex w = 3.5 * std::exp(Complex(0.0, 0.8));
    const CVector p = make_point({Complex(0.0), (w / std::abs(w)) * 0.15, w});
    const AnalyticDisc d = disc_zbarz_step2(p, kTwoStep);
    CHECK(std::abs(d.through_param() - Complex(0.5)) < 1e-12);
    CHECK(d.through_error() < 1e-10);
}

TEST_CASE("second-step boundary profile lies in [1/9, 1]") {
    for (int j = 0; j < 256; ++j) {
        const double theta = 2.0 * kPi * j / 256;
        const double f = zbarz_step2_boundary_profile(theta);
        CHECK(f >= 1.0 / 9.0 - 1e-12);
        CHECK(f <= 1.0 + 1e-12);
    }
    // The stored quadratic reproduces the profile: |phi1| = f on the circle.
    Rng rng(63);
    const AnalyticDisc d = disc_zbarz_step2(sample_zbarz_region2(kTwoStep, rng), kTwoStep);
    for (int j = 0; j < 64; ++j) {
        const double theta = 2.0 * kPi * j / 64;
        const CVector b = d.boundary(theta);
        CHECK(std::abs(b[0]) >= 1.0 / 9.0 - 1e-12);
        CHECK(std::abs(b[0]) <= 1.0 + 1e-12);
    }
}

TEST_CASE("random feasible A2 points: solver self-consistency") {
    Rng rng(64);
    const SetOracle target = zbarz_region1_oracle(kTwoStep);
    for (int trial = 0; trial < 200; ++trial) {
        const CVector p = sample_zbarz_region2(kTwoStep, rng);
        const AnalyticDisc d = disc_zbarz_step2(p, kTwoStep);
        CHECK(boundary_residual(d, target, 128) < 1e-8);
        CHECK(d.through_error() < 1e-8);
    }
}

TEST_CASE("second-step region prechecks throw domain errors") {
    CHECK_THROWS_AS(
        disc_zbarz_step2(make_point({Complex(0.2), Complex(0.15), Complex(3.5)}), kTwoStep),
        DomainError);  // |z1| > eps
    CHECK_THROWS_AS(
        disc_zbarz_step2(make_point({Complex(0.0), Complex(0.15), Complex(0.5)}), kTwoStep),
        DomainError);  // |w| < K3/C
}

// ---------------------------------------------------------------------------
// Signature-quadric discs
// ---------------------------------------------------------------------------

TEST_CASE("vary-second disc through (0.5, 0.3, 0.1)") {
    const CVector p = make_point({Complex(0.5), Complex(0.3), Complex(0.1)});
    const AnalyticDisc d = disc_quadric_linear(p, QuadricBranch::VarySecond);
    // R^2 = |z1|^2 - s = 0.15, and the point is inside since 0.09 <= 0.15.
    CHECK(std::abs(d.components()[1][1] - Complex(std::sqrt(0.15))) < 1e-14);
    CHECK(d.through_error() < 1e-12);
    CHECK(boundary_residual(d, graph_oracle(preset_surface("signature-quadric")), 256) < 1e-12);
}

TEST_CASE("vary-first disc through (0.2, 0.5, 0.1)") {
    const CVector p = make_point({Complex(0.2), Complex(0.5), Complex(0.1)});
    const AnalyticDisc d = disc_quadric_linear(p, QuadricBranch::VaryFirst);
    // R^2 = |z2|^2 + s = 0.35 by the construction's radius formula.
    CHECK(std::abs(d.components()[0][1] - Complex(std::sqrt(0.35))) < 1e-14);
    CHECK(d.through_error() < 1e-12);
    CHECK(boundary_residual(d, graph_oracle(preset_surface("signature-quadric")), 256) < 1e-12);
}

TEST_CASE("origin degenerates to the constant disc") {
    const CVector origin = make_point({Complex(0.0), Complex(0.0), Complex(0.0)});
    const AnalyticDisc d = disc_quadric_linear(origin, QuadricBranch::VaryFirst);
    CHECK(d.degree() == 0);
    CHECK(boundary_residual(d, graph_oracle(preset_surface("signature-quadric")), 64) < 1e-15);
}

TEST_CASE("mirrored negative levels work on both branches") {
    const GraphSurface sq = preset_surface("signature-quadric");
    // s = -0.1: vary-first radius^2 = |z2|^2 + s needs |z2|^2 >= 0.1.
    const CVector p = make_point({Complex(0.3), Complex(0.6), Complex(-0.1)});
    const AnalyticDisc d1 = disc_quadric_linear(p, QuadricBranch::VaryFirst);
    CHECK(boundary_residual(d1, graph_oracle(sq), 128) < 1e-12);
    // vary-second radius^2 = |z1|^2 - s = |z1|^2 + 0.1 > 0 always.
    const CVector q = make_point({Complex(0.3), Complex(0.2), Complex(-0.1)});
    const AnalyticDisc d2 = disc_quadric_linear(q, QuadricBranch::VarySecond);
    CHECK(boundary_residual(d2, graph_oracle(sq), 128) < 1e-12);
}

TEST_CASE("disc_quadric_linear constraint violations raise domain errors") {
    // |z1|^2 > |z2|^2 + s on the vary-first branch.
    CHECK_THROWS_AS(
        disc_quadric_linear(make_point({Complex(1.0), Complex(0.1), Complex(0.1)}), QuadricBranch::VaryFirst),
        DomainError);
    // Nonreal last coordinate.
    CHECK_THROWS_AS(
        disc_quadric_linear(make_point({Complex(0.1), Complex(0.1), Complex(0.0, 0.2)}),
                   QuadricBranch::VaryFirst),
        DomainError);
}

TEST_CASE("random admissible quadric points on both branches") {
    Rng rng(65);
    const SetOracle target = graph_oracle(preset_surface("signature-quadric"));
    for (int trial = 0; trial < 200; ++trial) {
        const double s = rng.uniform(-0.5, 0.5);
        // vary-first: choose z2, then z1 inside the branch disc
        const Complex z2 = rng.disc(1.0);
        const double r1sq = std::norm(z2) + s;
        if (r1sq > 1e-6) {
            const Complex z1 = std::sqrt(r1sq) * rng.disc(1.0);
            const AnalyticDisc d =
                disc_quadric_linear(make_point({z1, z2, Complex(s)}), QuadricBranch::VaryFirst);
            CHECK(boundary_residual(d, target, 128) < 1e-8);
            CHECK(d.through_error() < 1e-8);
        }
        // vary-second: choose z1, then z2 inside the branch disc
        const Complex w1 = rng.disc(1.0);
        const double r2sq = std::norm(w1) - s;
        if (r2sq > 1e-6) {
            const Complex w2 = std::sqrt(r2sq) * rng.disc(1.0);
            const AnalyticDisc d =
                disc_quadric_linear(make_point({w1, w2, Complex(s)}), QuadricBranch::VarySecond);
            CHECK(boundary_residual(d, target, 128) < 1e-8);
            CHECK(d.through_error() < 1e-8);
        }
    }
}

// ---------------------------------------------------------------------------
// Torus / bidisc hull
// ---------------------------------------------------------------------------

TEST_CASE("half-torus points carry stage-1 certificates") {
    const Complex z2 = Complex(0.9, 0.1) / std::abs(Complex(0.9, 0.1));
    const auto d = bidisc_stage1_disc(Complex(0.5, 0.0), z2, 1.0);
    REQUIRE(d.has_value());
    CHECK(d->through_error() < 1e-12);
    double resid = 0.0;
    for (const CVector& b : d->boundary_samples(128))
        resid = std::max(resid, torus_seed_residual(b[0], b[1], 1.0));
    CHECK(resid < 1e-12);
}

TEST_CASE("interior bidisc points have no stage-1 certificate but a stage-2 one") {
    CHECK_FALSE(bidisc_stage1_disc(Complex(0.3, 0.0), Complex(0.4, 0.0), 1.0).has_value());
    CHECK(torus_stage1_residual(Complex(0.3, 0.0), Complex(0.4, 0.0), 1.0) > 0.5);

    const auto d = bidisc_stage2_disc(Complex(0.3, 0.0), Complex(0.4, 0.0), 1.0);
    REQUIRE(d.has_value());
    CHECK(d->through_error() < 1e-12);
    double resid = 0.0;
    for (const CVector& b : d->boundary_samples(128))
        resid = std::max(resid, torus_stage1_residual(b[0], b[1], 1.0));
    CHECK(resid < 1e-9);
}

TEST_CASE("the origin lies in the second hull stage") {
    const auto d = bidisc_stage2_disc(Complex(0.0), Complex(0.0), 1.0);
    REQUIRE(d.has_value());
    CHECK(d->through_error() == 0.0);
    double resid = 0.0;
    for (const CVector& b : d->boundary_samples(64))
        resid = std::max(resid, torus_stage1_residual(b[0], b[1], 1.0));
    CHECK(resid < 1e-12);
}

TEST_CASE("torus hull cloud has certified points at both stages") {
    Rng rng(66);
    TorusHullOptions opts;
    opts.stage1_count = 60;
    opts.stage2_count = 60;
    const HullCloud cloud = torus_bidisc_hull(TorusVariant::PlainC2, opts, rng);
    CHECK(cloud.stage_points(1).size() > 20);
    CHECK(cloud.stage_points(2).size() > 20);
    for (const HullPoint& hp : cloud.points) CHECK(hp.chain.max_residual < opts.attach_tol);
}

TEST_CASE("homogenized variant keeps the fiber scale in the third coordinate") {
    Rng rng(67);
    TorusHullOptions opts;
    opts.stage1_count = 40;
    opts.stage2_count = 40;
    const HullCloud cloud = torus_bidisc_hull(TorusVariant::HomogenizedC3, opts, rng);
    CHECK(!cloud.points.empty());
    for (const HullPoint& hp : cloud.points) {
        REQUIRE(hp.p.size() == 3);
        const double c = hp.p[2].real();
        CHECK(c > 0.0);
        CHECK(c <= 1.0);
        CHECK(std::abs(hp.p[2].imag()) == 0.0);
        CHECK(std::abs(hp.p[0]) <= 2.0 * c + 1e-9);
        CHECK(std::abs(hp.p[1]) <= c + 1e-9);
    }
}

// ---------------------------------------------------------------------------
// Generic hull iteration
// ---------------------------------------------------------------------------

namespace {

HullProblem zbarz_problem() {
    HullProblem prob;
    prob.label = "zbar-z";
    const GraphSurface zz = preset_surface("zbar-z");
    prob.seed_sampler = [zz](Rng& rng) {
        for (;;) {
            const Complex z1 = rng.disc(kTwoStep.C);
            const Complex z2 = rng.disc(kTwoStep.C);
            const Complex w = std::conj(z1) * z2;
            if (std::abs(w) <= kTwoStep.C) return make_point({z1, z2, w});
        }
    };
    prob.stage_oracles = {graph_oracle_boxed(zz, kTwoStep.C), zbarz_region1_oracle(kTwoStep)};
    prob.candidate_samplers = {[](Rng& rng) { return sample_zbarz_region1(kTwoStep, rng); },
                               [](Rng& rng) { return sample_zbarz_region2(kTwoStep, rng); }};
    prob.generators = {
        {{"zbarz-step1", [](const CVector& p) { return std::optional(disc_zbarz_step1(p, kTwoStep)); }}},
        {{"zbarz-step2", [](const CVector& p) { return std::optional(disc_zbarz_step2(p, kTwoStep)); }}}};
    return prob;
}

}  // namespace

TEST_CASE("one hull iteration covers sampled A1 points") {
    Rng rng(68);
    const HullCloud cloud = hull_iterate(zbarz_problem(), 1, 50, rng);
    const SetOracle a1 = zbarz_region1_oracle(kTwoStep);
    int stage1 = 0;
    for (const HullPoint& hp : cloud.points) {
        if (hp.stage != 1) continue;
        ++stage1;
        CHECK(a1(hp.p) <= kTwoStep.membership_tol);  // generator postcondition
        CHECK(hp.chain.max_residual < 1e-8);
    }
    CHECK(stage1 >= 45);
}

TEST_CASE("second iteration adds A2 points with witness chains") {
    Rng rng(69);
    const HullCloud cloud = hull_iterate(zbarz_problem(), 2, 40, rng);
    int stage2 = 0;
    for (const HullPoint& hp : cloud.points) {
        if (hp.stage != 2) continue;
        ++stage2;
        CHECK(std::abs(hp.p[0]) <= kTwoStep.epsilon + 1e-9);
        CHECK(hp.chain.max_residual < 1e-8);
        CHECK(hp.chain.discs.size() >= 1);
    }
    CHECK(stage2 >= 35);
}

TEST_CASE("a rigid seed with no generators yields only seed samples") {
    HullProblem prob;
    prob.label = "totally-real";
    prob.seed_sampler = [](Rng& rng) {
        return make_point({Complex(rng.uniform(-1.0, 1.0), 0.0)});
    };
    prob.stage_oracles = {SetOracle{"real-line", [](const CVector& p) {
                                        return std::abs(p[0].imag());
                                    }}};
    const int samples = 30;
    Rng rng(70);
    const HullCloud cloud = hull_iterate(prob, 1, samples, rng);
    CHECK(cloud.points.size() == samples);
    for (const HullPoint& hp : cloud.points) CHECK(hp.stage == 0);
}

// ---------------------------------------------------------------------------
// Maximum principle
// ---------------------------------------------------------------------------

namespace {

std::vector<CVector> torus_samples(int per_axis) {
    std::vector<CVector> x;
    for (int i = 0; i < per_axis; ++i) {
        for (int j = 0; j < per_axis; ++j) {
            const double a = 2.0 * kPi * i / per_axis;
            const double b = 2.0 * kPi * j / per_axis;
            x.push_back(make_point(
                {Complex(std::cos(a), std::sin(a)), Complex(std::cos(b), std::sin(b))}));
        }
    }
    return x;
}

}  // namespace

TEST_CASE("constant polynomials meet the maximum principle with zero margin") {
    HullCloud cloud;
    cloud.points.push_back({make_point({Complex(0.2), Complex(0.1)}), 1, {}});
    const std::vector<CVector> x = torus_samples(16);
    const std::vector<HoloPolynomial> polys{HoloPolynomial::constant(2, Complex(2.0, -1.0))};
    const MaxPrincipleReport r = max_principle_check(cloud, x, polys, 0.4);
    CHECK(r.pass);
    CHECK(std::abs(r.worst.value - std::abs(Complex(2.0, -1.0))) < 1e-15);
}

TEST_CASE("z1 z2 on the stage-2 cloud is bounded by its torus sup") {
    Rng rng(71);
    TorusHullOptions opts;
    opts.stage1_count = 0;
    opts.stage2_count = 80;
    const HullCloud cloud = torus_bidisc_hull(TorusVariant::PlainC2, opts, rng);
    REQUIRE(!cloud.points.empty());
    HoloPolynomial p(2);
    p.add_term({1, 1}, 1.0);  // z1 z2, sup on the torus = 1
    const std::vector<CVector> x = torus_samples(128);
    const double mesh_h = 2.0 * kPi / 128.0 * std::sqrt(2.0);
    const MaxPrincipleReport r =
        max_principle_check(cloud, x, std::vector<HoloPolynomial>{p}, mesh_h);
    CHECK(r.pass);
    CHECK(r.worst.bound >= 1.0);
}

TEST_CASE("a point outside the hull bound is reported") {
    HullCloud cloud;
    cloud.points.push_back({make_point({Complex(3.0), Complex(3.0)}), 1, {}});
    HoloPolynomial p(2);
    p.add_term({1, 1}, 1.0);
    const std::vector<CVector> x = torus_samples(64);
    const MaxPrincipleReport r =
        max_principle_check(cloud, x, std::vector<HoloPolynomial>{p}, 0.15);
    CHECK_FALSE(r.pass);
    CHECK(r.worst.value == doctest::Approx(9.0));
}

// ---------------------------------------------------------------------------
// Shrinking families
// ---------------------------------------------------------------------------

TEST_CASE("closed-form shrink trace of the (1/2, 1/2, 1/2) step-1 point") {
    const CVector p = make_point({Complex(0.5), Complex(0.5), Complex(0.5)});
    HullCloud cloud;
    cloud.points.push_back({p, 1, DiscChain{{disc_zbarz_step1(p, kTwoStep)}, 0.0}});
    const int alpha[3] = {1, 1, 2};
    const SadhReport r = sadh_paths(cloud, std::span<const int>(alpha, 3), 33, zbarz_boxed());
    REQUIRE(r.families.size() == 1);
    const ShrinkFamily& fam = r.families[0];
    CHECK(fam.monotone);
    for (size_t j = 0; j < fam.t_grid.size(); ++j) {
        const double t = fam.t_grid[j];
        CHECK(std::abs(fam.center_trace[j][0] - Complex(t / 2.0)) < 1e-15);
        CHECK(std::abs(fam.center_trace[j][1] - Complex(t / 2.0)) < 1e-15);
        CHECK(std::abs(fam.center_trace[j][2] - Complex(t * t / 2.0)) < 1e-15);
        // closed-form norm^2 = t^2/2 + t^4/4, strictly increasing
        const double expect = std::sqrt(t * t / 2.0 + t * t * t * t / 4.0);
        CHECK(fam.center_trace[j].norm() == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(fam.epsilon < 1e-10);
}

TEST_CASE("origin points are excluded as constant paths") {
    const CVector origin = make_point({Complex(0.0), Complex(0.0), Complex(0.0)});
    HullCloud cloud;
    cloud.points.push_back({origin, 0, DiscChain{{AnalyticDisc::constant(origin)}, 0.0}});
    const int alpha[3] = {1, 1, 2};
    const SadhReport r = sadh_paths(cloud, std::span<const int>(alpha, 3), 16, zbarz_boxed());
    CHECK(r.families.empty());
    CHECK(r.excluded_origin_points == 1);
}

TEST_CASE("dilations keep hull points inside their stage regions") {
    // delta_t(DH(X)) sits in DH(delta_t(X)): on the dilation-invariant
    // regions this reads as oracle membership along the whole orbit.
    Rng rng(73);
    const int alpha[3] = {1, 1, 2};
    const std::span<const int> a(alpha, 3);
    const GraphSurface zz = preset_surface("zbar-z");
    for (int trial = 0; trial < 25; ++trial) {
        const CVector p1 = sample_zbarz_region1(kTwoStep, rng);
        const CVector p2 = sample_zbarz_region2(kTwoStep, rng);
        for (int j = 0; j <= 16; ++j) {
            const double t = static_cast<double>(j) / 16;
            CHECK(zbarz_region1_residual(weighted_dilate(p1, t, a), kTwoStep) <= 1e-9);
            // Stage-0: dilated surface points stay on the surface.
            const CVector on_m = weighted_dilate(
                make_point({p1[0], p1[1], std::conj(p1[0]) * p1[1]}), t, a);
            CHECK(zz.graph_residual(on_m) <= 1e-12);
        }
        // A2's |z2| lower bound is not dilation invariant, but the membership
        // chain A2 in DH(A1) persists: the dilated disc certifies it.
        const AnalyticDisc d = disc_zbarz_step2(p2, kTwoStep);
        for (int j = 1; j <= 8; ++j) {
            const double t = static_cast<double>(j) / 8;
            const AnalyticDisc dt = dilate_disc(d, t, a);
            CHECK(boundary_residual(dt, zbarz_region1_oracle(kTwoStep), 64) <= 1e-9);
        }
    }
}

TEST_CASE("distinct dilation orbits give disjoint traces") {
    Rng rng(72);
    HullCloud cloud;
    for (int i = 0; i < 12; ++i) {
        const CVector p = sample_zbarz_region1(kTwoStep, rng);
        if (p.norm() == 0.0) continue;
        cloud.points.push_back({p, 1, DiscChain{{disc_zbarz_step1(p, kTwoStep)}, 0.0}});
    }
    const int alpha[3] = {1, 1, 2};
    const SadhReport r = sadh_paths(cloud, std::span<const int>(alpha, 3), 33, zbarz_boxed());
    CHECK(r.all_monotone);
    CHECK(r.nonintersecting);
    CHECK(r.max_residual < 1e-8);
    CHECK(r.min_pair_separation > 1e-9);
}
