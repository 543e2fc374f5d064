#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crlab/disc.hpp"
#include "crlab/polynomial.hpp"
#include "crlab/surface.hpp"
#include "crlab/types.hpp"

namespace crlab {

// ----------------------------------------------------------------------------
// Hull clouds
// ----------------------------------------------------------------------------

/// Certificate for one sampled hull point: the discs that produced it
/// (innermost first) and the largest boundary residual along the chain.
struct DiscChain {
    std::vector<AnalyticDisc> discs;
    double max_residual = 0.0;
};

struct HullPoint {
    CVector p;
    int stage = 0;
    DiscChain chain;
};

/// Sampled inner approximation of an iterated disc hull.  Membership is
/// certificate-based: a point is in because a generator produced a valid
/// chain; absence of a certificate is never evidence of non-membership.
struct HullCloud {
    std::string label;
    int stages = 0;
    std::vector<HullPoint> points;

    std::vector<CVector> stage_points(int stage) const {
        std::vector<CVector> out;
        for (const HullPoint& hp : points)
            if (hp.stage == stage) out.push_back(hp.p);
        return out;
    }
};

// ----------------------------------------------------------------------------
// Disc generators on w = conj(z1) z2
// ----------------------------------------------------------------------------

/// Constants of the two-step construction.  The paper pins C > 3, 2C - K1 and
/// K2 - 18 small positive, and C K2 / K1 < K3 < C^2; defaults take the stated
/// margins at C = 4 and the K3 midpoint.
struct TwoStepConstants {
    double C = 4.0;
    double K1 = 7.9;
    double K2 = 18.1;
    double K3 = (4.0 * 18.1 / 7.9 + 16.0) / 2.0;
    double epsilon = 0.05;        // |z1| bound of the second-step region
    double membership_tol = 1e-9; // slack for region pre-checks
};

/// Residual of membership in the first-step region
/// A1 = Delta_C intersect { Im(w z1 conj z2) = 0, Re(w z1 conj z2) >= |z1 z2|^2,
///                          |z2|/C <= |z1| <= C |z2| }.
double zbarz_region1_residual(const CVector& p, const TwoStepConstants& tc);
SetOracle zbarz_region1_oracle(const TwoStepConstants& tc);

/// First-step disc through p in A1, attached to M intersect Delta_C:
/// phi(zeta) = (lambda zeta, w zeta / lambda, w) with lambda^2 = w z1 / z2,
/// the constant disc when p already lies on M, and phi(zeta) =
/// (conj(w) zeta, zeta, w) on the z2 = 0 branch (where z1 = 0 as well).
AnalyticDisc disc_zbarz_step1(const CVector& p, const TwoStepConstants& tc);

/// Second-step disc through p in
/// A2 = { |z1| <= eps, 1/K1 <= |z2| <= |w|/K2, K3/C <= |w| <= C },
/// attached to A1: phi(zeta) = (e^{i theta} zeta f(zeta, 1/zeta),
/// w lambda e^{i theta} zeta, w) with zeta f = (4/9)(zeta - 1/2)(1 - zeta/2).
/// theta is solved by argument-matching fixed-point iteration, lambda by
/// modulus matching; lambda outside [1/(C|w|), C/(9|w|)] has no attached disc
/// and raises InfeasiblePointError.
AnalyticDisc disc_zbarz_step2(const CVector& p, const TwoStepConstants& tc);

/// Boundary profile f(e^{i theta}, e^{-i theta}) = (4/9)(5/4 - cos theta) of
/// the second-step disc; real and within [1/9, 1] on the circle.
double zbarz_step2_boundary_profile(double theta);

/// Random point of A1 via the disc parametrization (always a member).
CVector sample_zbarz_region1(const TwoStepConstants& tc, Rng& rng);

/// Random point of A2 for which the second-step construction is feasible.
CVector sample_zbarz_region2(const TwoStepConstants& tc, Rng& rng);

// ----------------------------------------------------------------------------
// Disc generator on s = |z1|^2 - |z2|^2  (C^2 x R)
// ----------------------------------------------------------------------------

enum class QuadricBranch { VaryFirst, VarySecond };

/// Radius-scaled linear disc through p = (z1, z2, s) attached to the
/// signature quadric: branch VaryFirst gives (R zeta, z2, s) with
/// R^2 = |z2|^2 + s, branch VarySecond gives (z1, R zeta, s) with
/// R^2 = |z1|^2 - s.  Works for either sign of s under the stated
/// constraints; the degenerate radius-zero case requires p on the surface
/// and returns the constant disc.
AnalyticDisc disc_quadric_linear(const CVector& p, QuadricBranch branch, double tol = 1e-9);

// ----------------------------------------------------------------------------
// Torus / bidisc example (the set that needs two hull iterations)
// ----------------------------------------------------------------------------

enum class TorusVariant { PlainC2, HomogenizedC3 };

/// Residual of membership in the seed set
/// X = {|z1| = 1 = |z2|, Im z2 >= 0} u {|z1| = 2, |z2| = 1, Im z2 <= 0},
/// scaled by c (the fiber scale of the homogenized variant; c = 1 in C^2).
double torus_seed_residual(Complex z1, Complex z2, double c);

/// Residual of membership in the stage-1 region (constant-z2 discs filled in):
/// {|z1| <= 1, |z2| = 1, Im z2 >= 0} u {|z1| <= 2, |z2| = 1, Im z2 <= 0}, scaled by c.
double torus_stage1_residual(Complex z1, Complex z2, double c);

/// Constant-z2 disc through p with boundary on the seed set; nullopt when
/// p is not in the stage-1 region (e.g. |z2| != 1).
std::optional<AnalyticDisc> bidisc_stage1_disc(Complex z1, Complex z2, double c, double tol = 1e-9);

/// Pair-of-Blaschke-factors disc through p in the closed bidisc, attached to
/// the torus |z1| = |z2| = c inside the stage-1 region.  Blaschke factors are
/// stored as Taylor polynomials truncated to the requested boundary accuracy.
std::optional<AnalyticDisc> bidisc_stage2_disc(Complex z1, Complex z2, double c,
                                               double trunc_tol = 1e-10, double tol = 1e-9);

struct TorusHullOptions {
    int stage1_count = 200;
    int stage2_count = 200;
    int boundary_mesh = 256;
    double attach_tol = 1e-8;
    int c_levels = 4;  // fiber scales sampled for the homogenized variant
};

/// Sampled two-stage hull cloud of the torus example, with provenance.
HullCloud torus_bidisc_hull(TorusVariant variant, const TorusHullOptions& opts, Rng& rng);

// ----------------------------------------------------------------------------
// Generic Monte-Carlo hull iteration
// ----------------------------------------------------------------------------

struct HullGenerator {
    std::string name;
    /// Certified disc through the candidate, or nullopt / a thrown
    /// DomainError-family exception when the candidate is not covered.
    std::function<std::optional<AnalyticDisc>(const CVector&)> attach;
};

struct HullProblem {
    std::string label;
    std::function<CVector(Rng&)> seed_sampler;
    /// stage_oracles[j] is the target the stage-(j+1) discs attach to
    /// (stage_oracles[0] = the seed set itself).
    std::vector<SetOracle> stage_oracles;
    std::vector<std::function<CVector(Rng&)>> candidate_samplers;  // one per stage >= 1
    std::vector<std::vector<HullGenerator>> generators;            // one list per stage >= 1
    double attach_tol = 1e-8;
    int boundary_mesh = 256;
};

/// Monte-Carlo hull sampling: stage-0 seed samples plus, per iterate,
/// candidate points kept only when some generator certifies a disc chain
/// (boundary residual and through error within attach_tol).
HullCloud hull_iterate(const HullProblem& problem, int k, int samples, Rng& rng);

// ----------------------------------------------------------------------------
// Maximum-principle certification
// ----------------------------------------------------------------------------

struct MaxPrincipleWorst {
    size_t point_index = 0;
    size_t poly_index = 0;
    double value = 0.0;
    double bound = 0.0;
};

struct MaxPrincipleReport {
    bool pass = true;
    double worst_margin = -std::numeric_limits<double>::infinity();
    size_t points_checked = 0;
    size_t polys_checked = 0;
    MaxPrincipleWorst worst;
};

/// For every cloud point p and polynomial P, check
/// |P(p)| <= max over X samples of |P| + slack(mesh_h, P), where the slack
/// budget is the sampled gradient bound of P times the sample mesh size.
MaxPrincipleReport max_principle_check(const HullCloud& cloud, std::span<const CVector> x_samples,
                                       std::span<const HoloPolynomial> polys, double mesh_h);

// ----------------------------------------------------------------------------
// Shrinking families along weighted dilations
// ----------------------------------------------------------------------------

/// delta_t composed with the disc: coefficients scaled componentwise by t^alpha_i.
AnalyticDisc dilate_disc(const AnalyticDisc& disc, double t, std::span<const int> alpha);

/// Family phi_t = delta_t o phi shrinking a hull point to the origin along
/// its dilation orbit; phi_0 is the constant disc at the origin and
/// ||phi_t through-point|| increases strictly in t.
struct ShrinkFamily {
    CVector endpoint;
    AnalyticDisc base_disc;
    std::vector<int> alpha;
    std::vector<double> t_grid;
    std::vector<CVector> center_trace;  // delta_t(endpoint)
    std::vector<double> residuals;      // boundary residual per t
    double epsilon = 0.0;               // max residual along the family
    bool monotone = false;
};

struct SadhReport {
    std::vector<ShrinkFamily> families;
    bool all_monotone = true;
    bool nonintersecting = true;
    double max_residual = 0.0;
    double min_pair_separation = std::numeric_limits<double>::infinity();
    int excluded_origin_points = 0;
    std::vector<std::string> diagnostics;
};

/// Build one ShrinkFamily per certified cloud point (origin excluded),
/// verify strict center-trace monotonicity and per-t attachment against the
/// target oracle, and check mesh-level pairwise path nonintersection for
/// t > 0 (coincident traces are tolerated only for points on a common
/// dilation orbit, where equal initial segments are allowed).
SadhReport sadh_paths(const HullCloud& cloud, std::span<const int> alpha, int t_mesh,
                      const SetOracle& target, double attach_tol = 1e-8, int boundary_mesh = 256,
                      double separation_tol = 1e-9);

}  // namespace crlab
