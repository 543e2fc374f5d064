#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crlab/fiber.hpp"
#include "crlab/moments.hpp"
#include "crlab/polynomial.hpp"
#include "crlab/surface.hpp"

namespace crlab {

/// Compact box K = { |z| <= z_radius, s_min <= s <= s_max } in C x R.
struct ApproxBox {
    double z_radius = 0.5;
    double s_min = -0.5;
    double s_max = 0.5;
};

// ----------------------------------------------------------------------------
// Per-fiber polynomial fit
// ----------------------------------------------------------------------------

struct FiberFit {
    HoloPolynomial poly;   // raw monomial coefficients in z
    int degree = 0;
    double sup_residual = 0.0;
    double l2_residual = 0.0;
    double condition = 0.0;  // of the scaled Vandermonde
    double ridge = 0.0;      // Tikhonov weight the coefficient cap settled on
};

/// Least-squares fit of f on the fiber samples in a centered-and-scaled
/// monomial basis.  Condition numbers above 1e12 trigger degree-reduction
/// retries before giving up.  The reported sup residual over the samples is
/// the constructive surrogate for a Mergelyan epsilon-fit; a residual that
/// refuses to go down under degree sweeps certifies per-fiber failure.
FiberFit fiber_polyfit(const SurfaceFn1& f, const Fiber& fiber, int degree);

/// Pipeline variant: fixed basis (z / scale)^k about the origin and a fixed
/// Tikhonov ridge, so that fits at nearby levels share one coefficient space
/// and vary smoothly with the level.  ridge = 0 is plain least squares.
FiberFit fiber_polyfit_common(const SurfaceFn1& f, const Fiber& fiber, int degree, double scale,
                              double ridge);

// ----------------------------------------------------------------------------
// Level selection under the fiber-continuity hypothesis
// ----------------------------------------------------------------------------

struct SlicePlan {
    std::vector<double> levels;  // s_1 < ... < s_l
    std::vector<double> deltas;  // hat support half-widths
    double range_lo = 0.0;       // I = [range_lo, range_hi]
    double range_hi = 0.0;

    size_t size() const { return levels.size(); }

    /// The (at most two) active hat weights at s; they sum to 1 exactly.
    struct Weights {
        size_t left;
        size_t right;
        double w_left;
        double w_right;
    };
    Weights weights(double s) const;
    double hat(size_t j, double s) const;
};

struct SliceOptions {
    int probe_mesh = 128;  // initial probe levels across the s-range
    int fiber_mesh = 96;   // angular mesh of probe fibers
    int max_levels = 4096;
};

/// Probe the Hausdorff modulus of the level family on an adaptively refined
/// s-grid.  An adjacent-fiber distance that no amount of refinement brings
/// below epsilon is a jump and raises ConditionStarError; otherwise levels
/// are chosen greedily so every probed fiber stays within epsilon of its hat
/// window nodes.
SlicePlan select_slices(const GraphSurface& surface, const ApproxBox& box, double epsilon,
                        const SliceOptions& opts = {});

// ----------------------------------------------------------------------------
// Partition combination and the Weierstrass lift
// ----------------------------------------------------------------------------

/// Coefficient functions a_k(s) = sum_j hat_j(s) coeff_k(P_j): the piecewise
/// linear interpolants of the per-level fit coefficients.
struct PartitionCoefficients {
    SlicePlan plan;
    int degree = 0;                        // common z-degree cap
    std::vector<std::vector<Complex>> node_coeffs;  // per level, coefficients 0..degree

    Complex eval(int k, double s) const;
};

PartitionCoefficients assemble_partition(const std::vector<FiberFit>& fits, const SlicePlan& plan);

struct WeierstrassResult {
    HoloPolynomial q;          // polynomial in (z, w)
    double coeff_sup_error = 0.0;      // max_k sup_I |fit_k - a_k|
    double aggregate_error = 0.0;      // sup_I sum_k |fit_k - a_k| z_radius^k
    bool target_met = false;
    int degree_s = 0;
};

/// Chebyshev least-squares fit of each coefficient function by a polynomial
/// in s of degree <= degree_s, assembled into Q(z, s) and renamed to (z, w).
/// An unreachable target is reported through target_met, not an error.
WeierstrassResult weierstrass_lift(const PartitionCoefficients& coeffs, double epsilon_w,
                                   int degree_s, double z_radius);

// ----------------------------------------------------------------------------
// End-to-end pipeline
// ----------------------------------------------------------------------------

enum class ApproxStatus {
    Ok,
    MomentGateFailed,     // elliptic kinds: f fails the moment condition
    FiberStageFailed,     // some fiber residual plateaus above the budget
    BudgetExceeded,       // verification grid error above 5 epsilon
};

std::string approx_status_name(ApproxStatus s);

struct FiberResidualEntry {
    double level = 0.0;
    int degree = 0;
    double residual = 0.0;
};

struct GridErrorEntry {
    double re = 0.0;
    double im = 0.0;
    double s = 0.0;
    double error = 0.0;
};

struct ApproxReport {
    ApproxStatus status = ApproxStatus::Ok;
    std::string message;
    double epsilon_target = 0.0;
    double achieved_sup_error = 0.0;  // sup |Q - f| on an independent grid of M
    double budget = 0.0;              // 5 epsilon
    std::vector<FiberResidualEntry> fiber_residuals;
    double max_fiber_residual = 0.0;
    double partition_error = 0.0;    // sup |P - f| on the grid (hat-combination stage)
    double weierstrass_error = 0.0;  // sup |Q - P| on the grid (lift stage)
    double inflation_factor = 0.0;   // partition_error / max fiber residual
    bool inflation_flagged = false;  // measured factor above the proof's 3x
    std::optional<HoloPolynomial> q;
    size_t levels = 0;
    std::vector<GridErrorEntry> verification_grid;  // heat-map data
    // Negative-direction diagnostics (moment gate / fiber plateau)
    double plateau_level = 0.0;
    double plateau_residual = 0.0;
};

struct ApproxOptions {
    int degree_z_max = 16;
    int degree_s = 32;
    int fit_fiber_mesh = 256;
    int verify_theta_mesh = 96;
    int verify_radial_mesh = 48;
    int moment_k_max = 6;
    int moment_mesh = 256;
    double moment_tol = 1e-8;
    SliceOptions slices;
};

/// select_slices -> per-level fiber fits (each to epsilon) -> partition
/// combination -> Weierstrass lift -> independent-grid verification against
/// the 5-epsilon budget.  Elliptic kinds are gated on the moment verdict
/// first; a failed gate reports the measured fiber-residual plateau instead
/// of an approximant.
ApproxReport graph_approximate(const SurfaceFn1& f, const GraphSurface& surface,
                               const ApproxBox& box, double epsilon,
                               const ApproxOptions& opts = {});

}  // namespace crlab
