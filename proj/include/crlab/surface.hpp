#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crlab/polynomial.hpp"
#include "crlab/types.hpp"

namespace crlab {

enum class SurfaceKind {
    SpecialElliptic,   // w = |z|^2
    EllipticBishop,    // w = z zbar + lambda (z^2 + zbar^2) + E,  lambda in [0, 1/2)
    ParabolicBishop,   // w = z zbar + (z^2 + zbar^2)/2
    HyperbolicBishop,  // lambda in (1/2, inf];  lambda = inf means w = z^2 + zbar^2 + E
    LeviFlatZbarZ,     // w = conj(z1) z2 in C^3
    SignatureQuadric,  // s = |z1|^2 - |z2|^2 in C^2 x R
    ExpFlatStep,       // s = exp(-1/(Re z)^2) for Re z > 0, else 0 (in C x R)
};

std::string kind_name(SurfaceKind k);

/// Graph submanifold w = rho(z, zbar) over a box |z| < delta1, |w| < delta2,
/// with the graph value real for every kind except LeviFlatZbarZ.
class GraphSurface {
public:
    SurfaceKind kind = SurfaceKind::SpecialElliptic;
    double lambda = 0.0;          // Bishop parameter; ignored by non-Bishop kinds
    bool lambda_infinite = false; // hyperbolic model w = z^2 + zbar^2
    HoloPolynomial eterm;         // higher-order term E as a polynomial in (z, zbar)
    double delta1 = 1.0;
    double delta2 = 1.0;
    std::vector<int> alpha;       // dilation weights when weighted homogeneous; empty = unset
    std::string name;

    int graph_dim() const;    // number of complex graph variables
    int ambient_dim() const;  // graph_dim() + 1
    bool real_graph() const { return kind != SurfaceKind::LeviFlatZbarZ; }

    Complex rho(std::span<const Complex> z) const;
    Complex rho1(Complex z) const { return rho(std::span<const Complex>(&z, 1)); }

    /// Wirtinger derivative d rho / d z for one-variable kinds.
    Complex rho_z(Complex z) const;

    /// d/dr and d/dtheta of rho along z = r e^{i theta}, one-variable kinds.
    double drho_dr(Complex z) const;
    double drho_dtheta(Complex z) const;

    /// |w-component - rho(z-components)|; the cheap set-distance surrogate.
    double graph_residual(const CVector& point) const;

    /// Amount by which the point leaves the |z| < delta1, |w| < delta2 box.
    double box_excess(const CVector& point) const;

    /// rho with the box precondition enforced (DomainError outside).
    Complex eval_rho_checked(std::span<const Complex> z) const;
};

/// Named catalog entries:
///   special-elliptic, elliptic-bishop, parabolic-bishop, hyperbolic-bishop,
///   hyperbolic-model, zbar-z, signature-quadric, exp-flat-step
GraphSurface preset_surface(const std::string& name);

/// Key-value surface description, one `key=value` per line.  Keys: kind,
/// lambda (number or `inf`), delta1, delta2, alpha (comma list), eterm
/// (none | re-z3 | abs-z4).  Unknown keys are an error.
GraphSurface parse_surface_config(const std::string& text);
GraphSurface load_surface_config(const std::string& path);

/// t^{alpha_i} p_i componentwise; total on t in [0,1], positive integer weights.
CVector weighted_dilate(const CVector& p, double t, std::span<const int> alpha);

/// Anisotropic dilation path t -> delta_t(base_point) sampled on a uniform
/// t-grid in [0, 1].
struct DilationPath {
    CVector base_point;
    std::vector<int> alpha;
    std::vector<double> t_grid;
    std::vector<CVector> samples;
};

DilationPath make_dilation_path(const CVector& base_point, std::span<const int> alpha, int mesh);

}  // namespace crlab
