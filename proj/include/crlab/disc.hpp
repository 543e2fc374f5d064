#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crlab/surface.hpp"
#include "crlab/types.hpp"

namespace crlab {

/// Polynomial map of the closed unit disc into C^n.  Components are stored as
/// ascending Taylor coefficients in zeta, so the map is holomorphic on the
/// open disc by construction.  A through-point (zeta*, p) records where the
/// disc meets the point it was built for.
class AnalyticDisc {
public:
    AnalyticDisc() = default;
    explicit AnalyticDisc(std::vector<std::vector<Complex>> components)
        : components_(std::move(components)) {}

    static AnalyticDisc constant(const CVector& p) {
        std::vector<std::vector<Complex>> comps(static_cast<size_t>(p.size()));
        for (Eigen::Index i = 0; i < p.size(); ++i) comps[static_cast<size_t>(i)] = {p[i]};
        AnalyticDisc d(std::move(comps));
        d.set_through(Complex(0.0, 0.0), p);
        return d;
    }

    int target_dim() const { return static_cast<int>(components_.size()); }
    int degree() const {
        size_t d = 0;
        for (const auto& c : components_) d = std::max(d, c.empty() ? 0 : c.size() - 1);
        return static_cast<int>(d);
    }
    const std::vector<std::vector<Complex>>& components() const { return components_; }

    CVector eval(Complex zeta) const {
        CVector out(static_cast<Eigen::Index>(components_.size()));
        for (size_t i = 0; i < components_.size(); ++i) {
            const auto& c = components_[i];
            Complex acc(0.0, 0.0);
            for (size_t k = c.size(); k-- > 0;) acc = acc * zeta + c[k];
            out[static_cast<Eigen::Index>(i)] = acc;
        }
        return out;
    }

    CVector boundary(double theta) const { return eval(Complex(std::cos(theta), std::sin(theta))); }

    /// phi(e^{i theta_m}) on m uniform angles.  Uses the cache built by
    /// cache_boundary when the grid sizes agree, so built discs stay
    /// immutable and shareable after construction.
    std::vector<CVector> boundary_samples(int m) const {
        if (static_cast<int>(boundary_cache_.size()) == m) return boundary_cache_;
        std::vector<CVector> out;
        out.reserve(static_cast<size_t>(m));
        for (int j = 0; j < m; ++j) out.push_back(boundary(2.0 * kPi * j / m));
        return out;
    }

    /// Precompute the boundary grid (construction-time step).
    void cache_boundary(int m) { boundary_cache_ = boundary_samples(m); }
    const std::vector<CVector>& cached_boundary() const { return boundary_cache_; }

    void set_through(Complex zeta_star, const CVector& p) {
        through_param_ = zeta_star;
        through_point_ = p;
    }
    bool has_through() const { return through_point_.has_value(); }
    Complex through_param() const { return through_param_; }
    const CVector& through_point() const { return *through_point_; }

    /// |phi(zeta*) - p| for the recorded through-point.
    double through_error() const {
        return has_through() ? (eval(through_param_) - *through_point_).norm() : 0.0;
    }

private:
    std::vector<std::vector<Complex>> components_;
    Complex through_param_{0.0, 0.0};
    std::optional<CVector> through_point_;
    std::vector<CVector> boundary_cache_;
};

/// Membership residual for a target set: zero inside, a violation magnitude
/// outside.  Graph targets use the graph residual plus box excess rather than
/// true Euclidean distance.
struct SetOracle {
    std::string name;
    std::function<double(const CVector&)> residual;
    double operator()(const CVector& p) const { return residual(p); }
};

/// Oracle for membership in a graph surface (graph residual + box excess).
SetOracle graph_oracle(const GraphSurface& surface);

/// Same, but with the box |coords| <= C of the disc constructions.
SetOracle graph_oracle_boxed(const GraphSurface& surface, double box_c);

/// Max over m uniform boundary angles of the oracle residual of
/// phi(e^{i theta}); the smallest certified epsilon of approximate attachment.
double boundary_residual(const AnalyticDisc& disc, const SetOracle& target, int m);

}  // namespace crlab
