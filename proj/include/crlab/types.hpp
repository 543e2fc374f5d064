#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace crlab {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;  // point of C^n (C^n x R points carry a real last coordinate)

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

// ----------------------------------------------------------------------------
// Error taxonomy
// ----------------------------------------------------------------------------

/// Input outside an operation's stated domain (bad point, empty set, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative solver failed to converge.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Operation not defined for this surface kind / fiber topology.
struct UnsupportedKindError : std::runtime_error {
    explicit UnsupportedKindError(const std::string& what) : std::runtime_error(what) {}
};

/// A point satisfies the region constraints but no disc parameters exist for it.
struct InfeasiblePointError : std::runtime_error {
    explicit InfeasiblePointError(const std::string& what) : std::runtime_error(what) {}
};

/// The operator's moment-condition hypothesis fails for the supplied data.
struct MomentConditionError : std::runtime_error {
    explicit MomentConditionError(const std::string& what) : std::runtime_error(what) {}
};

/// The fiber-continuity probe detected a Hausdorff jump.
struct ConditionStarError : std::runtime_error {
    explicit ConditionStarError(const std::string& what) : std::runtime_error(what) {}
};

// ----------------------------------------------------------------------------
// Deterministic random source
// ----------------------------------------------------------------------------

/// Seedable 64-bit generator with a fixed output mapping, so that a stored
/// seed replays the identical sample stream on any platform (std library
/// distributions are implementation-defined and are deliberately avoided).
/// Algorithm: std::mt19937_64 raw output; doubles via the top 53 bits.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return state_(); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Uniform point of the closed disc of the given radius (radius sqrt-law).
    Complex disc(double radius) {
        const double r = radius * std::sqrt(uniform());
        const double phi = uniform(0.0, 2.0 * kPi);
        return Complex(r * std::cos(phi), r * std::sin(phi));
    }

    /// Uniform point of the unit circle.
    Complex circle() {
        const double phi = uniform(0.0, 2.0 * kPi);
        return Complex(std::cos(phi), std::sin(phi));
    }

private:
    std::mt19937_64 state_;
};

inline CVector make_point(std::initializer_list<Complex> coords) {
    CVector p(static_cast<Eigen::Index>(coords.size()));
    Eigen::Index i = 0;
    for (const Complex& c : coords) p[i++] = c;
    return p;
}

}  // namespace crlab
