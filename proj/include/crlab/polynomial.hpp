#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "crlab/types.hpp"

namespace crlab {

/// Multi-index of monomial exponents, one entry per variable.
using MultiIndex = std::vector<unsigned>;

/// Multivariate polynomial with complex coefficients in holomorphic variables.
/// Terms live in an ordered map so that evaluation visits them in a fixed
/// order: identical inputs produce bitwise-identical values.  Zero
/// coefficients are erased on normalization.
class HoloPolynomial {
public:
    HoloPolynomial() = default;
    explicit HoloPolynomial(int nvars) : nvars_(nvars) {}

    static HoloPolynomial constant(int nvars, Complex c) {
        HoloPolynomial p(nvars);
        p.add_term(MultiIndex(static_cast<size_t>(nvars), 0u), c);
        return p;
    }

    /// The monomial x_var^power.
    static HoloPolynomial monomial(int nvars, int var, unsigned power, Complex c = 1.0) {
        HoloPolynomial p(nvars);
        MultiIndex e(static_cast<size_t>(nvars), 0u);
        e[static_cast<size_t>(var)] = power;
        p.add_term(e, c);
        return p;
    }

    int nvars() const { return nvars_; }
    bool empty() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::map<MultiIndex, Complex>& terms() const { return terms_; }

    void add_term(const MultiIndex& exps, Complex c) {
        auto [it, inserted] = terms_.emplace(exps, c);
        if (!inserted) it->second += c;
        if (it->second == Complex(0.0, 0.0)) terms_.erase(it);
    }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_) {
            unsigned s = 0;
            for (unsigned k : e) s += k;
            if (s > d) d = s;
        }
        return d;
    }

    Complex eval(std::span<const Complex> point) const {
        Complex acc(0.0, 0.0);
        for (const auto& [e, c] : terms_) {
            Complex m = c;
            for (size_t v = 0; v < e.size(); ++v) {
                Complex base = point[v];
                for (unsigned k = 0; k < e[v]; ++k) m *= base;
            }
            acc += m;
        }
        return acc;
    }

    Complex eval(const CVector& point) const {
        return eval(std::span<const Complex>(point.data(), static_cast<size_t>(point.size())));
    }

    Complex eval1(Complex z) const { return eval(std::span<const Complex>(&z, 1)); }
    Complex eval2(Complex a, Complex b) const {
        const Complex pt[2] = {a, b};
        return eval(std::span<const Complex>(pt, 2));
    }
    Complex eval3(Complex a, Complex b, Complex c) const {
        const Complex pt[3] = {a, b, c};
        return eval(std::span<const Complex>(pt, 3));
    }

    HoloPolynomial& operator+=(const HoloPolynomial& rhs) {
        for (const auto& [e, c] : rhs.terms_) add_term(e, c);
        return *this;
    }
    HoloPolynomial& operator-=(const HoloPolynomial& rhs) {
        for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
        return *this;
    }
    HoloPolynomial& operator*=(Complex s) {
        if (s == Complex(0.0, 0.0)) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }

    friend HoloPolynomial operator+(HoloPolynomial a, const HoloPolynomial& b) { return a += b; }
    friend HoloPolynomial operator-(HoloPolynomial a, const HoloPolynomial& b) { return a -= b; }
    friend HoloPolynomial operator*(HoloPolynomial a, Complex s) { return a *= s; }
    friend HoloPolynomial operator*(Complex s, HoloPolynomial a) { return a *= s; }

    friend HoloPolynomial operator*(const HoloPolynomial& a, const HoloPolynomial& b) {
        HoloPolynomial out(a.nvars_);
        MultiIndex e(static_cast<size_t>(a.nvars_), 0u);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                for (size_t v = 0; v < e.size(); ++v) e[v] = ea[v] + eb[v];
                out.add_term(e, ca * cb);
            }
        }
        return out;
    }

    /// Partial derivative with respect to one variable.
    HoloPolynomial derivative(int var) const {
        HoloPolynomial out(nvars_);
        const auto v = static_cast<size_t>(var);
        for (const auto& [e, c] : terms_) {
            if (e[v] == 0) continue;
            MultiIndex d = e;
            d[v] -= 1;
            out.add_term(d, c * static_cast<double>(e[v]));
        }
        return out;
    }

    /// Drop every term of total degree above the cap.
    HoloPolynomial truncated(unsigned degree_cap) const {
        HoloPolynomial out(nvars_);
        for (const auto& [e, c] : terms_) {
            unsigned s = 0;
            for (unsigned k : e) s += k;
            if (s <= degree_cap) out.add_term(e, c);
        }
        return out;
    }

    /// Drop terms with |coefficient| <= tol.
    HoloPolynomial pruned(double tol) const {
        HoloPolynomial out(nvars_);
        for (const auto& [e, c] : terms_)
            if (std::abs(c) > tol) out.add_term(e, c);
        return out;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    std::string to_string(std::span<const std::string> var_names) const;

private:
    int nvars_ = 0;
    std::map<MultiIndex, Complex> terms_;
};

/// Uniform-coefficient random polynomial of bounded total degree; coefficients
/// are drawn from the square [-1,1]^2 in the complex plane.
HoloPolynomial random_polynomial(int nvars, unsigned max_degree, Rng& rng);

}  // namespace crlab
