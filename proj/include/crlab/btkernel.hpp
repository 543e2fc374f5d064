#pragma once

#include <Eigen/Dense>

#include "crlab/moments.hpp"
#include "crlab/polynomial.hpp"
#include "crlab/quadrature.hpp"

namespace crlab {

/// Weighted moments of f against the factored Gaussian kernel on w = |z|^2:
///   M[beta, gamma] = int chi(|zeta|) f(zeta) conj(zeta)^beta zeta^gamma
///                    exp(-n |zeta|^2) dA(zeta),   0 <= beta, gamma <= beta_max.
/// The kernel index n sharpens the Gaussian (exp(-n|z - zeta|^2)); its
/// normalization constant c_n = n / pi satisfies 1/c_n = int exp(-n|zeta|^2) dA.
/// When f satisfies the moment condition on |zeta| <= eps, every entry with
/// gamma > beta vanishes (the angular selection rule), which is what makes the
/// re-summed operator a holomorphic function of (z, z zbar).
struct GaussianMomentTable {
    int n = 1;
    int beta_max = 0;
    double epsilon = 0.5;  // cutoff: chi == 1 on [0, eps/2], == 0 on [eps, inf)
    int mesh_radial = 0;
    int mesh_angular = 0;
    bool undersampled = false;  // angular mesh too coarse for beta_max
    Eigen::MatrixXcd m;         // (beta_max+1) x (beta_max+1)

    Complex entry(int beta, int gamma) const { return m(beta, gamma); }
};

/// Closed-form normalization constant c_n = n / pi.
double bt_normalization(int n);

/// Quadrature oracle for 1/c_n: int exp(-n |zeta|^2) dA by radial
/// Gauss-Legendre on a truncated domain.  Matches pi/n to ~1e-14.
double bt_normalization_integral_quadrature(int n, int radial_nodes = 200);

GaussianMomentTable gaussian_moments(const SurfaceFn1& f, int n, double epsilon, int beta_max,
                                     int mesh_radial = 96, int mesh_angular = 256);

/// Re-sum the moment table into a holomorphic polynomial Q_n(z, w):
///   Q_n(z, u) = c_n e^{-n u} sum_{beta >= gamma}
///               (n^{beta+gamma} / (beta! gamma!)) M[beta,gamma] z^{beta-gamma} u^gamma,
/// exponential series and double sum truncated at the total-degree cap, then
/// u renamed to w.  Entries with gamma > beta above drop_tol raise
/// MomentConditionError: the operator's hypothesis fails for this f.
HoloPolynomial bt_polynomial(const GaussianMomentTable& table, int degree, double drop_tol = 1e-8);

/// The operator by direct 2-D quadrature of its defining integral; the
/// independent oracle for the moment-table route.
Complex bt_apply(const SurfaceFn1& f, int n, Complex z, double epsilon, int mesh_radial = 96,
                 int mesh_angular = 256);

}  // namespace crlab
