#include "crlab/btkernel.hpp"

#include <cmath>
#include <vector>

namespace crlab {

double bt_normalization(int n) { return static_cast<double>(n) / kPi; }

double bt_normalization_integral_quadrature(int n, int radial_nodes) {
    // Gaussian tail below e^{-45} outside the truncation radius.
    const double r_cut = std::sqrt(45.0 / n);
    const GaussLegendre gl(radial_nodes, 0.0, r_cut);
    return 2.0 * kPi *
           gl.integrate([&](double r) { return std::exp(-static_cast<double>(n) * r * r) * r; });
}

GaussianMomentTable gaussian_moments(const SurfaceFn1& f, int n, double epsilon, int beta_max,
                                     int mesh_radial, int mesh_angular) {
    GaussianMomentTable table;
    table.n = n;
    table.beta_max = beta_max;
    table.epsilon = epsilon;
    table.mesh_radial = mesh_radial;
    table.mesh_angular = mesh_angular;
    table.undersampled = mesh_angular < 4 * beta_max + 16;
    table.m.setZero(beta_max + 1, beta_max + 1);

    const SmoothCutoff chi{epsilon / 2.0, epsilon};
    const GaussLegendre gl(mesh_radial, 0.0, epsilon);
    const double dtheta = 2.0 * kPi / mesh_angular;

    // Angular Fourier sums A_d(r) = (2 pi / m) sum_j f(r e^{i theta_j}) e^{i d theta_j}
    // for d = gamma - beta in [-beta_max, beta_max], then radial combination.
    const int nfreq = 2 * beta_max + 1;
    for (int i = 0; i < mesh_radial; ++i) {
        const double r = gl.nodes[static_cast<size_t>(i)];
        const double w = gl.weights[static_cast<size_t>(i)];
        const double weight = w * chi(r) * std::exp(-static_cast<double>(n) * r * r) * r;
        if (weight == 0.0) continue;

        std::vector<Complex> fourier(static_cast<size_t>(nfreq), Complex(0.0, 0.0));
        for (int j = 0; j < mesh_angular; ++j) {
            const double theta = dtheta * j;
            const Complex fz = f(r * Complex(std::cos(theta), std::sin(theta)));
            for (int d = -beta_max; d <= beta_max; ++d) {
                const double phase = d * theta;
                fourier[static_cast<size_t>(d + beta_max)] +=
                    fz * Complex(std::cos(phase), std::sin(phase));
            }
        }
        for (Complex& c : fourier) c *= dtheta;

        std::vector<double> rpow(static_cast<size_t>(2 * beta_max + 1), 1.0);
        for (size_t q = 1; q < rpow.size(); ++q) rpow[q] = rpow[q - 1] * r;

        for (int beta = 0; beta <= beta_max; ++beta) {
            for (int gamma = 0; gamma <= beta_max; ++gamma) {
                table.m(beta, gamma) += weight * rpow[static_cast<size_t>(beta + gamma)] *
                                        fourier[static_cast<size_t>(gamma - beta + beta_max)];
            }
        }
    }
    return table;
}

HoloPolynomial bt_polynomial(const GaussianMomentTable& table, int degree, double drop_tol) {
    const int bm = table.beta_max;
    for (int beta = 0; beta <= bm; ++beta) {
        for (int gamma = beta + 1; gamma <= bm; ++gamma) {
            const double viol = std::abs(table.m(beta, gamma));
            if (viol > drop_tol)
                throw MomentConditionError(
                    "bt_polynomial: moment-table entry (beta=" + std::to_string(beta) +
                    ", gamma=" + std::to_string(gamma) + ") has |M| = " + std::to_string(viol) +
                    " > drop_tol; f violates the moment condition");
        }
    }

    std::vector<double> fact(static_cast<size_t>(2 * bm + degree + 2), 1.0);
    for (size_t k = 1; k < fact.size(); ++k) fact[k] = fact[k - 1] * static_cast<double>(k);

    const double n = table.n;
    const double cn = bt_normalization(table.n);

    // Factor F(z, u) = c_n sum_{beta >= gamma} n^{beta+gamma}/(beta! gamma!) M z^{beta-gamma} u^gamma.
    HoloPolynomial factor(2);
    for (int beta = 0; beta <= bm; ++beta) {
        for (int gamma = 0; gamma <= beta; ++gamma) {
            if (beta > degree) continue;  // z^{beta-gamma} u^gamma has total degree beta
            const Complex mval = table.m(beta, gamma);
            if (mval == Complex(0.0, 0.0)) continue;
            const double scale = cn * std::pow(n, beta + gamma) /
                                 (fact[static_cast<size_t>(beta)] * fact[static_cast<size_t>(gamma)]);
            factor.add_term({static_cast<unsigned>(beta - gamma), static_cast<unsigned>(gamma)},
                            scale * mval);
        }
    }

    // Exponential factor e^{-n u} truncated at the cap.
    HoloPolynomial expo(2);
    double term = 1.0;
    for (int j = 0; j <= degree; ++j) {
        expo.add_term({0, static_cast<unsigned>(j)}, term);
        term *= -n / (j + 1.0);
    }

    return (expo * factor).truncated(static_cast<unsigned>(degree));
}

Complex bt_apply(const SurfaceFn1& f, int n, Complex z, double epsilon, int mesh_radial,
                 int mesh_angular) {
    const SmoothCutoff chi{epsilon / 2.0, epsilon};
    const GaussLegendre gl(mesh_radial, 0.0, epsilon);
    const double dtheta = 2.0 * kPi / mesh_angular;
    Complex acc(0.0, 0.0);
    for (int i = 0; i < mesh_radial; ++i) {
        const double r = gl.nodes[static_cast<size_t>(i)];
        const double w = gl.weights[static_cast<size_t>(i)] * chi(r) * r;
        if (w == 0.0) continue;
        Complex ring(0.0, 0.0);
        for (int j = 0; j < mesh_angular; ++j) {
            const double theta = dtheta * j;
            const Complex zeta = r * Complex(std::cos(theta), std::sin(theta));
            ring += f(zeta) * std::exp(-static_cast<double>(n) * std::norm(z - zeta));
        }
        acc += w * ring * dtheta;
    }
    return bt_normalization(n) * acc;
}

}  // namespace crlab
