#include "crlab/surface.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace crlab {

std::string kind_name(SurfaceKind k) {
    switch (k) {
        case SurfaceKind::SpecialElliptic: return "special-elliptic";
        case SurfaceKind::EllipticBishop: return "elliptic-bishop";
        case SurfaceKind::ParabolicBishop: return "parabolic-bishop";
        case SurfaceKind::HyperbolicBishop: return "hyperbolic-bishop";
        case SurfaceKind::LeviFlatZbarZ: return "zbar-z";
        case SurfaceKind::SignatureQuadric: return "signature-quadric";
        case SurfaceKind::ExpFlatStep: return "exp-flat-step";
    }
    return "?";
}

int GraphSurface::graph_dim() const {
    switch (kind) {
        case SurfaceKind::LeviFlatZbarZ:
        case SurfaceKind::SignatureQuadric: return 2;
        default: return 1;
    }
}

int GraphSurface::ambient_dim() const { return graph_dim() + 1; }

namespace {

double exp_flat(double x) { return x > 0.0 ? std::exp(-1.0 / (x * x)) : 0.0; }

}  // namespace

Complex GraphSurface::rho(std::span<const Complex> z) const {
    switch (kind) {
        case SurfaceKind::SpecialElliptic:
            return std::norm(z[0]);
        case SurfaceKind::EllipticBishop:
        case SurfaceKind::ParabolicBishop:
        case SurfaceKind::HyperbolicBishop: {
            const Complex zz = z[0];
            const Complex zb = std::conj(zz);
            Complex v = lambda_infinite ? zz * zz + zb * zb
                                        : zz * zb + lambda * (zz * zz + zb * zb);
            if (!eterm.empty()) v += eterm.eval2(zz, zb);
            return Complex(v.real(), 0.0);
        }
        case SurfaceKind::LeviFlatZbarZ:
            return std::conj(z[0]) * z[1];
        case SurfaceKind::SignatureQuadric:
            return std::norm(z[0]) - std::norm(z[1]);
        case SurfaceKind::ExpFlatStep:
            return exp_flat(z[0].real());
    }
    return 0.0;
}

Complex GraphSurface::rho_z(Complex z) const {
    switch (kind) {
        case SurfaceKind::SpecialElliptic:
            return std::conj(z);
        case SurfaceKind::EllipticBishop:
        case SurfaceKind::ParabolicBishop:
        case SurfaceKind::HyperbolicBishop: {
            Complex v = lambda_infinite ? 2.0 * z : std::conj(z) + 2.0 * lambda * z;
            if (!eterm.empty()) v += eterm.derivative(0).eval2(z, std::conj(z));
            return v;
        }
        case SurfaceKind::ExpFlatStep: {
            const double x = z.real();
            if (x <= 0.0) return 0.0;
            // d/dz = (1/2) d/dx on a function of Re z only
            return Complex(exp_flat(x) / (x * x * x), 0.0);
        }
        default:
            throw UnsupportedKindError("rho_z: one-variable kinds only, got " + kind_name(kind));
    }
}

double GraphSurface::drho_dr(Complex z) const {
    const double r = std::abs(z);
    const Complex dir = r > 0.0 ? z / r : Complex(1.0, 0.0);
    return 2.0 * std::real(rho_z(z) * dir);
}

double GraphSurface::drho_dtheta(Complex z) const {
    return 2.0 * std::real(rho_z(z) * kI * z);
}

double GraphSurface::graph_residual(const CVector& point) const {
    const int gd = graph_dim();
    std::vector<Complex> z(static_cast<size_t>(gd));
    for (int i = 0; i < gd; ++i) z[static_cast<size_t>(i)] = point[i];
    return std::abs(point[gd] - rho(z));
}

double GraphSurface::box_excess(const CVector& point) const {
    const int gd = graph_dim();
    double zsq = 0.0;
    for (int i = 0; i < gd; ++i) zsq += std::norm(point[i]);
    double excess = std::max(0.0, std::sqrt(zsq) - delta1);
    excess += std::max(0.0, std::abs(point[gd]) - delta2);
    return excess;
}

Complex GraphSurface::eval_rho_checked(std::span<const Complex> z) const {
    double zsq = 0.0;
    for (const Complex& c : z) zsq += std::norm(c);
    if (std::sqrt(zsq) >= delta1)
        throw DomainError("eval_rho: |z| = " + std::to_string(std::sqrt(zsq)) +
                          " outside the box |z| < " + std::to_string(delta1));
    return rho(z);
}

namespace {

HoloPolynomial named_eterm(const std::string& name) {
    HoloPolynomial e(2);
    if (name == "none" || name.empty()) return e;
    if (name == "re-z3") {  // (z^3 + zbar^3)/2
        e.add_term({3, 0}, 0.5);
        e.add_term({0, 3}, 0.5);
        return e;
    }
    if (name == "abs-z4") {  // (z zbar)^2
        e.add_term({2, 2}, 1.0);
        return e;
    }
    throw DomainError("unknown E-term selector: " + name);
}

}  // namespace

GraphSurface preset_surface(const std::string& name) {
    GraphSurface s;
    s.name = name;
    if (name == "special-elliptic") {
        s.kind = SurfaceKind::SpecialElliptic;
        s.alpha = {1, 2};
    } else if (name == "elliptic-bishop") {
        s.kind = SurfaceKind::EllipticBishop;
        s.lambda = 0.25;
        s.alpha = {1, 2};
    } else if (name == "parabolic-bishop") {
        s.kind = SurfaceKind::ParabolicBishop;
        s.lambda = 0.5;
        s.alpha = {1, 2};
    } else if (name == "hyperbolic-bishop") {
        s.kind = SurfaceKind::HyperbolicBishop;
        s.lambda = 1.0;
        s.alpha = {1, 2};
    } else if (name == "hyperbolic-model") {
        s.kind = SurfaceKind::HyperbolicBishop;
        s.lambda_infinite = true;
        s.alpha = {1, 2};
    } else if (name == "zbar-z") {
        s.kind = SurfaceKind::LeviFlatZbarZ;
        s.alpha = {1, 1, 2};
        s.delta1 = 8.0;   // holds the Delta_C polydisc of the disc constructions
        s.delta2 = 16.0;
    } else if (name == "signature-quadric") {
        s.kind = SurfaceKind::SignatureQuadric;
        s.alpha = {1, 1, 2};
        s.delta1 = 4.0;
        s.delta2 = 8.0;
    } else if (name == "exp-flat-step") {
        s.kind = SurfaceKind::ExpFlatStep;
    } else {
        throw DomainError("unknown surface preset: " + name);
    }
    return s;
}

GraphSurface parse_surface_config(const std::string& text) {
    GraphSurface s;
    s.name = "config";
    bool have_kind = false;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto strip = [](std::string v) {
            const auto b = v.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = v.find_last_not_of(" \t\r");
            return v.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DomainError("surface config: expected key=value, got '" + line + "'");
        const std::string key = strip(line.substr(0, eq));
        const std::string val = strip(line.substr(eq + 1));
        if (key == "kind") {
            s = preset_surface(val);
            s.name = "config:" + val;
            have_kind = true;
        } else if (key == "lambda") {
            if (val == "inf") {
                s.lambda_infinite = true;
            } else {
                s.lambda = std::stod(val);
            }
        } else if (key == "delta1") {
            s.delta1 = std::stod(val);
        } else if (key == "delta2") {
            s.delta2 = std::stod(val);
        } else if (key == "alpha") {
            s.alpha.clear();
            std::istringstream av(val);
            std::string tok;
            while (std::getline(av, tok, ',')) s.alpha.push_back(std::stoi(tok));
        } else if (key == "eterm") {
            s.eterm = named_eterm(val);
        } else {
            throw DomainError("surface config: unknown key '" + key + "'");
        }
    }
    if (!have_kind) throw DomainError("surface config: missing 'kind'");
    return s;
}

GraphSurface load_surface_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open surface config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_surface_config(buf.str());
}

CVector weighted_dilate(const CVector& p, double t, std::span<const int> alpha) {
    CVector out(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        double f = 1.0;
        for (int k = 0; k < alpha[static_cast<size_t>(i)]; ++k) f *= t;
        out[i] = f * p[i];
    }
    return out;
}

DilationPath make_dilation_path(const CVector& base_point, std::span<const int> alpha, int mesh) {
    DilationPath path;
    path.base_point = base_point;
    path.alpha.assign(alpha.begin(), alpha.end());
    path.t_grid.reserve(static_cast<size_t>(mesh));
    path.samples.reserve(static_cast<size_t>(mesh));
    for (int j = 0; j < mesh; ++j) {
        const double t = mesh > 1 ? static_cast<double>(j) / (mesh - 1) : 1.0;
        path.t_grid.push_back(t);
        path.samples.push_back(weighted_dilate(base_point, t, alpha));
    }
    return path;
}

}  // namespace crlab
