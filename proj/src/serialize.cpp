#include "crlab/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace crlab {

std::string format_double(double v) {
    // Shortest representation that round-trips: try increasing precision.
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) return buf;
    }
    return buf;
}

namespace {

nlohmann::json complex_json(Complex c) { return {c.real(), c.imag()}; }

nlohmann::json polynomial_json_obj(const HoloPolynomial& poly) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [e, c] : poly.terms()) {
        nlohmann::json t;
        t["exponents"] = e;
        t["re"] = c.real();
        t["im"] = c.imag();
        terms.push_back(t);
    }
    return {{"nvars", poly.nvars()}, {"terms", terms}};
}

}  // namespace

std::string moment_report_csv(const MomentReport& report) {
    std::ostringstream out;
    out << "t,k,re,im,abs\n";
    for (Eigen::Index ti = 0; ti < report.values.rows(); ++ti) {
        for (Eigen::Index k = 0; k < report.values.cols(); ++k) {
            const Complex v = report.values(ti, k);
            out << format_double(report.t_grid[static_cast<size_t>(ti)]) << "," << k << ","
                << format_double(v.real()) << "," << format_double(v.imag()) << ","
                << format_double(std::abs(v)) << "\n";
        }
    }
    return out.str();
}

MomentReport parse_moment_report_csv(const std::string& text) {
    MomentReport report;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::tuple<double, int, Complex>> rows;
    int k_max = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        std::getline(ls, tok, ',');
        const double t = std::stod(tok);
        std::getline(ls, tok, ',');
        const int k = std::stoi(tok);
        std::getline(ls, tok, ',');
        const double re = std::stod(tok);
        std::getline(ls, tok, ',');
        const double im = std::stod(tok);
        rows.emplace_back(t, k, Complex(re, im));
        k_max = std::max(k_max, k);
        if (report.t_grid.empty() || report.t_grid.back() != t) report.t_grid.push_back(t);
    }
    report.k_max = k_max;
    report.values.setZero(static_cast<Eigen::Index>(report.t_grid.size()), k_max + 1);
    size_t ti = 0;
    for (const auto& [t, k, v] : rows) {
        while (report.t_grid[ti] != t) ++ti;
        report.values(static_cast<Eigen::Index>(ti), k) = v;
    }
    return report;
}

std::string hull_cloud_csv(const HullCloud& cloud) {
    std::ostringstream out;
    out << "stage,residual";
    int dim = 0;
    for (const HullPoint& hp : cloud.points) dim = std::max(dim, static_cast<int>(hp.p.size()));
    for (int i = 0; i < dim; ++i) out << ",re" << i << ",im" << i;
    out << "\n";
    for (const HullPoint& hp : cloud.points) {
        out << hp.stage << "," << format_double(hp.chain.max_residual);
        for (int i = 0; i < dim; ++i) {
            const Complex c = i < hp.p.size() ? hp.p[i] : Complex(0.0, 0.0);
            out << "," << format_double(c.real()) << "," << format_double(c.imag());
        }
        out << "\n";
    }
    return out.str();
}

std::string approx_fibers_csv(const ApproxReport& report) {
    std::ostringstream out;
    out << "level,degree,residual\n";
    for (const FiberResidualEntry& e : report.fiber_residuals)
        out << format_double(e.level) << "," << e.degree << "," << format_double(e.residual)
            << "\n";
    return out.str();
}

std::string approx_error_grid_csv(const ApproxReport& report) {
    std::ostringstream out;
    out << "re,im,s,error\n";
    for (const GridErrorEntry& e : report.verification_grid)
        out << format_double(e.re) << "," << format_double(e.im) << "," << format_double(e.s)
            << "," << format_double(e.error) << "\n";
    return out.str();
}

std::string moment_report_json(const MomentReport& report) {
    nlohmann::json j;
    j["t_grid"] = report.t_grid;
    j["k_max"] = report.k_max;
    j["quad_mesh"] = report.quad_mesh;
    nlohmann::json vals = nlohmann::json::array();
    for (Eigen::Index ti = 0; ti < report.values.rows(); ++ti) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index k = 0; k < report.values.cols(); ++k)
            row.push_back(complex_json(report.values(ti, k)));
        vals.push_back(row);
    }
    j["values"] = vals;
    return j.dump(2) + "\n";
}

std::string hull_cloud_json(const HullCloud& cloud) {
    nlohmann::json j;
    j["label"] = cloud.label;
    j["stages"] = cloud.stages;
    nlohmann::json pts = nlohmann::json::array();
    for (const HullPoint& hp : cloud.points) {
        nlohmann::json p;
        nlohmann::json coords = nlohmann::json::array();
        for (Eigen::Index i = 0; i < hp.p.size(); ++i) coords.push_back(complex_json(hp.p[i]));
        p["point"] = coords;
        p["stage"] = hp.stage;
        p["residual"] = hp.chain.max_residual;
        nlohmann::json chain = nlohmann::json::array();
        for (const AnalyticDisc& d : hp.chain.discs) {
            nlohmann::json disc;
            nlohmann::json comps = nlohmann::json::array();
            for (const auto& comp : d.components()) {
                nlohmann::json cc = nlohmann::json::array();
                for (const Complex& c : comp) cc.push_back(complex_json(c));
                comps.push_back(cc);
            }
            disc["components"] = comps;
            if (d.has_through()) {
                disc["through_param"] = complex_json(d.through_param());
                nlohmann::json tp = nlohmann::json::array();
                for (Eigen::Index i = 0; i < d.through_point().size(); ++i)
                    tp.push_back(complex_json(d.through_point()[i]));
                disc["through_point"] = tp;
            }
            chain.push_back(disc);
        }
        p["chain"] = chain;
        pts.push_back(p);
    }
    j["points"] = pts;
    return j.dump(2) + "\n";
}

std::string approx_report_json(const ApproxReport& report) {
    nlohmann::json j;
    j["status"] = approx_status_name(report.status);
    j["message"] = report.message;
    j["epsilon_target"] = report.epsilon_target;
    j["budget"] = report.budget;
    j["achieved_sup_error"] = report.achieved_sup_error;
    j["max_fiber_residual"] = report.max_fiber_residual;
    j["partition_error"] = report.partition_error;
    j["weierstrass_error"] = report.weierstrass_error;
    j["inflation_factor"] = report.inflation_factor;
    j["inflation_flagged"] = report.inflation_flagged;
    j["levels"] = report.levels;
    nlohmann::json fibers = nlohmann::json::array();
    for (const FiberResidualEntry& e : report.fiber_residuals)
        fibers.push_back({{"level", e.level}, {"degree", e.degree}, {"residual", e.residual}});
    j["fiber_residuals"] = fibers;
    if (report.status != ApproxStatus::Ok) {
        j["plateau_level"] = report.plateau_level;
        j["plateau_residual"] = report.plateau_residual;
    }
    if (report.q) j["polynomial"] = polynomial_json_obj(*report.q);
    return j.dump(2) + "\n";
}

std::string moment_table_json(const GaussianMomentTable& table) {
    nlohmann::json j;
    j["n"] = table.n;
    j["beta_max"] = table.beta_max;
    j["epsilon"] = table.epsilon;
    j["mesh_radial"] = table.mesh_radial;
    j["mesh_angular"] = table.mesh_angular;
    j["undersampled"] = table.undersampled;
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index b = 0; b < table.m.rows(); ++b) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index g = 0; g < table.m.cols(); ++g) row.push_back(complex_json(table.m(b, g)));
        rows.push_back(row);
    }
    j["moments"] = rows;
    return j.dump(2) + "\n";
}

std::string polynomial_json(const HoloPolynomial& poly) {
    return polynomial_json_obj(poly).dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open for writing: " + path);
    out << content;
    if (!out) throw DomainError("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace crlab
