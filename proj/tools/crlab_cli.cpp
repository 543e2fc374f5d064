// Experiment driver: one subcommand per construction, deterministic seeds,
// CSV/JSON artifacts.  Exit codes: 0 = PASS, 1 = FAIL, 2 = usage error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "crlab/btkernel.hpp"
#include "crlab/graphapprox.hpp"
#include "crlab/hulls.hpp"
#include "crlab/moments.hpp"
#include "crlab/polyparse.hpp"
#include "crlab/serialize.hpp"

using namespace crlab;

namespace {

struct CommonOpts {
    std::string out_dir;
    std::uint64_t seed = 20240901;
    int threads = 1;
};

std::string resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("CRLAB_OUT")) return env;
    return "crlab-out";
}

void ensure_dir(const std::string& dir) { std::filesystem::create_directories(dir); }

// Function corpus on one-variable graph surfaces, parametrized by z.
SurfaceFn1 named_function1(const std::string& name, const GraphSurface& surface) {
    if (name == "one") return [](Complex) { return Complex(1.0, 0.0); };
    if (name == "zeta" || name == "z") return [](Complex z) { return z; };
    if (name == "zbar") return [](Complex z) { return std::conj(z); };
    if (name == "zeta-absq") return [](Complex z) { return z * std::norm(z); };
    if (name.rfind("poly:", 0) == 0) {
        const std::string vars[] = {"z", "w"};
        const HoloPolynomial p = parse_polynomial(name.substr(5), vars);
        return restrict_to_graph(p, surface);
    }
    throw DomainError("unknown function selector '" + name +
                      "' (try one, zeta, zbar, zeta-absq, poly:<expr in z,w>)");
}

// Index-sliced parallel map with deterministic per-slot writes.
template <typename Fn>
void parallel_for(int n, int threads, const Fn& fn) {
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += threads) fn(i);
        });
    }
    for (std::thread& th : pool) th.join();
}

int run_moments(const CommonOpts& common, const std::string& surface_name,
                const std::string& f_name, std::vector<double> t_grid, int k_max, int mesh,
                double tol) {
    const GraphSurface surface = preset_surface(surface_name);
    const SurfaceFn1 f = named_function1(f_name, surface);
    if (t_grid.empty()) t_grid = {0.1, 0.2, 0.4};
    const MomentReport report = moment_integrals(f, surface, t_grid, k_max, mesh);
    const MomentVerdict verdict = moment_verdict(report, tol);
    ensure_dir(common.out_dir);
    write_file(common.out_dir + "/moments.csv", moment_report_csv(report));
    write_file(common.out_dir + "/moments.json", moment_report_json(report));
    std::cout << "[moments] " << (verdict.pass ? "PASS" : "FAIL") << " surface=" << surface_name
              << " f=" << f_name << " worst|value|=" << format_double(verdict.worst_abs)
              << " at (t=" << format_double(verdict.worst_t) << ", k=" << verdict.worst_k
              << ") tol=" << format_double(tol) << "\n";
    return verdict.pass ? 0 : 1;
}

int run_bt(const CommonOpts& common, const std::string& f_name, std::vector<int> n_grid,
           double epsilon, int degree, int beta_max) {
    const GraphSurface surface = preset_surface("special-elliptic");
    const SurfaceFn1 f = named_function1(f_name, surface);
    if (n_grid.empty()) n_grid = {16, 64, 256};

    ensure_dir(common.out_dir);
    std::ostringstream csv;
    csv << "n,sup_error\n";
    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    double final_err = 0.0;

    const int radial = 17, angular = 24;
    for (int n : n_grid) {
        std::vector<double> errs(static_cast<size_t>(radial * angular), 0.0);
        parallel_for(radial * angular, common.threads, [&](int idx) {
            const int i = idx / angular, j = idx % angular;
            const double r = epsilon / 4.0 * i / (radial - 1);
            const double theta = 2.0 * kPi * j / angular;
            const Complex z(r * std::cos(theta), r * std::sin(theta));
            errs[static_cast<size_t>(idx)] = std::abs(bt_apply(f, n, z, epsilon) - f(z));
        });
        double sup = 0.0;
        for (double e : errs) sup = std::max(sup, e);
        csv << n << "," << format_double(sup) << "\n";
        if (sup > prev) monotone = false;
        prev = sup;
        final_err = sup;
    }
    write_file(common.out_dir + "/bt_sup_errors.csv", csv.str());

    const int n_poly = n_grid[n_grid.size() / 2];
    const GaussianMomentTable table = gaussian_moments(f, n_poly, epsilon, beta_max);
    write_file(common.out_dir + "/bt_table.json", moment_table_json(table));
    double two_route = 0.0;
    try {
        const HoloPolynomial q = bt_polynomial(table, degree);
        write_file(common.out_dir + "/bt_polynomial.json", polynomial_json(q));
        Rng rng(common.seed);
        for (int trial = 0; trial < 10; ++trial) {
            const Complex z = rng.disc(epsilon / 4.0);
            two_route = std::max(
                two_route, std::abs(q.eval2(z, std::norm(z)) - bt_apply(f, n_poly, z, epsilon)));
        }
    } catch (const MomentConditionError& e) {
        std::cout << "[bt] FAIL " << e.what() << "\n";
        return 1;
    }

    const double cn_gap = std::abs(bt_normalization_integral_quadrature(n_poly) - kPi / n_poly);
    const bool pass = monotone && final_err < 0.05 && cn_gap < 1e-10;
    std::cout << "[bt] " << (pass ? "PASS" : "FAIL") << " f=" << f_name
              << " final_sup=" << format_double(final_err) << " monotone=" << monotone
              << " two_route=" << format_double(two_route) << " cn_gap=" << format_double(cn_gap)
              << "\n";
    return pass ? 0 : 1;
}

int run_hull(const CommonOpts& common, const std::string& surface_name, int stages, int samples) {
    Rng rng(common.seed);
    HullCloud cloud;
    if (surface_name == "zbar-z") {
        const TwoStepConstants tc{};
        HullProblem prob;
        prob.label = "zbar-z";
        const GraphSurface zz = preset_surface("zbar-z");
        prob.seed_sampler = [zz, tc](Rng& r) {
            for (;;) {
                const Complex z1 = r.disc(tc.C), z2 = r.disc(tc.C);
                const Complex w = std::conj(z1) * z2;
                if (std::abs(w) <= tc.C) return make_point({z1, z2, w});
            }
        };
        prob.stage_oracles = {graph_oracle_boxed(zz, tc.C), zbarz_region1_oracle(tc)};
        prob.candidate_samplers = {[tc](Rng& r) { return sample_zbarz_region1(tc, r); },
                                   [tc](Rng& r) { return sample_zbarz_region2(tc, r); }};
        prob.generators = {
            {{"zbarz-step1",
              [tc](const CVector& p) { return std::optional(disc_zbarz_step1(p, tc)); }}},
            {{"zbarz-step2",
              [tc](const CVector& p) { return std::optional(disc_zbarz_step2(p, tc)); }}}};
        cloud = hull_iterate(prob, stages, samples, rng);
    } else if (surface_name == "torus" || surface_name == "torus-c3") {
        TorusHullOptions opts;
        opts.stage1_count = samples;
        opts.stage2_count = samples;
        cloud = torus_bidisc_hull(
            surface_name == "torus" ? TorusVariant::PlainC2 : TorusVariant::HomogenizedC3, opts,
            rng);
    } else {
        throw DomainError("hull: unknown surface '" + surface_name +
                          "' (try zbar-z, torus, torus-c3)");
    }

    double worst = 0.0;
    for (const HullPoint& hp : cloud.points) worst = std::max(worst, hp.chain.max_residual);
    ensure_dir(common.out_dir);
    write_file(common.out_dir + "/hull_cloud.csv", hull_cloud_csv(cloud));
    write_file(common.out_dir + "/hull_cloud.json", hull_cloud_json(cloud));
    const bool pass = worst < 1e-8 && !cloud.points.empty();
    std::cout << "[hull] " << (pass ? "PASS" : "FAIL") << " surface=" << surface_name
              << " points=" << cloud.points.size() << " max_residual=" << format_double(worst)
              << "\n";
    return pass ? 0 : 1;
}

int run_sadh(const CommonOpts& common, int samples, int t_mesh) {
    const TwoStepConstants tc{};
    Rng rng(common.seed);
    HullCloud cloud;
    cloud.label = "zbar-z-stage1";
    cloud.stages = 1;
    for (int i = 0; i < samples; ++i) {
        const CVector p = sample_zbarz_region1(tc, rng);
        if (p.norm() == 0.0) continue;
        cloud.points.push_back({p, 1, DiscChain{{disc_zbarz_step1(p, tc)}, 0.0}});
    }
    const int alpha[3] = {1, 1, 2};
    const SetOracle target = graph_oracle_boxed(preset_surface("zbar-z"), tc.C);
    const SadhReport report = sadh_paths(cloud, std::span<const int>(alpha, 3), t_mesh, target);

    ensure_dir(common.out_dir);
    std::ostringstream csv;
    csv << "family,t,re0,im0,re1,im1,re2,im2,residual\n";
    for (size_t fi = 0; fi < report.families.size(); ++fi) {
        const ShrinkFamily& fam = report.families[fi];
        for (size_t j = 0; j < fam.t_grid.size(); ++j) {
            csv << fi << "," << format_double(fam.t_grid[j]);
            for (int c = 0; c < 3; ++c)
                csv << "," << format_double(fam.center_trace[j][c].real()) << ","
                    << format_double(fam.center_trace[j][c].imag());
            csv << "," << format_double(fam.residuals[j]) << "\n";
        }
    }
    write_file(common.out_dir + "/sadh_paths.csv", csv.str());

    const bool pass = report.all_monotone && report.nonintersecting && report.max_residual <= 1e-8;
    std::cout << "[sadh] " << (pass ? "PASS" : "FAIL") << " families=" << report.families.size()
              << " monotone=" << report.all_monotone
              << " nonintersecting=" << report.nonintersecting
              << " max_residual=" << format_double(report.max_residual) << "\n";
    return pass ? 0 : 1;
}

int run_approx(const CommonOpts& common, const std::string& surface_name,
               const std::string& f_name, double epsilon, int degree_z, int degree_s,
               std::vector<double> box_spec) {
    const GraphSurface surface = preset_surface(surface_name);
    const SurfaceFn1 f = named_function1(f_name, surface);
    ApproxBox box;
    if (!box_spec.empty()) {
        if (box_spec.size() != 3) throw DomainError("--box wants z_radius,s_min,s_max");
        box = ApproxBox{box_spec[0], box_spec[1], box_spec[2]};
    } else if (surface.kind == SurfaceKind::SpecialElliptic ||
               surface.kind == SurfaceKind::EllipticBishop ||
               surface.kind == SurfaceKind::ParabolicBishop) {
        box = ApproxBox{0.8, 0.0, 0.36};
    }
    ApproxOptions opts;
    opts.degree_z_max = degree_z;
    opts.degree_s = degree_s;

    ensure_dir(common.out_dir);
    try {
        const ApproxReport report = graph_approximate(f, surface, box, epsilon, opts);
        write_file(common.out_dir + "/approx_report.json", approx_report_json(report));
        write_file(common.out_dir + "/approx_fibers.csv", approx_fibers_csv(report));
        write_file(common.out_dir + "/approx_error_grid.csv", approx_error_grid_csv(report));
        const bool pass = report.status == ApproxStatus::Ok;
        std::cout << "[approx] " << (pass ? "PASS" : "FAIL") << " surface=" << surface_name
                  << " f=" << f_name << " status=" << approx_status_name(report.status)
                  << " achieved=" << format_double(report.achieved_sup_error)
                  << " budget=" << format_double(report.budget);
        if (!report.message.empty()) std::cout << " (" << report.message << ")";
        std::cout << "\n";
        return pass ? 0 : 1;
    } catch (const ConditionStarError& e) {
        std::cout << "[approx] FAIL surface=" << surface_name
                  << " status=condition-star-violated (" << e.what() << ")\n";
        return 1;
    }
}

int run_catalog(const std::string& config_path) {
    std::vector<GraphSurface> surfaces;
    if (!config_path.empty()) {
        surfaces.push_back(load_surface_config(config_path));
    } else {
        for (const char* name :
             {"special-elliptic", "elliptic-bishop", "parabolic-bishop", "hyperbolic-bishop",
              "hyperbolic-model", "zbar-z", "signature-quadric", "exp-flat-step"})
            surfaces.push_back(preset_surface(name));
    }
    for (const GraphSurface& s : surfaces) {
        std::cout << s.name << ": kind=" << kind_name(s.kind);
        if (s.kind == SurfaceKind::EllipticBishop || s.kind == SurfaceKind::HyperbolicBishop ||
            s.kind == SurfaceKind::ParabolicBishop)
            std::cout << " lambda="
                      << (s.lambda_infinite ? std::string("inf") : format_double(s.lambda));
        std::cout << " delta1=" << format_double(s.delta1) << " delta2=" << format_double(s.delta2);
        if (!s.alpha.empty()) {
            std::cout << " alpha=";
            for (size_t i = 0; i < s.alpha.size(); ++i) std::cout << (i ? "," : "") << s.alpha[i];
        }
        std::cout << "\n";
    }
    return 0;
}

void print_mapping() {
    std::cout << "subcommand -> acceptance criterion\n"
              << "  moments -> 1 (moment counterexample and polynomial restrictions)\n"
              << "  bt      -> 2 (Gaussian operator convergence and two-route consistency)\n"
              << "  hull    -> 3, 4 (disc constructions; iterated bidisc hull)\n"
              << "  sadh    -> 5 (shrinking families along weighted dilations)\n"
              << "  approx  -> 6, 7 (fiberwise approximation; continuity probe)\n"
              << "  catalog -> surface catalog sanity\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crlab: constructions on CR singular graph surfaces"};
    app.require_subcommand(0, 1);
    app.set_config("--config", "", "flat key=value config file applied before flags");

    bool list_mapping = false;
    app.add_flag("--list", list_mapping, "print the subcommand-to-criterion mapping");

    CommonOpts common;
    std::string out_flag;
    app.add_option("--out", out_flag, "output directory (default $CRLAB_OUT or ./crlab-out)");
    app.add_option("--seed", common.seed, "rng seed (std::mt19937_64 stream, top-53-bit doubles)");
    app.add_option("--threads", common.threads, "worker threads for grid evaluations");

    std::string surface_name = "special-elliptic";
    std::string f_name = "zbar";
    std::vector<double> t_grid;
    int k_max = 4, mesh = 256;
    double tol = 1e-8;
    CLI::App* moments = app.add_subcommand("moments", "moment integrals over level curves");
    moments->add_option("--surface", surface_name);
    moments->add_option("--f", f_name);
    moments->add_option("--t-grid", t_grid)->delimiter(',');
    moments->add_option("--k-max", k_max);
    moments->add_option("--mesh", mesh);
    moments->add_option("--tol", tol);

    std::string bt_f = "zeta";
    std::vector<int> n_grid;
    double bt_epsilon = 0.5;
    int bt_degree = 8, bt_beta_max = 16;
    CLI::App* bt = app.add_subcommand("bt", "Gaussian approximation operator on w = |z|^2");
    bt->add_option("--f", bt_f);
    bt->add_option("--n-grid", n_grid)->delimiter(',');
    bt->add_option("--epsilon", bt_epsilon);
    bt->add_option("--degree", bt_degree);
    bt->add_option("--beta-max", bt_beta_max);

    std::string hull_surface = "zbar-z";
    int stages = 2, samples = 200;
    CLI::App* hull = app.add_subcommand("hull", "iterated disc-hull sampling");
    hull->add_option("--surface", hull_surface);
    hull->add_option("--stages", stages);
    hull->add_option("--samples", samples);

    int sadh_samples = 100, t_mesh = 64;
    CLI::App* sadh = app.add_subcommand("sadh", "shrinking disc families along dilations");
    sadh->add_option("--samples", sadh_samples);
    sadh->add_option("--t-mesh", t_mesh);

    std::string approx_surface = "hyperbolic-model";
    std::string approx_f = "zbar";
    double epsilon = 0.05;
    int degree_z = 16, degree_s = 32;
    std::vector<double> box_spec;
    CLI::App* approx = app.add_subcommand("approx", "fiberwise polynomial approximation");
    approx->add_option("--surface", approx_surface);
    approx->add_option("--f", approx_f);
    approx->add_option("--epsilon", epsilon);
    approx->add_option("--degree-z", degree_z);
    approx->add_option("--degree-s", degree_s);
    approx->add_option("--box", box_spec)->delimiter(',');

    std::string catalog_config;
    CLI::App* catalog = app.add_subcommand("catalog", "list or load surface descriptions");
    catalog->add_option("--file", catalog_config);

    // Global options (--seed, --out, --threads) may follow the subcommand.
    for (CLI::App* sub : {moments, bt, hull, sadh, approx, catalog}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    common.out_dir = resolve_out_dir(out_flag);

    try {
        if (list_mapping) {
            print_mapping();
            return 0;
        }
        if (moments->parsed())
            return run_moments(common, surface_name, f_name, t_grid, k_max, mesh, tol);
        if (bt->parsed()) return run_bt(common, bt_f, n_grid, bt_epsilon, bt_degree, bt_beta_max);
        if (hull->parsed()) return run_hull(common, hull_surface, stages, samples);
        if (sadh->parsed()) return run_sadh(common, sadh_samples, t_mesh);
        if (approx->parsed())
            return run_approx(common, approx_surface, approx_f, epsilon, degree_z, degree_s,
                              box_spec);
        if (catalog->parsed()) return run_catalog(catalog_config);
        std::cout << app.help();
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
