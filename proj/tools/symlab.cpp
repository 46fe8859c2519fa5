// Command-line front end: bubble / solve / deficit / scan / sweep / report.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "symlab/deficits.hpp"
#include "symlab/fld_io.hpp"
#include "symlab/harness.hpp"
#include "symlab/kelvin.hpp"
#include "symlab/models.hpp"
#include "symlab/moving_planes.hpp"
#include "symlab/quadrature.hpp"
#include "symlab/solver.hpp"

using namespace symlab;

namespace {

Vec3 parse_vec(const std::string& s) {
    Vec3 v;
    char comma;
    std::istringstream is(s);
    if (!(is >> v.x >> comma >> v.y >> comma >> v.z))
        throw Error("expected 'x,y,z', got '" + s + "'");
    return v;
}

ExperimentConfig load_config(const std::string& path) {
    if (path.empty()) return ExperimentConfig{};
    return ExperimentConfig::from_json_file(path);
}

int cmd_bubble(const std::string& out, double lambda, const std::string& center_s,
               double half_width, int cells, bool print_residual) {
    BubbleParams params{parse_vec(center_s), lambda, 3};
    GridSpec spec = GridSpec::centered_cube(half_width, cells);
    TalentiBubble bubble(params);
    GridField field = sample_to_grid(bubble, spec, bubble.envelope());
    write_fld(out, field);
    std::cout << "{\"file\": \"" << out << "\", \"lambda\": " << lambda
              << ", \"spacing\": " << spec.spacing;
    if (print_residual) std::cout << ", \"residual_max\": " << bubble_residual(params, spec);
    std::cout << "}\n";
    return 0;
}

int cmd_solve(const std::string& config_path, double eps, const std::string& dump_field) {
    ExperimentConfig cfg = load_config(config_path);
    Nonlinearity f = cfg.make_nonlinearity();
    GridSpec lattice = GridSpec::centered_cube(cfg.half_width, cfg.cells);

    ShootConfig shoot;
    if (cfg.nonlinearity == "critical") shoot.a_fixed = std::pow(3.0 / cfg.kappa0, 0.25);
    double k0 = cfg.kappa0;
    RadialProfile base = solve_radial(f, [k0](double) { return k0; }, 3, shoot);
    GridField raw = radial_to_grid(base, lattice);
    GridField current = raw.with_tail(fit_envelope(raw, 1.0));

    int substeps = eps > 0.0
                       ? std::max(1, static_cast<int>(std::ceil(eps / cfg.continuation_max_step)))
                       : 1;
    SolveResult res{current, DecayEnvelope{}};
    for (int s = 1; s <= substeps; ++s) {
        KappaField ks = make_kappa(cfg.kappa_spec(eps * s / substeps));
        res = solve_perturbed(ks, f, current, cfg.solver_config());
        current = res.field;
    }
    KappaField kap = make_kappa(cfg.kappa_spec(eps));
    DeficitReport def = compute_deficit_report(res.field, kap, f);
    std::cout.precision(17);
    std::cout << "{\"eps\": " << eps << ", \"residual_max\": " << res.residual_max
              << ", \"residual_l2\": " << res.residual_l2 << ", \"iterations\": " << res.iterations
              << ", \"mass\": " << res.mass << ", \"energy\": " << res.energy
              << ", \"deficit\": " << def.to_json() << "}\n";
    if (!dump_field.empty()) write_fld(dump_field, res.field);
    return 0;
}

int cmd_deficit(const std::string& field_path, const std::string& config_path, double eps) {
    ExperimentConfig cfg = load_config(config_path);
    GridField u = read_fld(field_path);
    Nonlinearity f = cfg.make_nonlinearity();
    KappaField kap = make_kappa(cfg.kappa_spec(eps));
    DeficitReport def = compute_deficit_report(u, kap, f);
    std::cout << def.to_json() << "\n";
    return 0;
}

int cmd_scan(const std::string& field_path, const std::string& omega_s, double tolerance,
             const std::string& csv_out, double exclude_radius) {
    GridField u = read_fld(field_path);
    Vec3 omega = parse_vec(omega_s);
    double lambda0 = default_scan_range(u) + u.spacing();
    ScanConfig scan;
    scan.lambda_min = -lambda0;
    scan.lambda_max = lambda0;
    if (exclude_radius > 0.0) scan.exclude = Ball{{}, exclude_radius};
    if (tolerance <= 0.0) {
        double floor_val = measure_excess_floor(u, u.spec(), Vec3{});
        tolerance = std::max(3.0 * floor_val, 1e-14);
    }
    PlaneScanResult res = critical_plane(u, u.spec(), omega, tolerance, scan);
    std::cout << res.to_json() << "\n";
    if (!csv_out.empty()) {
        std::ofstream out(csv_out, std::ios::binary);
        out << res.to_csv();
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir) {
    ExperimentConfig cfg = load_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    StabilityReport report = run_stability_sweep(cfg);
    write_report_files(report, cfg.output_dir);
    std::cout << "wrote " << cfg.output_dir << "/report.csv, report.json, report.svg\n";
    std::cout << "thm 1.2 power shape: " << (report.verdict_thm2.pass ? "PASS" : "FAIL")
              << ", thm 1.1 log shape: " << (report.verdict_thm11.pass ? "PASS" : "FAIL") << "\n";
    return 0;
}

int cmd_report(const std::string& csv_path, const std::string& config_path,
               const std::string& out_path) {
    ExperimentConfig cfg = load_config(config_path);
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw Error("report: cannot open " + csv_path);
    std::stringstream ss;
    ss << in.rdbuf();
    StabilityReport report = refit_from_csv(ss.str(), cfg);
    std::string text = report.to_json();
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(out_path, std::ios::binary);
        out << text;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symlab: quantitative radial-symmetry laboratory"};
    app.require_subcommand(1);

    auto* bubble = app.add_subcommand("bubble", "emit an FLD1 bubble field");
    std::string b_out = "bubble.fld", b_center = "0,0,0";
    double b_lambda = 1.0, b_half = 8.0;
    int b_cells = 64;
    bool b_res = false;
    bubble->add_option("--out", b_out, "output FLD1 path");
    bubble->add_option("--lambda", b_lambda, "bubble scale");
    bubble->add_option("--center", b_center, "bubble center x,y,z");
    bubble->add_option("--half-width", b_half, "box half width");
    bubble->add_option("--cells", b_cells, "cells per axis");
    bubble->add_flag("--residual", b_res, "also print the discrete residual");

    auto* solve = app.add_subcommand("solve", "one perturbed solve");
    std::string s_config, s_dump;
    double s_eps = 0.1;
    solve->add_option("--config", s_config, "experiment config JSON");
    solve->add_option("--eps", s_eps, "perturbation amplitude");
    solve->add_option("--dump-field", s_dump, "write the solution as FLD1");

    auto* deficit = app.add_subcommand("deficit", "deficits of a field file");
    std::string d_field, d_config;
    double d_eps = 0.1;
    deficit->add_option("--field", d_field, "FLD1 input")->required();
    deficit->add_option("--config", d_config, "experiment config JSON");
    deficit->add_option("--eps", d_eps, "kappa amplitude");

    auto* scan = app.add_subcommand("scan", "moving-planes scan of a field file");
    std::string c_field, c_omega = "1,0,0", c_csv;
    double c_tol = 0.0, c_excl = 0.0;
    scan->add_option("--field", c_field, "FLD1 input")->required();
    scan->add_option("--omega", c_omega, "direction x,y,z");
    scan->add_option("--tolerance", c_tol, "excess tolerance (default: 3x measured floor)");
    scan->add_option("--csv", c_csv, "write the (lambda, excess) curve as CSV");
    scan->add_option("--exclude-radius", c_excl, "excise a ball about the origin (Kelvin fields)");

    auto* sweep = app.add_subcommand("sweep", "full stability experiment");
    std::string w_config, w_out;
    sweep->add_option("--config", w_config, "experiment config JSON");
    sweep->add_option("--out-dir", w_out, "output directory");

    auto* rep = app.add_subcommand("report", "re-fit an existing report.csv");
    std::string r_csv, r_config, r_out;
    rep->add_option("--csv", r_csv, "input CSV")->required();
    rep->add_option("--config", r_config, "experiment config JSON");
    rep->add_option("--out", r_out, "output JSON path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bubble->parsed()) return cmd_bubble(b_out, b_lambda, b_center, b_half, b_cells, b_res);
        if (solve->parsed()) return cmd_solve(s_config, s_eps, s_dump);
        if (deficit->parsed()) return cmd_deficit(d_field, d_config, d_eps);
        if (scan->parsed()) return cmd_scan(c_field, c_omega, c_tol, c_csv, c_excl);
        if (sweep->parsed()) return cmd_sweep(w_config, w_out);
        if (rep->parsed()) return cmd_report(r_csv, r_config, r_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
