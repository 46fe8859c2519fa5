#include "symlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "symlab/errors.hpp"
#include "symlab/fld_io.hpp"
#include "symlab/quadrature.hpp"
#include "symlab/util.hpp"

namespace symlab {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j = json::parse(text);
    ExperimentConfig c;
    auto get = [&](const char* key, auto& slot) {
        if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
    };
    get("n", c.n);
    get("nonlinearity", c.nonlinearity);
    get("power_q", c.power_q);
    get("f_C0", c.f_C0);
    get("kappa_kind", c.kappa_kind);
    get("kappa0", c.kappa0);
    if (j.contains("eps_ladder")) c.eps_ladder = j.at("eps_ladder").get<std::vector<double>>();
    if (j.contains("bump_center")) {
        auto v = j.at("bump_center").get<std::vector<double>>();
        if (v.size() != 3) throw Error("config: bump_center needs 3 entries");
        c.bump_center = {v[0], v[1], v[2]};
    }
    get("bump_width", c.bump_width);
    get("fourier_modes", c.fourier_modes);
    get("seed", c.seed);
    get("half_width", c.half_width);
    get("cells", c.cells);
    get("solver_tolerance", c.solver_tolerance);
    get("max_iterations", c.max_iterations);
    get("continuation_max_step", c.continuation_max_step);
    get("scan_tolerance_factor", c.scan_tolerance_factor);
    get("floor_safety", c.floor_safety);
    get("theta_thm2", c.theta_thm2);
    get("rotation_samples", c.rotation_samples);
    get("sphere_samples", c.sphere_samples);
    get("output_dir", c.output_dir);
    get("dump_fields", c.dump_fields);

    if (c.n != 3) throw Error("config: the grid harness is n = 3 only");
    for (std::size_t i = 1; i < c.eps_ladder.size(); ++i)
        if (c.eps_ladder[i] >= c.eps_ladder[i - 1])
            throw Error("config: eps_ladder must be strictly decreasing");
    for (double e : c.eps_ladder)
        if (e < 0.0) throw Error("config: eps_ladder entries must be non-negative");
    return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["n"] = n;
    j["nonlinearity"] = nonlinearity;
    j["power_q"] = power_q;
    j["f_C0"] = f_C0;
    j["kappa_kind"] = kappa_kind;
    j["kappa0"] = kappa0;
    j["eps_ladder"] = eps_ladder;
    j["bump_center"] = {bump_center.x, bump_center.y, bump_center.z};
    j["bump_width"] = bump_width;
    j["fourier_modes"] = fourier_modes;
    j["seed"] = seed;
    j["half_width"] = half_width;
    j["cells"] = cells;
    j["solver_tolerance"] = solver_tolerance;
    j["max_iterations"] = max_iterations;
    j["continuation_max_step"] = continuation_max_step;
    j["scan_tolerance_factor"] = scan_tolerance_factor;
    j["floor_safety"] = floor_safety;
    j["theta_thm2"] = theta_thm2;
    j["rotation_samples"] = rotation_samples;
    j["sphere_samples"] = sphere_samples;
    j["output_dir"] = output_dir;
    j["dump_fields"] = dump_fields;
    return j.dump(2);
}

KappaSpec ExperimentConfig::kappa_spec(double eps) const {
    if (kappa_kind == "constant") return KappaSpec::constant(kappa0, eps);
    if (kappa_kind == "radial_step") return KappaSpec::radial_step(kappa0, eps, bump_width);
    if (kappa_kind == "smooth_bump")
        return KappaSpec::smooth_bump(kappa0, eps, bump_center, bump_width);
    if (kappa_kind == "random_fourier")
        return KappaSpec::random_fourier(kappa0, eps, fourier_modes, seed);
    throw Error("config: unknown kappa_kind '" + kappa_kind + "'");
}

Nonlinearity ExperimentConfig::make_nonlinearity() const {
    if (nonlinearity == "critical") return Nonlinearity::critical(n);
    if (nonlinearity == "power") {
        Nonlinearity f = Nonlinearity::power(power_q, n, f_C0);
        certify(f);
        return f;
    }
    throw Error("config: unknown nonlinearity '" + nonlinearity + "'");
}

SolverConfig ExperimentConfig::solver_config() const {
    SolverConfig s;
    s.half_width = half_width;
    s.spacing = 2.0 * half_width / cells;
    s.tolerance = solver_tolerance;
    s.max_iterations = max_iterations;
    return s;
}

// ---------------------------------------------------------------------------
// Fits and verdicts
// ---------------------------------------------------------------------------

FitResult fit_exponent(const std::vector<double>& deltas, const std::vector<double>& asyms,
                       FitShape shape) {
    if (deltas.size() != asyms.size()) throw Error("fit_exponent: size mismatch");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0) || !(asyms[i] > 0.0)) continue;
        double x = shape == FitShape::Power ? std::log(deltas[i])
                                            : std::log(std::abs(std::log(deltas[i])));
        xs.push_back(x);
        ys.push_back(std::log(asyms[i]));
    }
    if (xs.size() < 4) throw InsufficientData("fit_exponent: need at least 4 usable rows");
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-30) throw InsufficientData("fit_exponent: degenerate abscissae");
    double slope = (n * sxy - sx * sy) / det;
    double intercept = (sy - slope * sx) / n;
    FitResult fit;
    fit.theta = shape == FitShape::Power ? slope : -slope;
    fit.amplitude = std::exp(intercept);
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (intercept + slope * xs[i]);
        ss += r * r;
    }
    fit.rms = std::sqrt(ss / n);
    fit.points = static_cast<int>(xs.size());
    fit.available = true;
    return fit;
}

Verdict verify_bounds(const std::vector<double>& deltas, const std::vector<double>& asyms,
                      const std::string& theorem, double theta, FitShape shape, double slack) {
    Verdict v;
    v.theorem = theorem;
    std::vector<double> lx, lr;
    double cmax = 0.0;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0) || !(asyms[i] > 0.0) || deltas[i] >= 1.0) continue;
        double s = shape == FitShape::Power ? std::pow(deltas[i], theta)
                                            : std::pow(std::abs(std::log(deltas[i])), -theta);
        double ratio = asyms[i] / s;
        cmax = std::max(cmax, ratio);
        lx.push_back(std::log(1.0 / deltas[i]));
        lr.push_back(std::log(ratio));
    }
    v.constant = cmax;
    if (lx.size() < 2) {
        v.pass = false;
        v.note = "not enough usable rows";
        return v;
    }
    double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += lr[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * lr[i];
    }
    double det = n * sxx - sx * sx;
    v.trend = std::abs(det) < 1e-30 ? 0.0 : (n * sxy - sx * sy) / det;
    v.pass = v.trend <= slack;
    if (!v.pass) v.note = "ratio grows as delta -> 0";
    return v;
}

// ---------------------------------------------------------------------------
// Floors and weak-form integrals
// ---------------------------------------------------------------------------

double measure_excess_floor(const Field& u, const GridSpec& lattice, const Vec3& center,
                            std::uint64_t seed) {
    std::vector<Vec3> dirs{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < 3; ++i) dirs.push_back(random_unit_vector(rng));
    double floor_val = 0.0;
    for (const Vec3& w : dirs) {
        HalfSpace plane(w, w.dot(center));
        floor_val = std::max(floor_val, reflect_excess(u, lattice, plane).sup);
    }
    return floor_val;
}

double weak_form_rhs(const GridField& u, const KappaField& kappa, const Nonlinearity& f) {
    auto node = [&](const Vec3& x, double uu) { return kappa(x) * f(uu) * uu; };
    double kfar = kappa.far_value;
    auto tail = [&, kfar](double um) { return kfar * f(um) * um; };
    return integral(u, node, tail);
}

// ---------------------------------------------------------------------------
// Sweep
// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string sanitize(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s;
}

struct CaseOutputs {
    StabilityRow row;
    GridField* field = nullptr;  // owned elsewhere
};

}  // namespace

StabilityReport run_stability_sweep(const ExperimentConfig& config) {
    StabilityReport report;
    report.theory.theta_thm11 = (config.n - 2.0) / 12.0;
    report.theory.theta_thm2 = config.theta_thm2;
    report.theory.theta_prime = 0.5 * config.theta_thm2;

    report.sobolev_S = sobolev_constant(3);
    const double S = report.sobolev_S;

    Nonlinearity f = config.make_nonlinearity();
    SolverConfig solver_cfg = config.solver_config();
    GridSpec lattice = GridSpec::centered_cube(config.half_width, config.cells);
    const double h = lattice.spacing;

    // Radial base solution for kappa == kappa0.
    ShootConfig shoot;
    shoot.r_max = 1e3;
    if (config.nonlinearity == "critical") {
        // Delta u + kappa0 u^p = 0 is solved by kappa0^{-1/(p-1)} U[0,1].
        shoot.a_fixed = std::pow(3.0 / config.kappa0, 0.25);
    }
    double k0v = config.kappa0;
    RadialProfile base_profile =
        solve_radial(f, [k0v](double) { return k0v; }, config.n, shoot);
    GridField u0_raw = radial_to_grid(base_profile, lattice);
    GridField u0 = u0_raw.with_tail(fit_envelope(u0_raw, config.n - 2.0));

    // Discretization floors, measured on the sampled radial reference.
    report.excess_floor = measure_excess_floor(u0, lattice, Vec3{}, config.seed);
    const double lambda0 = default_scan_range(u0) + h;
    ScanConfig scan;
    scan.lambda_min = -lambda0;
    scan.lambda_max = lambda0;

    const double floor_tol = std::max(config.floor_safety * report.excess_floor, 1e-14);
    {
        CenterResult c0 = approximate_center(u0, lattice, floor_tol, scan);
        MetricsConfig mc;
        mc.rotation_samples = config.rotation_samples;
        mc.sphere_samples = config.sphere_samples;
        mc.lambda0 = lambda0;
        SymmetryReport m0 = asymmetry_metrics(u0, c0.center, mc);
        report.linf_floor = m0.linf_asymmetry;
        report.d12_floor = m0.d12_asymmetry;
        report.rad_deriv_floor = m0.radial_derivative_max;
    }
    {
        // Measured pointwise gradient error on the closed-form reference.
        RadialField exact(base_profile, {});
        double worst = 0.0;
        const int nx = lattice.shape[0];
        for (int i = 0; i < nx; i += 2)
            for (int j = 0; j < nx; j += 2)
                for (int k = 0; k < nx; k += 2) {
                    Vec3 x = lattice.node(i, j, k);
                    double r = x.norm();
                    if (r < 2.0 * h) continue;
                    Vec3 g = gradient_at(u0, i, j, k);
                    double exact_dr = base_profile.eval_deriv(r);
                    Vec3 ge = x * (exact_dr / r);
                    worst = std::max(worst, (g - ge).norm());
                }
        report.gradient_error_est = worst;
    }

    auto run_case = [&](double eps, const GridField& warm_start) -> std::pair<StabilityRow, GridField> {
        StabilityRow row;
        row.eps = eps;
        KappaField kap = make_kappa(config.kappa_spec(eps));
        int substeps =
            eps > 0.0 ? std::max(1, static_cast<int>(std::ceil(eps / config.continuation_max_step)))
                      : 1;
        GridField current = warm_start;
        SolveResult res{current, DecayEnvelope{}};
        for (int s = 1; s <= substeps; ++s) {
            KappaField ks = make_kappa(config.kappa_spec(eps * s / substeps));
            SolverConfig sc = solver_cfg;
            sc.continuation_steps = substeps;
            res = solve_perturbed(ks, f, current, sc);
            current = res.field;
            row.iterations += res.iterations;
        }
        row.mass = res.mass;
        row.energy = res.energy;
        row.weak_rhs = weak_form_rhs(res.field, kap, f);
        row.identity_rel_err = std::abs(res.energy - row.weak_rhs) / std::max(res.energy, 1e-300);

        DeficitReport def = compute_deficit_report(res.field, kap, f);
        row.delta_f = def.delta_f;
        row.osc = def.osc;
        row.kappa0 = def.kappa0;
        row.kappa1 = def.kappa1;
        row.two_resolution_error = def.two_resolution_error;

        double tol = std::max(config.scan_tolerance_factor / (S * S) * def.delta_f, floor_tol);
        row.tolerance_used = tol;
        CenterResult center = approximate_center(res.field, lattice, tol, scan);
        row.lambda_star = center.center;

        MetricsConfig mc;
        mc.rotation_samples = config.rotation_samples;
        mc.sphere_samples = config.sphere_samples;
        mc.lambda0 = lambda0;
        SymmetryReport met = asymmetry_metrics(res.field, center.center, mc);
        row.linf_asym = met.linf_asymmetry;
        row.d12_asym = met.d12_asymmetry;
        row.rad_deriv_max = met.radial_derivative_max;
        return {row, current};
    };

    // Baseline: the eps = 0 solve through the full metric stack.
    auto [base_row, base_field] = run_case(0.0, u0);
    report.baseline = base_row;

    // Ladder cases, warm-started from the baseline solve.
    report.rows.resize(config.eps_ladder.size());
    std::vector<std::optional<GridField>> fields(config.eps_ladder.size());
    for (std::size_t i = 0; i < config.eps_ladder.size(); ++i) {
        double eps = config.eps_ladder[i];
        try {
            auto [row, fld] = run_case(eps, base_field);
            report.rows[i] = row;
            fields[i] = std::move(fld);
        } catch (const Error& e) {
            StabilityRow row;
            row.eps = eps;
            row.status = std::string("error: ") + sanitize(e.what());
            report.rows[i] = row;
        }
    }
    bool all_failed = true;
    for (const auto& r : report.rows)
        if (r.status == "ok") all_failed = false;
    if (all_failed && !report.rows.empty())
        throw Error("run_stability_sweep: every ladder case failed");

    // Mass certificate bound at the strongest perturbation.
    double sup_kappa = config.kappa0;
    for (double e : config.eps_ladder)
        sup_kappa = std::max(sup_kappa, make_kappa(config.kappa_spec(e)).sup_value);
    report.mass_bound = mass_lower_bound(std::max(f.f0, 1e-300), sup_kappa, S, config.n);

    // Fits on rows clear of the discretization floor.
    std::vector<double> deltas, asyms;
    int degenerate = 0;
    for (auto& row : report.rows) {
        if (row.status != "ok") continue;
        if (row.delta_f <= 1e-12) {
            ++degenerate;
            continue;
        }
        if (row.linf_asym <= config.floor_safety * report.baseline.linf_asym) continue;
        row.used_in_fit = true;
        deltas.push_back(row.delta_f);
        asyms.push_back(row.linf_asym);
    }
    if (deltas.size() >= 4) {
        report.fit_power = fit_exponent(deltas, asyms, FitShape::Power);
        report.fit_log = fit_exponent(deltas, asyms, FitShape::LogInverse);
        report.verdict_thm2 = verify_bounds(deltas, asyms, "thm_1_2_power",
                                            report.theory.theta_thm2, FitShape::Power);
        if (report.fit_power.available && report.fit_power.theta >= report.theory.theta_thm2)
            report.verdict_thm2.note = "sharper than guaranteed";
        report.verdict_thm11 = verify_bounds(deltas, asyms, "thm_1_1_log",
                                             report.theory.theta_thm11, FitShape::LogInverse);
        if (report.fit_log.available && report.fit_log.theta >= report.theory.theta_thm11 &&
            report.verdict_thm11.pass)
            report.verdict_thm11.note = "sharper than guaranteed";
    } else {
        report.fits_skipped_reason =
            degenerate > 0 ? "degenerate deficits" : "asymmetry at discretization floor";
        report.fit_power.reason = report.fits_skipped_reason;
        report.fit_log.reason = report.fits_skipped_reason;
        report.verdict_thm11.theorem = "thm_1_1_log";
        report.verdict_thm2.theorem = "thm_1_2_power";
        report.verdict_thm11.note = report.fits_skipped_reason;
        report.verdict_thm2.note = report.fits_skipped_reason;
    }

    if (config.dump_fields) {
        std::filesystem::create_directories(config.output_dir);
        for (std::size_t i = 0; i < fields.size(); ++i)
            if (fields[i])
                write_fld(config.output_dir + "/case_" + std::to_string(i) + ".fld", *fields[i]);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string StabilityReport::to_csv() const {
    std::ostringstream os;
    os << "eps,delta_f,osc,kappa0,kappa1,linf_asym,d12_asym,rad_deriv_max,lam1,lam2,lam3,status\n";
    for (const auto& r : rows) {
        os << fmt(r.eps) << "," << fmt(r.delta_f) << "," << fmt(r.osc) << "," << fmt(r.kappa0)
           << "," << fmt(r.kappa1) << "," << fmt(r.linf_asym) << "," << fmt(r.d12_asym) << ","
           << fmt(r.rad_deriv_max) << "," << fmt(r.lambda_star.x) << "," << fmt(r.lambda_star.y)
           << "," << fmt(r.lambda_star.z) << "," << r.status << "\n";
    }
    return os.str();
}

namespace {

json row_json(const StabilityRow& r) {
    json j;
    j["eps"] = r.eps;
    j["delta_f"] = r.delta_f;
    j["osc"] = r.osc;
    j["kappa0"] = r.kappa0;
    j["kappa1"] = r.kappa1;
    j["linf_asym"] = r.linf_asym;
    j["d12_asym"] = r.d12_asym;
    j["rad_deriv_max"] = r.rad_deriv_max;
    j["lambda_star"] = {r.lambda_star.x, r.lambda_star.y, r.lambda_star.z};
    j["status"] = r.status;
    j["mass"] = r.mass;
    j["energy"] = r.energy;
    j["weak_rhs"] = r.weak_rhs;
    j["identity_rel_err"] = r.identity_rel_err;
    j["tolerance_used"] = r.tolerance_used;
    j["two_resolution_error"] = r.two_resolution_error;
    j["iterations"] = r.iterations;
    j["used_in_fit"] = r.used_in_fit;
    return j;
}

json fit_json(const FitResult& f) {
    json j;
    j["available"] = f.available;
    if (f.available) {
        j["theta"] = f.theta;
        j["amplitude"] = f.amplitude;
        j["rms"] = f.rms;
        j["points"] = f.points;
    } else {
        j["reason"] = f.reason;
    }
    return j;
}

json verdict_json(const Verdict& v) {
    json j;
    j["theorem"] = v.theorem;
    j["pass"] = v.pass;
    j["constant"] = v.constant;
    j["trend"] = v.trend;
    j["note"] = v.note;
    return j;
}

}  // namespace

std::string StabilityReport::to_json() const {
    json j;
    j["rows"] = json::array();
    for (const auto& r : rows) j["rows"].push_back(row_json(r));
    j["baseline"] = row_json(baseline);
    j["fits"]["power"] = fit_json(fit_power);
    j["fits"]["log_inverse"] = fit_json(fit_log);
    j["verdicts"]["thm_1_1"] = verdict_json(verdict_thm11);
    j["verdicts"]["thm_1_2"] = verdict_json(verdict_thm2);
    j["theory"]["theta_thm11"] = theory.theta_thm11;
    j["theory"]["theta_thm2"] = theory.theta_thm2;
    j["theory"]["theta_prime"] = theory.theta_prime;
    j["sobolev_S"] = sobolev_S;
    j["mass_bound"] = mass_bound;
    j["floors"]["excess"] = excess_floor;
    j["floors"]["linf"] = linf_floor;
    j["floors"]["d12"] = d12_floor;
    j["floors"]["rad_deriv"] = rad_deriv_floor;
    j["floors"]["gradient_error"] = gradient_error_est;
    if (!fits_skipped_reason.empty()) j["fits_skipped_reason"] = fits_skipped_reason;
    return j.dump(2);
}

StabilityReport refit_from_csv(const std::string& csv_text, const ExperimentConfig& config) {
    StabilityReport report;
    report.theory.theta_thm11 = (config.n - 2.0) / 12.0;
    report.theory.theta_thm2 = config.theta_thm2;
    report.theory.theta_prime = 0.5 * config.theta_thm2;

    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line)) throw Error("refit_from_csv: empty input");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() < 12) throw Error("refit_from_csv: malformed row '" + line + "'");
        StabilityRow r;
        r.eps = std::stod(cells[0]);
        r.delta_f = std::stod(cells[1]);
        r.osc = std::stod(cells[2]);
        r.kappa0 = std::stod(cells[3]);
        r.kappa1 = std::stod(cells[4]);
        r.linf_asym = std::stod(cells[5]);
        r.d12_asym = std::stod(cells[6]);
        r.rad_deriv_max = std::stod(cells[7]);
        r.lambda_star = {std::stod(cells[8]), std::stod(cells[9]), std::stod(cells[10])};
        r.status = cells[11];
        report.rows.push_back(std::move(r));
    }
    std::vector<double> deltas, asyms;
    for (auto& row : report.rows) {
        if (row.status != "ok" || row.delta_f <= 1e-12 || row.linf_asym <= 0.0) continue;
        row.used_in_fit = true;
        deltas.push_back(row.delta_f);
        asyms.push_back(row.linf_asym);
    }
    if (deltas.size() >= 4) {
        report.fit_power = fit_exponent(deltas, asyms, FitShape::Power);
        report.fit_log = fit_exponent(deltas, asyms, FitShape::LogInverse);
        report.verdict_thm2 = verify_bounds(deltas, asyms, "thm_1_2_power",
                                            report.theory.theta_thm2, FitShape::Power);
        report.verdict_thm11 = verify_bounds(deltas, asyms, "thm_1_1_log",
                                             report.theory.theta_thm11, FitShape::LogInverse);
    } else {
        report.fits_skipped_reason = "not enough usable rows";
        report.fit_power.reason = report.fits_skipped_reason;
        report.fit_log.reason = report.fits_skipped_reason;
    }
    return report;
}

std::string render_svg(const StabilityReport& report) {
    // Log-log scatter of (delta_f, linf_asym); bare-bones on purpose.
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : report.rows)
        if (r.status == "ok" && r.delta_f > 0 && r.linf_asym > 0)
            pts.emplace_back(std::log10(r.delta_f), std::log10(r.linf_asym));
    double x0 = -3, x1 = 0, y0 = -4, y1 = 0;
    if (!pts.empty()) {
        x0 = x1 = pts[0].first;
        y0 = y1 = pts[0].second;
        for (auto& p : pts) {
            x0 = std::min(x0, p.first);
            x1 = std::max(x1, p.first);
            y0 = std::min(y0, p.second);
            y1 = std::max(y1, p.second);
        }
        x0 -= 0.2; x1 += 0.2; y0 -= 0.2; y1 += 0.2;
    }
    const double W = 480, H = 360, m = 40;
    auto X = [&](double x) { return m + (x - x0) / (x1 - x0) * (W - 2 * m); };
    auto Y = [&](double y) { return H - m - (y - y0) / (y1 - y0) * (H - 2 * m); };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << m << "\" y1=\"" << H - m << "\" x2=\"" << W - m << "\" y2=\"" << H - m
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << H - m
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 8
       << "\" font-size=\"12\" text-anchor=\"middle\">log10 delta_f</text>\n";
    os << "<text x=\"12\" y=\"" << H / 2
       << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 12 " << H / 2
       << ")\">log10 linf_asym</text>\n";
    for (auto& p : pts)
        os << "<circle cx=\"" << X(p.first) << "\" cy=\"" << Y(p.second)
           << "\" r=\"4\" fill=\"steelblue\"/>\n";
    os << "</svg>\n";
    return os.str();
}

void write_report_files(const StabilityReport& report, const std::string& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream csv(dir + "/report.csv", std::ios::binary);
        csv << report.to_csv();
    }
    {
        std::ofstream js(dir + "/report.json", std::ios::binary);
        js << report.to_json();
    }
    {
        std::ofstream svg(dir + "/report.svg", std::ios::binary);
        svg << render_svg(report);
    }
}

}  // namespace symlab
