#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symlab/deficits.hpp"
#include "symlab/models.hpp"
#include "symlab/moving_planes.hpp"
#include "symlab/solver.hpp"

namespace symlab {

struct ExperimentConfig {
    int n = 3;
    std::string nonlinearity = "critical";  // critical | power
    double power_q = 5.0;
    double f_C0 = 4.0;

    std::string kappa_kind = "smooth_bump";  // constant|radial_step|smooth_bump|random_fourier
    double kappa0 = 1.0;
    std::vector<double> eps_ladder{0.2, 0.1, 0.05, 0.025, 0.0125};
    Vec3 bump_center{1.5, 0.0, 0.0};
    double bump_width = 1.0;
    int fourier_modes = 8;
    std::uint64_t seed = 1234;

    double half_width = 5.04;
    int cells = 63;  // nodes per axis = cells + 1
    double solver_tolerance = 1e-8;
    int max_iterations = 40;
    double continuation_max_step = 0.025;

    double scan_tolerance_factor = 4.0;  // times S^-2 delta_f
    double floor_safety = 3.0;           // times the measured reflect floor
    double theta_thm2 = 0.1;             // reference exponent for the power shape
    int rotation_samples = 16;
    int sphere_samples = 512;

    std::string output_dir = ".";
    bool dump_fields = false;

    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig from_json_file(const std::string& path);
    std::string to_json() const;

    KappaSpec kappa_spec(double eps) const;
    Nonlinearity make_nonlinearity() const;
    SolverConfig solver_config() const;
};

struct StabilityRow {
    double eps = 0.0;
    double delta_f = 0.0;
    double osc = 0.0;
    double kappa0 = 0.0;
    double kappa1 = 0.0;
    double linf_asym = 0.0;
    double d12_asym = 0.0;
    double rad_deriv_max = 0.0;
    Vec3 lambda_star{};
    std::string status = "ok";

    // Diagnostics carried in report.json (not in the CSV contract).
    double mass = 0.0;
    double energy = 0.0;
    double weak_rhs = 0.0;          // integral kappa f(u) u
    double identity_rel_err = 0.0;  // |energy - weak_rhs| / energy
    double tolerance_used = 0.0;
    double two_resolution_error = 0.0;
    int iterations = 0;
    bool used_in_fit = false;
};

struct FitResult {
    double theta = 0.0;
    double amplitude = 0.0;  // A in asym ~ A * shape(delta)
    double rms = 0.0;
    int points = 0;
    bool available = false;
    std::string reason;  // when unavailable
};

enum class FitShape { Power, LogInverse };

// OLS of log(asym) against log(delta) or log(|log delta|). Throws
// InsufficientData below 4 rows.
FitResult fit_exponent(const std::vector<double>& deltas, const std::vector<double>& asyms,
                       FitShape shape);

struct Verdict {
    std::string theorem;
    bool pass = false;
    double constant = 0.0;  // max of asym / shape(delta)
    double trend = 0.0;     // slope of log ratio against log(1/delta)
    std::string note;
};

struct TheoryExponents {
    double theta_thm11 = 0.0;  // (n-2)/12
    double theta_thm2 = 0.1;   // non-explicit in the source result; configured
    double theta_prime = 0.05; // theta_thm2 / 2 (C^2 shape, reference only)
};

// PASS when the bound shape asym <= C * shape(delta) holds with a ratio that
// does not grow as delta -> 0 (trend <= slack).
Verdict verify_bounds(const std::vector<double>& deltas, const std::vector<double>& asyms,
                      const std::string& theorem, double theta, FitShape shape,
                      double slack = 0.05);

struct StabilityReport {
    std::vector<StabilityRow> rows;  // sorted by eps descending (ladder order)
    FitResult fit_power;
    FitResult fit_log;
    Verdict verdict_thm11;
    Verdict verdict_thm2;
    TheoryExponents theory;
    double sobolev_S = 0.0;
    double mass_bound = 0.0;          // M(f0, sup kappa at eps_max, S)
    double excess_floor = 0.0;        // measured reflect floor on the radial base
    double linf_floor = 0.0;          // full-stack floor on the sampled closed form
    double d12_floor = 0.0;
    double rad_deriv_floor = 0.0;
    double gradient_error_est = 0.0;  // measured |grad_h - grad| on the closed form
    StabilityRow baseline;            // eps = 0 radial solve through the stack
    std::string fits_skipped_reason;

    std::string to_csv() const;
    std::string to_json() const;
};

StabilityReport run_stability_sweep(const ExperimentConfig& config);

// Re-fit an existing CSV (the `report` subcommand).
StabilityReport refit_from_csv(const std::string& csv_text, const ExperimentConfig& config);

// Minimal log-log scatter of (delta_f, linf_asym).
std::string render_svg(const StabilityReport& report);

void write_report_files(const StabilityReport& report, const std::string& dir);

// Max reflected excess over planes through `center` (3 axes plus 3 seeded
// random directions); the discretization floor for Lambda-membership tests.
double measure_excess_floor(const Field& u, const GridSpec& lattice, const Vec3& center,
                            std::uint64_t seed = 7);

// integral kappa f(u) u with the envelope tail; the right-hand side of the
// weak-solution identity.
double weak_form_rhs(const GridField& u, const KappaField& kappa, const Nonlinearity& f);

}  // namespace symlab
