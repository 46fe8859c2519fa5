#include "symlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "symlab/errors.hpp"
#include "symlab/quadrature.hpp"
#include "symlab/util.hpp"

namespace symlab {

// ---------------------------------------------------------------------------
// Radial shooting
// ---------------------------------------------------------------------------

namespace {

struct OdeState {
    double u, du;
};

enum class Fate { Decay, Cross, Upturn };

struct Trajectory {
    Fate fate = Fate::Decay;
    double event_r = 0.0;
    std::vector<double> r, u, du;
};

// Dormand-Prince 5(4) with PI-free step control. The RHS is smooth away from
// r = 0; integration starts from the series expansion at a small r0.
Trajectory integrate_radial(const Nonlinearity& f, const std::function<double(double)>& kappa_r,
                            int n, double a, double r_max, double rel_tol, double abs_tol) {
    auto rhs = [&](double r, const OdeState& y) -> OdeState {
        double uu = std::max(y.u, 0.0);
        return {y.du, -(n - 1.0) / r * y.du - kappa_r(r) * f(uu)};
    };

    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    Trajectory out;
    double r0 = 1e-6;
    double k0 = kappa_r(0.0);
    OdeState y{a - k0 * f(a) * r0 * r0 / (2.0 * n), -k0 * f(a) * r0 / n};
    double r = r0;
    double h = 1e-4;
    out.r.push_back(r);
    out.u.push_back(y.u);
    out.du.push_back(y.du);

    OdeState k1 = rhs(r, y);
    int max_steps = 2000000;
    for (int step = 0; step < max_steps && r < r_max; ++step) {
        h = std::min(h, r_max - r);
        OdeState y2{y.u + h * a21 * k1.u, y.du + h * a21 * k1.du};
        OdeState k2 = rhs(r + c2 * h, y2);
        OdeState y3{y.u + h * (a31 * k1.u + a32 * k2.u), y.du + h * (a31 * k1.du + a32 * k2.du)};
        OdeState k3 = rhs(r + c3 * h, y3);
        OdeState y4{y.u + h * (a41 * k1.u + a42 * k2.u + a43 * k3.u),
                    y.du + h * (a41 * k1.du + a42 * k2.du + a43 * k3.du)};
        OdeState k4 = rhs(r + c4 * h, y4);
        OdeState y5{y.u + h * (a51 * k1.u + a52 * k2.u + a53 * k3.u + a54 * k4.u),
                    y.du + h * (a51 * k1.du + a52 * k2.du + a53 * k3.du + a54 * k4.du)};
        OdeState k5 = rhs(r + c5 * h, y5);
        OdeState y6{y.u + h * (a61 * k1.u + a62 * k2.u + a63 * k3.u + a64 * k4.u + a65 * k5.u),
                    y.du + h * (a61 * k1.du + a62 * k2.du + a63 * k3.du + a64 * k4.du +
                                a65 * k5.du)};
        OdeState k6 = rhs(r + h, y6);
        OdeState y7{y.u + h * (b1 * k1.u + b3 * k3.u + b4 * k4.u + b5 * k5.u + b6 * k6.u),
                    y.du + h * (b1 * k1.du + b3 * k3.du + b4 * k4.du + b5 * k5.du + b6 * k6.du)};
        OdeState k7 = rhs(r + h, y7);

        double err_u = h * (e1 * k1.u + e3 * k3.u + e4 * k4.u + e5 * k5.u + e6 * k6.u + e7 * k7.u);
        double err_du =
            h * (e1 * k1.du + e3 * k3.du + e4 * k4.du + e5 * k5.du + e6 * k6.du + e7 * k7.du);
        double sc_u = abs_tol + rel_tol * std::max(std::abs(y.u), std::abs(y7.u));
        double sc_du = abs_tol + rel_tol * std::max(std::abs(y.du), std::abs(y7.du));
        double err = std::sqrt(0.5 * ((err_u / sc_u) * (err_u / sc_u) +
                                      (err_du / sc_du) * (err_du / sc_du)));
        if (err <= 1.0) {
            r += h;
            y = y7;
            k1 = k7;  // FSAL
            out.r.push_back(r);
            out.u.push_back(y.u);
            out.du.push_back(y.du);
            if (y.u <= 0.0) {
                out.fate = Fate::Cross;
                out.event_r = r;
                return out;
            }
            if (y.du > 0.0 && y.u > 0.02 * a) {
                out.fate = Fate::Upturn;
                out.event_r = r;
                return out;
            }
            if (y.u < 1e-13 * a) break;  // numerically zero, treat as decayed
        }
        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::clamp(fac, 0.2, 5.0);
        h = std::max(h, 1e-12 * std::max(r, 1.0));
    }
    out.fate = Fate::Decay;
    return out;
}

RadialProfile profile_from(const Trajectory& t, int n, double tail_fit_decades) {
    RadialProfile prof;
    prof.dim = n;
    std::size_t m = t.r.size();
    // Drop any trailing non-positive samples (crossing tail).
    while (m > 2 && t.u[m - 1] <= 0.0) --m;
    prof.radii.assign(t.r.begin(), t.r.begin() + m);
    prof.values.assign(t.u.begin(), t.u.begin() + m);
    prof.derivs.assign(t.du.begin(), t.du.begin() + m);
    prof.fit_tail(tail_fit_decades);
    return prof;
}

}  // namespace

RadialProfile solve_radial(const Nonlinearity& f, const std::function<double(double)>& kappa_r,
                           int n, const ShootConfig& config) {
    if (config.a_fixed) {
        Trajectory t = integrate_radial(f, kappa_r, n, *config.a_fixed, config.r_max,
                                        config.rel_tol, config.abs_tol);
        if (t.fate != Fate::Decay)
            throw NoGroundState("solve_radial: fixed amplitude does not decay (event at r = " +
                                std::to_string(t.event_r) + ")");
        return profile_from(t, n, config.tail_fit_decades);
    }

    // Scan for a sign bracket between crossing and upturning behavior.
    std::vector<double> amps(config.scan_points);
    std::vector<Fate> fates(config.scan_points);
    int first_decay = -1;
    for (int i = 0; i < config.scan_points; ++i) {
        double t = static_cast<double>(i) / (config.scan_points - 1);
        amps[i] = config.a_min * std::pow(config.a_max / config.a_min, t);
        Trajectory traj =
            integrate_radial(f, kappa_r, n, amps[i], config.r_max, config.rel_tol, config.abs_tol);
        fates[i] = traj.fate;
        if (traj.fate == Fate::Decay && first_decay < 0) first_decay = i;
    }
    int lo = -1;
    for (int i = 0; i + 1 < config.scan_points; ++i) {
        bool cu = fates[i] == Fate::Cross && fates[i + 1] == Fate::Upturn;
        bool uc = fates[i] == Fate::Upturn && fates[i + 1] == Fate::Cross;
        if (cu || uc) {
            lo = i;
            break;
        }
    }
    if (lo >= 0) {
        double a_lo = amps[lo], a_hi = amps[lo + 1];
        Fate f_lo = fates[lo];
        Trajectory best;
        for (int it = 0; it < 80 && (a_hi - a_lo) > 1e-13 * a_hi; ++it) {
            double mid = 0.5 * (a_lo + a_hi);
            Trajectory t =
                integrate_radial(f, kappa_r, n, mid, config.r_max, config.rel_tol, config.abs_tol);
            if (t.fate == Fate::Decay) {
                best = std::move(t);
                break;
            }
            if (t.fate == f_lo)
                a_lo = mid;
            else
                a_hi = mid;
        }
        if (best.r.empty())
            best = integrate_radial(f, kappa_r, n, 0.5 * (a_lo + a_hi), config.r_max,
                                    config.rel_tol, config.abs_tol);
        // The bisection limit decays until the working precision runs out;
        // keep the decaying prefix.
        return profile_from(best, n, config.tail_fit_decades);
    }
    if (first_decay >= 0) {
        Trajectory t = integrate_radial(f, kappa_r, n, amps[first_decay], config.r_max,
                                        config.rel_tol, config.abs_tol);
        return profile_from(t, n, config.tail_fit_decades);
    }
    throw NoGroundState("solve_radial: no decaying trajectory in the scanned amplitude range");
}

// ---------------------------------------------------------------------------
// Grid Newton solver
// ---------------------------------------------------------------------------

namespace {

struct GridProblem {
    const GridSpec& spec;
    const KappaField& kappa;
    const Nonlinearity& f;
    std::vector<double> kap;       // kappa at every node
    std::vector<double> boundary;  // Dirichlet data (full lattice, interior unused)
    int nx, ny, nz;
    double h2;

    GridProblem(const GridSpec& s, const KappaField& k, const Nonlinearity& fn)
        : spec(s), kappa(k), f(fn), nx(s.shape[0]), ny(s.shape[1]), nz(s.shape[2]),
          h2(s.spacing * s.spacing) {
        kap.resize(s.size());
        const int nny = ny, nnz = nz;
        parallel_for(s.size(), [&](std::size_t b, std::size_t e) {
            for (std::size_t idx = b; idx < e; ++idx) {
                int i = static_cast<int>(idx / (static_cast<std::size_t>(nny) * nnz));
                int rem = static_cast<int>(idx % (static_cast<std::size_t>(nny) * nnz));
                kap[idx] = kappa(s.node(i, rem / nnz, rem % nnz));
            }
        });
    }

    bool is_interior(int i, int j, int k) const {
        return i > 0 && i < nx - 1 && j > 0 && j < ny - 1 && k > 0 && k < nz - 1;
    }

    // F(u) = Delta_h u + kappa f(u) on interior nodes; u carries boundary data.
    void apply_residual(const std::vector<double>& u, std::vector<double>& F) const {
        F.assign(u.size(), 0.0);
        std::size_t plane = static_cast<std::size_t>(ny) * nz;
        parallel_for(u.size(), [&](std::size_t b, std::size_t e) {
            for (std::size_t idx = b; idx < e; ++idx) {
                int i = static_cast<int>(idx / plane);
                int rem = static_cast<int>(idx % plane);
                int j = rem / nz, k = rem % nz;
                if (!is_interior(i, j, k)) continue;
                double lap = (u[idx - plane] + u[idx + plane] + u[idx - nz] + u[idx + nz] +
                              u[idx - 1] + u[idx + 1] - 6.0 * u[idx]) /
                             h2;
                F[idx] = lap + kap[idx] * f(u[idx]);
            }
        });
    }

    // (J v) = Delta_h v + kappa f'(u) v with v = 0 on the boundary.
    void apply_jacobian(const std::vector<double>& diag, const std::vector<double>& v,
                        std::vector<double>& out) const {
        out.assign(v.size(), 0.0);
        std::size_t plane = static_cast<std::size_t>(ny) * nz;
        parallel_for(v.size(), [&](std::size_t b, std::size_t e) {
            for (std::size_t idx = b; idx < e; ++idx) {
                int i = static_cast<int>(idx / plane);
                int rem = static_cast<int>(idx % plane);
                int j = rem / nz, k = rem % nz;
                if (!is_interior(i, j, k)) continue;
                double nb = v[idx - plane] + v[idx + plane] + v[idx - nz] + v[idx + nz] +
                            v[idx - 1] + v[idx + 1];
                out[idx] = nb / h2 + diag[idx] * v[idx];
            }
        });
    }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return parallel_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
        KahanSum s;
        for (std::size_t i = lo; i < hi; ++i) s.add(a[i] * b[i]);
        return s.value();
    });
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const std::vector<double>& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

// Preconditioned MINRES (Paige-Saunders). The Jacobian is symmetric but
// indefinite near the critical kernel, which rules out plain CG.
int minres(const GridProblem& prob, const std::vector<double>& diag,
           const std::vector<double>& rhs, std::vector<double>& x, double rel_tol, int max_iter) {
    std::size_t N = rhs.size();
    x.assign(N, 0.0);
    std::vector<double> precond(N);
    for (std::size_t i = 0; i < N; ++i)
        precond[i] = diag[i] != 0.0 ? 1.0 / std::abs(diag[i]) : 1.0;
    auto msolve = [&](const std::vector<double>& r, std::vector<double>& z) {
        z.resize(N);
        for (std::size_t i = 0; i < N; ++i) z[i] = precond[i] * r[i];
    };

    std::vector<double> r1 = rhs, r2 = rhs, y, v(N), w(N, 0.0), w1(N, 0.0), w2(N, 0.0), tmp;
    msolve(r1, y);
    double beta1 = dot(r1, y);
    if (beta1 <= 0.0) return 0;
    beta1 = std::sqrt(beta1);

    double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
    double cs = -1.0, sn = 0.0, oldeps = 0.0;
    int iters = 0;
    for (int itn = 1; itn <= max_iter; ++itn) {
        iters = itn;
        double s = 1.0 / beta;
        for (std::size_t i = 0; i < N; ++i) v[i] = s * y[i];
        prob.apply_jacobian(diag, v, tmp);
        if (itn >= 2) {
            double c = beta / oldb;
            for (std::size_t i = 0; i < N; ++i) tmp[i] -= c * r1[i];
        }
        double alfa = dot(v, tmp);
        double c2 = alfa / beta;
        for (std::size_t i = 0; i < N; ++i) tmp[i] -= c2 * r2[i];
        r1 = r2;
        r2 = tmp;
        msolve(r2, y);
        oldb = beta;
        beta = dot(r2, y);
        if (beta < 0.0) break;
        beta = std::sqrt(beta);

        oldeps = epsln;
        double delta = cs * dbar + sn * alfa;
        double gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        double gamma = std::sqrt(gbar * gbar + beta * beta);
        gamma = std::max(gamma, 1e-300);
        cs = gbar / gamma;
        sn = beta / gamma;
        double phi = cs * phibar;
        phibar = sn * phibar;

        double denom = 1.0 / gamma;
        w1 = w2;
        w2 = w;
        for (std::size_t i = 0; i < N; ++i)
            w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) * denom;
        for (std::size_t i = 0; i < N; ++i) x[i] += phi * w[i];

        if (phibar <= rel_tol * beta1) break;
    }
    return iters;
}

}  // namespace

SolveResult solve_perturbed(const KappaField& kappa, const Nonlinearity& f,
                            const GridField& initial, const SolverConfig& config) {
    const GridSpec& spec = initial.spec();
    const int n = 3;
    GridProblem prob(spec, kappa, f);

    // Decay-matched Dirichlet data from the initial guess's fitted envelope.
    DecayEnvelope bc_env = fit_envelope(initial, n - 2.0);
    std::vector<double> u = initial.values();
    {
        const int nx = prob.nx, ny = prob.ny, nz = prob.nz;
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j)
                for (int k = 0; k < nz; ++k) {
                    if (prob.is_interior(i, j, k)) continue;
                    std::size_t idx = spec.index(i, j, k);
                    u[idx] = config.boundary == SolverConfig::Boundary::Zero
                                 ? 0.0
                                 : bc_env.value_at(spec.node(i, j, k));
                }
    }

    std::vector<double> F, diag(spec.size(), 1.0), step, trial, Ftrial;
    prob.apply_residual(u, F);
    double fnorm = norm2(F);
    int newton_iters = 0;
    bool converged = norm_inf(F) <= config.tolerance;

    for (int it = 0; it < config.max_iterations && !converged; ++it) {
        ++newton_iters;
        // Jacobian diagonal: -6/h^2 + kappa f'(u) (boundary rows stay identity).
        const std::size_t plane = static_cast<std::size_t>(prob.ny) * prob.nz;
        parallel_for(spec.size(), [&](std::size_t b, std::size_t e) {
            for (std::size_t idx = b; idx < e; ++idx) {
                int i = static_cast<int>(idx / plane);
                int rem = static_cast<int>(idx % plane);
                int j = rem / prob.nz, k = rem % prob.nz;
                diag[idx] = prob.is_interior(i, j, k)
                                ? -6.0 / prob.h2 + prob.kap[idx] * f.derivative(u[idx])
                                : 1.0;
            }
        });
        std::vector<double> rhs(F.size());
        for (std::size_t i = 0; i < F.size(); ++i) rhs[i] = -F[i];
        minres(prob, diag, rhs, step, config.linear_rel_tol, config.linear_max_iterations);

        // Armijo backtracking on the residual l2 norm.
        double t = 1.0;
        bool accepted = false;
        while (t >= config.damping_min) {
            trial = u;
            for (std::size_t i = 0; i < u.size(); ++i) trial[i] += t * step[i];
            prob.apply_residual(trial, Ftrial);
            double fnew = norm2(Ftrial);
            if (fnew <= (1.0 - config.armijo_c * t) * fnorm) {
                u.swap(trial);
                F.swap(Ftrial);
                fnorm = fnew;
                accepted = true;
                break;
            }
            t *= config.damping_factor;
        }
        if (!accepted)
            throw NewtonDiverged("solve_perturbed: line search stalled at residual " +
                                 std::to_string(fnorm));
        converged = norm_inf(F) <= config.tolerance;
    }
    if (!converged)
        throw NewtonDiverged("solve_perturbed: residual " + std::to_string(norm_inf(F)) +
                             " above tolerance after " + std::to_string(newton_iters) +
                             " iterations");

    // Converged iterates may carry harmless negative ripples at roundoff
    // scale; anything larger is a failure.
    double min_u = *std::min_element(u.begin(), u.end());
    double scale = std::max(1.0, norm_inf(u));
    if (min_u < -1e3 * config.tolerance * scale)
        throw NegativeSolution("solve_perturbed: converged solution has min " +
                               std::to_string(min_u));
    for (double& v : u) v = std::max(v, 0.0);

    GridField bare(spec, std::move(u));
    DecayEnvelope env = fit_envelope(bare, n - 2.0);
    GridField field = bare.with_tail(env);

    SolveResult result{std::move(field), env};
    ResidualNorms rn = residual(result.field, kappa, f);
    result.residual_max = rn.max;
    result.residual_l2 = rn.l2;
    result.iterations = newton_iters;
    double two_star = 2.0 * n / (n - 2.0);
    result.mass = std::pow(lp_norm(result.field, two_star), two_star);
    result.energy = dirichlet_energy(result.field);
    return result;
}

double mass_lower_bound(double f0, double kappa_sup, double S, int n) {
    if (f0 <= 0.0 || kappa_sup <= 0.0 || S <= 0.0)
        throw Error("mass_lower_bound: constants must be positive");
    return std::pow(S * S / (f0 * kappa_sup), 0.5 * n);
}

ResidualNorms residual(const GridField& u, const KappaField& kappa, const Nonlinearity& f) {
    const GridSpec& spec = u.spec();
    GridProblem prob(spec, kappa, f);
    std::vector<double> F;
    prob.apply_residual(u.values(), F);
    ResidualNorms out;
    out.max = norm_inf(F);
    double cell = std::pow(spec.spacing, 3);
    out.l2 = std::sqrt(cell * dot(F, F));
    return out;
}

}  // namespace symlab
