#pragma once

#include <functional>
#include <optional>

#include "symlab/grid.hpp"
#include "symlab/models.hpp"
#include "symlab/radial.hpp"

namespace symlab {

// ---------------------------------------------------------------------------
// Radial shooting
// ---------------------------------------------------------------------------

struct ShootConfig {
    double a_min = 0.2;   // bisection / scan range for u(0)
    double a_max = 3.0;
    std::optional<double> a_fixed;  // integrate this amplitude only
    int scan_points = 24;
    double r_max = 1e3;
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    double tail_fit_decades = 1.0;
};

// Integrates u'' + (n-1)/r u' + kappa(r) f(u) = 0 from u(0) = a, u'(0) = 0
// with adaptive RK (Dormand-Prince 5(4)). Ground states are located by
// bisecting the sign boundary between crossing and upturning trajectories;
// when no such bracket exists (the whole scanned range decays, as happens for
// radially non-increasing kappa at the critical exponent) the first decaying
// branch is returned. Throws NoGroundState when nothing decays.
RadialProfile solve_radial(const Nonlinearity& f, const std::function<double(double)>& kappa_r,
                           int n, const ShootConfig& config = {});

// ---------------------------------------------------------------------------
// Perturbed grid solves (n = 3)
// ---------------------------------------------------------------------------

struct SolverConfig {
    double half_width = 5.04;
    double spacing = 0.16;
    double tolerance = 1e-8;       // residual max-norm target
    int max_iterations = 40;
    double damping_factor = 0.5;   // Armijo backtracking
    double damping_min = 1e-3;
    double armijo_c = 1e-4;
    enum class Boundary { DecayMatched, Zero } boundary = Boundary::DecayMatched;
    int continuation_steps = 5;    // used by the sweep driver
    double linear_rel_tol = 1e-10;
    int linear_max_iterations = 4000;
};

struct SolveResult {
    GridField field;
    DecayEnvelope envelope;
    double residual_max = 0.0;
    double residual_l2 = 0.0;
    int iterations = 0;
    double mass = 0.0;    // integral u^{2^*}
    double energy = 0.0;  // integral |grad u|^2
};

// Damped Newton on F(u) = Delta_h u + kappa f(u) with the 7-point Laplacian
// and decay-matched Dirichlet data fitted from the initial guess. Negative
// iterates are clipped to zero before f is evaluated. Linear solves are
// preconditioned MINRES on the (symmetric) Jacobian.
SolveResult solve_perturbed(const KappaField& kappa, const Nonlinearity& f,
                            const GridField& initial, const SolverConfig& config = {});

// M = (S^2 / (f0 |kappa|_inf))^{n/2}, the quantitative mass lower bound.
double mass_lower_bound(double f0, double kappa_sup, double S, int n);

struct ResidualNorms {
    double max = 0.0;
    double l2 = 0.0;
};

// Discrete residual of Delta_h u + kappa f(u) over interior nodes.
ResidualNorms residual(const GridField& u, const KappaField& kappa, const Nonlinearity& f);

}  // namespace symlab
