#pragma once

#include <string>

#include "symlab/grid.hpp"
#include "symlab/models.hpp"

namespace symlab {

// The three deficit functionals of the stability estimates:
//   delta_f  = inf_t |(kappa - t) f(u)|_{L^{(2*)'}}   (minimized over t)
//   delta~   = the same norm at the reference constant kappa0
//   osc      = sup kappa - inf kappa
struct DeficitReport {
    double delta_f = 0.0;
    double kappa1 = 0.0;       // minimizing constant, in [inf kappa, sup kappa]
    double kappa0 = 0.0;       // integral kappa f(u) u / integral f(u) u
    double delta_tilde = 0.0;
    double osc = 0.0;
    double f_norm = 0.0;       // |f(u)|_{L^{(2*)'}}
    double two_resolution_error = 0.0;  // |delta_f(h) - delta_f(2h)|
    bool convexity_ok = true;  // golden-section bracket witness
    bool tilde_available = true;  // false when f changes sign on the range of u

    std::string to_json() const;
};

struct DeficitPair {
    double delta_f;
    double kappa1;
};

// phi(t) = |(kappa - t) f(u)|_{L^{(2*)'}} minimized by golden section on
// [inf kappa, sup kappa] to relative tolerance 1e-8.
DeficitPair deficit_df(const GridField& u, const KappaField& kappa, const Nonlinearity& f);

// kappa0 = integral kappa f(u) u / integral f(u) u. Throws
// DegenerateDenominator when the denominator is not positive.
double kappa0_reference(const GridField& u, const KappaField& kappa, const Nonlinearity& f);

// |(kappa - kappa0) f(u)|_{L^{(2*)'}}
double deficit_tilde(const GridField& u, const KappaField& kappa, const Nonlinearity& f);

double deficit_osc(const KappaField& kappa);

// All of the above plus the coarse-grid error estimate.
DeficitReport compute_deficit_report(const GridField& u, const KappaField& kappa,
                                     const Nonlinearity& f);

}  // namespace symlab
