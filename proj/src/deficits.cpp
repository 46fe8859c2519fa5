#include "symlab/deficits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "symlab/errors.hpp"
#include "symlab/quadrature.hpp"
#include "symlab/util.hpp"

namespace symlab {

namespace {

// Precomputed quadrature for t -> |(kappa - t) f(u)|_q^q: per-node weights
// w_i = |f(u_i)|^q h^3 inside the tail-split ball, kappa sampled once, and a
// scalar tail weight with the far value of kappa. q = (2*)' = 2n/(n+2).
struct DeficitQuad {
    std::vector<double> w;
    std::vector<double> kap;
    double tail_w = 0.0;
    double kappa_far = 0.0;
    double q = 1.2;

    double phi_pow(double t) const {
        KahanSum acc;
        for (std::size_t i = 0; i < w.size(); ++i)
            acc.add(w[i] * std::pow(std::abs(kap[i] - t), q));
        acc.add(tail_w * std::pow(std::abs(kappa_far - t), q));
        return acc.value();
    }
    double phi(double t) const { return std::pow(phi_pow(t), 1.0 / q); }
};

// Log-slope of |g| along the envelope tail, measured a decade and two out.
// Guards tail integrals of arbitrary nonlinearities without assuming the
// critical growth.
double measured_tail_decay(const DecayEnvelope& env, const std::function<double(double)>& g,
                           double r0) {
    double g1 = std::abs(g(env.value(10.0 * r0)));
    double g2 = std::abs(g(env.value(100.0 * r0)));
    if (g1 <= 0.0 || g2 <= 0.0) return std::numeric_limits<double>::infinity();
    return std::log(g1 / g2) / std::log(10.0);
}

DeficitQuad build_quad(const GridField& u, const KappaField& kappa, const Nonlinearity& f,
                       int stride = 1) {
    const GridSpec& s = u.spec();
    const int n = 3;
    const double q = 2.0 * n / (n + 2.0);
    DeficitQuad dq;
    dq.q = q;
    dq.kappa_far = kappa.far_value;

    Vec3 tc{};
    double split = 0.0;
    bool has_tail = u.tail().has_value();
    if (has_tail) {
        tc = u.tail()->center;
        split = s.tail_split_radius(tc);
        double decay = measured_tail_decay(*u.tail(), [&](double um) { return f(um); }, split);
        if (decay * q <= n + 1e-9)
            throw DivergentTail("deficit: f(u) tail decays too slowly for L^{(2*)'}");
    }
    const double cell = std::pow(s.spacing * stride, 3);
    dq.w.reserve(s.size() / (stride * stride * stride) + 1);
    for (int i = 0; i < s.shape[0]; i += stride)
        for (int j = 0; j < s.shape[1]; j += stride)
            for (int k = 0; k < s.shape[2]; k += stride) {
                Vec3 x = s.node(i, j, k);
                if (has_tail && (x - tc).norm() > split) continue;
                double fu = f(u.sample(i, j, k));
                if (fu == 0.0) continue;
                dq.w.push_back(cell * std::pow(std::abs(fu), q));
                dq.kap.push_back(kappa(x));
            }
    if (has_tail) {
        const DecayEnvelope& env = *u.tail();
        dq.tail_w = sphere_area(n) *
                    radial_tail_integral(
                        [&](double r) {
                            return std::pow(std::abs(f(env.value(r))), q) * std::pow(r, n - 1);
                        },
                        split);
    }
    return dq;
}

struct MinimizeResult {
    double t;
    double value;
    bool convexity_ok;
};

// Golden section on [lo, hi]; phi is convex in t (norm of an affine map).
MinimizeResult golden_minimize(const DeficitQuad& dq, double lo, double hi, double rel_tol) {
    MinimizeResult res{0.5 * (lo + hi), 0.0, true};
    if (hi - lo < 1e-300) {
        res.t = lo;
        res.value = dq.phi(lo);
        return res;
    }
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = dq.phi(x1), f2 = dq.phi(x2);
    double fa = dq.phi(a), fb = dq.phi(b);
    double scale = std::max({std::abs(a), std::abs(b), 1.0});
    for (int it = 0; it < 200 && (b - a) > rel_tol * scale; ++it) {
        // Convexity witness: an interior point may not exceed both endpoints.
        if (f1 > std::max(fa, fb) * (1.0 + 1e-12) + 1e-300) res.convexity_ok = false;
        if (f1 < f2) {
            b = x2;
            fb = f2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = dq.phi(x1);
        } else {
            a = x1;
            fa = f1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = dq.phi(x2);
        }
    }
    res.t = 0.5 * (a + b);
    res.value = dq.phi(res.t);
    return res;
}

}  // namespace

DeficitPair deficit_df(const GridField& u, const KappaField& kappa, const Nonlinearity& f) {
    DeficitQuad dq = build_quad(u, kappa, f);
    MinimizeResult m = golden_minimize(dq, kappa.inf_value, kappa.sup_value, 1e-8);
    return {m.value, m.t};
}

double kappa0_reference(const GridField& u, const KappaField& kappa, const Nonlinearity& f) {
    if (u.tail()) {
        double split = u.spec().tail_split_radius(u.tail()->center);
        double decay =
            measured_tail_decay(*u.tail(), [&](double um) { return f(um) * um; }, split);
        if (decay <= 3.0 + 1e-9)
            throw DivergentTail("kappa0_reference: f(u) u tail does not converge");
    }
    auto num_node = [&](const Vec3& x, double uu) { return kappa(x) * f(uu) * uu; };
    auto den_node = [&](const Vec3&, double uu) { return f(uu) * uu; };
    double kfar = kappa.far_value;
    auto num_tail = [&, kfar](double um) { return kfar * f(um) * um; };
    auto den_tail = [&](double um) { return f(um) * um; };
    double num = integral(u, num_node, num_tail);
    double den = integral(u, den_node, den_tail);
    double scale = lp_norm(u, 2.0 * u.dim() / (u.dim() - 2.0));
    if (den <= 1e-14 * std::max(1.0, scale))
        throw DegenerateDenominator("kappa0_reference: integral f(u) u is not positive");
    return num / den;
}

double deficit_tilde(const GridField& u, const KappaField& kappa, const Nonlinearity& f) {
    double k0 = kappa0_reference(u, kappa, f);
    DeficitQuad dq = build_quad(u, kappa, f);
    return dq.phi(k0);
}

double deficit_osc(const KappaField& kappa) { return kappa.osc(); }

DeficitReport compute_deficit_report(const GridField& u, const KappaField& kappa,
                                     const Nonlinearity& f) {
    DeficitReport rep;
    DeficitQuad fine = build_quad(u, kappa, f);
    MinimizeResult m = golden_minimize(fine, kappa.inf_value, kappa.sup_value, 1e-8);
    rep.delta_f = m.value;
    rep.kappa1 = m.t;
    rep.convexity_ok = m.convexity_ok;
    rep.osc = kappa.osc();

    // |f(u)|_q via the same quadrature: weights already carry |f(u)|^q.
    KahanSum fn;
    for (double w : fine.w) fn.add(w);
    fn.add(fine.tail_w);
    rep.f_norm = std::pow(fn.value(), 1.0 / fine.q);

    try {
        rep.kappa0 = kappa0_reference(u, kappa, f);
        rep.delta_tilde = fine.phi(rep.kappa0);
    } catch (const DegenerateDenominator&) {
        rep.tilde_available = false;
        rep.kappa0 = std::numeric_limits<double>::quiet_NaN();
        rep.delta_tilde = std::numeric_limits<double>::quiet_NaN();
    }

    // Two-resolution error estimate: repeat the minimization on the
    // 2h-subsampled lattice.
    if (u.spec().shape[0] >= 9 && u.spec().shape[0] % 2 == 1) {
        DeficitQuad coarse = build_quad(u, kappa, f, 2);
        MinimizeResult mc = golden_minimize(coarse, kappa.inf_value, kappa.sup_value, 1e-8);
        rep.two_resolution_error = std::abs(mc.value - rep.delta_f);
    }
    return rep;
}

std::string DeficitReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    auto num = [&](double v) -> std::string {
        if (!std::isfinite(v)) return "null";
        std::ostringstream s;
        s.precision(17);
        s << v;
        return s.str();
    };
    os << "{\"delta_f\": " << num(delta_f) << ", \"kappa1\": " << num(kappa1)
       << ", \"kappa0\": " << num(kappa0) << ", \"delta_tilde\": " << num(delta_tilde)
       << ", \"osc\": " << num(osc) << ", \"f_norm\": " << num(f_norm) << "}";
    return os.str();
}

}  // namespace symlab
