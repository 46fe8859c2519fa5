#include "symlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "symlab/errors.hpp"
#include "symlab/quadrature.hpp"
#include "symlab/util.hpp"

namespace symlab {

// ---------------------------------------------------------------------------
// Bubbles
// ---------------------------------------------------------------------------

double bubble_value(const BubbleParams& p, double r) {
    const double n = p.dim;
    double lam = p.scale;
    double base = lam * std::sqrt(n * (n - 2.0)) / (1.0 + lam * lam * r * r);
    return std::pow(base, 0.5 * (n - 2.0));
}

TalentiBubble::TalentiBubble(BubbleParams p) : params_(p) {
    if (params_.scale <= 0.0) throw Error("TalentiBubble: scale must be positive");
    if (params_.dim < 3) throw Error("TalentiBubble: dim must be >= 3");
}

DecayEnvelope TalentiBubble::envelope() const {
    const double n = params_.dim;
    const double lam = params_.scale;
    DecayEnvelope env;
    env.exponent = n - 2.0;
    // U = (sqrt(n(n-2))/lam)^{(n-2)/2} r^{-(n-2)} (1 + 1/(lam^2 r^2))^{-(n-2)/2}
    env.coefficient = std::pow(std::sqrt(n * (n - 2.0)) / lam, 0.5 * (n - 2.0));
    env.correction = -0.5 * (n - 2.0) / (lam * lam);
    env.center = params_.center;
    env.tail_tolerance = 1e-2;
    return env;
}

RadialProfile TalentiBubble::profile(double r_max, int points) const {
    const double n = params_.dim;
    const double lam = params_.scale;
    RadialProfile prof;
    prof.dim = params_.dim;
    prof.radii.reserve(points);
    prof.values.reserve(points);
    prof.derivs.reserve(points);
    double r_min = 1e-4;
    for (int i = 0; i < points; ++i) {
        double t = static_cast<double>(i) / (points - 1);
        double r = r_min * std::pow(r_max / r_min, t);
        double u = bubble_value(params_, r);
        prof.radii.push_back(r);
        prof.values.push_back(u);
        prof.derivs.push_back(-(n - 2.0) * lam * lam * r * u / (1.0 + lam * lam * r * r));
    }
    prof.tail = envelope();
    prof.tail.center = {};
    prof.tail.valid_radius = r_max;
    prof.validate();
    return prof;
}

double bubble_residual(const BubbleParams& params, const GridSpec& spec) {
    if (params.dim != 3) throw Error("bubble_residual: grid route is n = 3 only");
    if (spec.spacing > 1.0 / (4.0 * params.scale) + 1e-12)
        throw ResolutionTooCoarse("bubble_residual: need h <= 1/(4 lambda)");
    TalentiBubble bubble(params);
    GridField u = sample_to_grid(bubble, spec);
    const double p = 5.0;
    const double h2 = spec.spacing * spec.spacing;
    const int nx = spec.shape[0], ny = spec.shape[1], nz = spec.shape[2];
    const auto& v = u.values();
    std::size_t n_int = static_cast<std::size_t>(nx - 2) * (ny - 2) * (nz - 2);
    std::size_t grain = 1 << 14;
    std::size_t chunks = (n_int + grain - 1) / grain;
    std::vector<double> chunk_max(chunks, 0.0);
    parallel_for(
        n_int,
        [&](std::size_t begin, std::size_t end) {
            double m = 0.0;
            for (std::size_t t = begin; t < end; ++t) {
                int i = 1 + static_cast<int>(t / (static_cast<std::size_t>(ny - 2) * (nz - 2)));
                std::size_t rem = t % (static_cast<std::size_t>(ny - 2) * (nz - 2));
                int j = 1 + static_cast<int>(rem / (nz - 2));
                int k = 1 + static_cast<int>(rem % (nz - 2));
                std::size_t c = spec.index(i, j, k);
                double lap = (v[spec.index(i + 1, j, k)] + v[spec.index(i - 1, j, k)] +
                              v[spec.index(i, j + 1, k)] + v[spec.index(i, j - 1, k)] +
                              v[spec.index(i, j, k + 1)] + v[spec.index(i, j, k - 1)] -
                              6.0 * v[c]) /
                             h2;
                double res = std::abs(lap + std::pow(v[c], p));
                m = std::max(m, res);
            }
            chunk_max[begin / grain] = m;
        },
        grain);
    double best = 0.0;
    for (double m : chunk_max) best = std::max(best, m);
    return best;
}

// ---------------------------------------------------------------------------
// Sobolev constant
// ---------------------------------------------------------------------------

double sobolev_constant_radial(int n) {
    BubbleParams p{{}, 1.0, n};
    const double two_star = 2.0 * n / (n - 2.0);
    auto u = [&](double r) { return bubble_value(p, r); };
    auto du = [&](double r) {
        double val = bubble_value(p, r);
        return -(n - 2.0) * r * val / (1.0 + r * r);
    };
    double omega = sphere_area(n);
    auto energy_int = [&](double r) { return du(r) * du(r) * std::pow(r, n - 1); };
    auto mass_int = [&](double r) { return std::pow(u(r), two_star) * std::pow(r, n - 1); };
    double energy = omega * (adaptive_simpson(energy_int, 0.0, 1.0, 1e-13) +
                             radial_tail_integral(energy_int, 1.0, 1e-13));
    double mass = omega * (adaptive_simpson(mass_int, 0.0, 1.0, 1e-13) +
                           radial_tail_integral(mass_int, 1.0, 1e-13));
    return std::sqrt(energy) / std::pow(mass, 1.0 / two_star);
}

double sobolev_constant(int n, const SobolevLadder& ladder) {
    if (n != 3) return sobolev_constant_radial(n);
    if (ladder.spacings.size() < 3)
        throw Error("sobolev_constant: ladder needs at least three spacings");
    for (std::size_t i = 1; i < ladder.spacings.size(); ++i)
        if (std::abs(ladder.spacings[i] * 2.0 - ladder.spacings[i - 1]) > 1e-12)
            throw Error("sobolev_constant: ladder must halve the spacing");

    TalentiBubble bubble({{}, 1.0, 3});
    std::vector<double> q;
    for (double h : ladder.spacings) {
        int cells = static_cast<int>(std::lround(2.0 * ladder.half_width / h));
        GridSpec spec = GridSpec::centered_cube(ladder.half_width, cells);
        GridField u = sample_to_grid(bubble, spec, bubble.envelope());
        double energy = dirichlet_energy(u);
        double mass = lp_norm(u, 6.0);
        q.push_back(std::sqrt(energy) / mass);
    }
    // Observed order on the last triple, then one Richardson step.
    std::size_t m = q.size();
    double d1 = q[m - 2] - q[m - 3];
    double d2 = q[m - 1] - q[m - 2];
    if (d2 == 0.0) return q[m - 1];
    double order = std::log2(std::abs(d1 / d2));
    if (!(order > 1.2 && order < 2.8))
        throw NonConvergent("sobolev_constant: observed order " + std::to_string(order) +
                            " is not second-order");
    return q[m - 1] + (q[m - 1] - q[m - 2]) / 3.0;
}

// ---------------------------------------------------------------------------
// Nonlinearities
// ---------------------------------------------------------------------------

Nonlinearity::Nonlinearity(std::function<double(double)> f, int n, double C0, std::string name)
    : f_(std::move(f)), n_(n), p_((n + 2.0) / (n - 2.0)), C0_(C0), name_(std::move(name)) {
    if (n < 3) throw Error("Nonlinearity: n must be >= 3");
    if (C0 < 1.0) throw Error("Nonlinearity: C0 must be >= 1");
}

double Nonlinearity::operator()(double u) const {
    if (u <= 0.0) return f_(0.0);
    if (u >= C0_) return f_(C0_);  // constant extension past C0
    return f_(u);
}

double Nonlinearity::derivative(double u) const {
    double d = 1e-6 * std::max(1.0, std::abs(u));
    return ((*this)(u + d) - (*this)(u - d)) / (2.0 * d);
}

Nonlinearity Nonlinearity::critical(int n) {
    double p = (n + 2.0) / (n - 2.0);
    Nonlinearity f([p](double u) { return std::pow(u, p); }, n, 4.0, "critical");
    f.f0 = 1.0;
    f.L = p;
    f.nondecreasing = true;
    f.f_over_up_nonincreasing = true;
    return f;
}

Nonlinearity Nonlinearity::power(double q, int n, double C0) {
    return Nonlinearity([q](double u) { return std::pow(u, q); }, n, C0,
                        "power_" + std::to_string(q));
}

HypothesisReport check_hypotheses(const std::function<double(double)>& f, double C0, int n,
                                  const HypothesisOptions& opts) {
    if (C0 < 1.0) throw Error("check_hypotheses: C0 must be >= 1");
    const double p = (n + 2.0) / (n - 2.0);
    HypothesisReport rep;
    rep.dense_samples = opts.dense_samples;
    rep.pair_mesh = opts.pair_mesh;
    rep.delta_floor = opts.delta_floor;

    // Dense log-spaced mesh on [delta_floor, C0] for the pointwise bounds.
    std::vector<double> dense(opts.dense_samples);
    for (int i = 0; i < opts.dense_samples; ++i) {
        double t = static_cast<double>(i) / (opts.dense_samples - 1);
        dense[i] = opts.delta_floor * std::pow(C0 / opts.delta_floor, t);
    }
    int argmax = 0;
    for (int i = 0; i < opts.dense_samples; ++i) {
        double ratio = std::abs(f(dense[i])) / std::pow(dense[i], p);
        if (ratio > rep.f0) {
            rep.f0 = ratio;
            argmax = i;
        }
    }
    rep.f0_boundary_attained = (argmax == 0 || argmax == opts.dense_samples - 1);

    // f(u)/u^p monotone non-increasing on the dense mesh.
    double prev = f(dense[0]) / std::pow(dense[0], p);
    for (int i = 1; i < opts.dense_samples; ++i) {
        double cur = f(dense[i]) / std::pow(dense[i], p);
        double tol = 1e-9 * (std::abs(prev) + std::abs(cur)) + 1e-300;
        if (cur > prev + tol) {
            rep.f_over_up_nonincreasing = false;
            rep.witness_monotone_quotient[0] = dense[i - 1];
            rep.witness_monotone_quotient[1] = dense[i];
            break;
        }
        prev = cur;
    }

    // Difference quotients: all ordered pairs on a linear mesh plus
    // near-diagonal pairs on the dense mesh (the quotient sup is attained in
    // the u1 -> u2 limit for power laws).
    auto consider = [&](double u1, double u2) {
        double q = (f(u2) - f(u1)) / (u2 - u1);
        if (q < -1e-12 * (std::abs(f(u2)) + std::abs(f(u1)) + 1.0) && rep.nondecreasing) {
            rep.nondecreasing = false;
            rep.witness_nondecreasing[0] = u1;
            rep.witness_nondecreasing[1] = u2;
        }
        rep.L = std::max(rep.L, q / std::pow(u2, p - 1.0));
    };
    std::vector<double> mesh(opts.pair_mesh);
    for (int i = 0; i < opts.pair_mesh; ++i) {
        double t = static_cast<double>(i) / (opts.pair_mesh - 1);
        mesh[i] = opts.delta_floor + (C0 - opts.delta_floor) * t;
    }
    for (int i = 0; i < opts.pair_mesh; ++i)
        for (int j = i + 1; j < opts.pair_mesh; ++j) consider(mesh[i], mesh[j]);
    for (double u : dense) {
        double u1 = u * (1.0 - 1e-8);
        if (u1 > 0.0 && u1 < u) consider(u1, u);
    }
    return rep;
}

HypothesisReport certify(Nonlinearity& f, const HypothesisOptions& opts) {
    HypothesisReport rep =
        check_hypotheses([&f](double u) { return f(u); }, f.C0(), f.n(), opts);
    f.f0 = rep.f0;
    f.L = rep.L;
    f.nondecreasing = rep.nondecreasing;
    f.f_over_up_nonincreasing = rep.f_over_up_nonincreasing;
    return rep;
}

// ---------------------------------------------------------------------------
// kappa generators
// ---------------------------------------------------------------------------

KappaSpec KappaSpec::constant(double kappa0, double eps) {
    KappaSpec s;
    s.kind = Kind::Constant;
    s.kappa0 = kappa0;
    s.amplitude = eps;
    return s;
}

KappaSpec KappaSpec::radial_step(double kappa0, double eps, double radius) {
    KappaSpec s;
    s.kind = Kind::RadialStep;
    s.kappa0 = kappa0;
    s.amplitude = eps;
    s.width = radius;
    return s;
}

KappaSpec KappaSpec::smooth_bump(double kappa0, double eps, Vec3 center, double width) {
    KappaSpec s;
    s.kind = Kind::SmoothBump;
    s.kappa0 = kappa0;
    s.amplitude = eps;
    s.center = center;
    s.width = width;
    return s;
}

KappaSpec KappaSpec::random_fourier(double kappa0, double eps, int modes, std::uint64_t seed) {
    KappaSpec s;
    s.kind = Kind::RandomFourier;
    s.kappa0 = kappa0;
    s.amplitude = eps;
    s.modes = modes;
    s.seed = seed;
    return s;
}

namespace {

double bump_eta(double s2) {
    if (s2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s2));
}

}  // namespace

KappaField make_kappa(const KappaSpec& spec) {
    if (spec.kappa0 <= 0.0) throw Error("make_kappa: baseline kappa0 must be positive");
    if (spec.amplitude < 0.0) throw Error("make_kappa: amplitude must be non-negative");
    if (spec.kappa0 - spec.amplitude < 0.0)
        throw NegativeKappa("make_kappa: kappa0 - eps < 0");

    const double k0 = spec.kappa0, eps = spec.amplitude;
    KappaField field;
    switch (spec.kind) {
        case KappaSpec::Kind::Constant: {
            double c = k0 + eps;
            field.evaluator = [c](const Vec3&) { return c; };
            field.radial_evaluator = [c](double) { return c; };
            field.radial = true;
            field.inf_value = field.sup_value = field.far_value = c;
            field.grad_bound = 0.0;
            field.holder = {0.5, 0.0};
            break;
        }
        case KappaSpec::Kind::RadialStep: {
            double w = spec.width;
            auto eta = [w](double r) {
                double s = r / w;
                return std::exp(-(s * s) * (s * s));
            };
            field.radial_evaluator = [k0, eps, eta](double r) { return k0 + eps * eta(r); };
            field.evaluator = [k0, eps, eta](const Vec3& x) { return k0 + eps * eta(x.norm()); };
            field.radial = true;
            field.inf_value = k0;
            field.sup_value = k0 + eps;
            field.far_value = k0;
            // max |eta'| over a dense 1-D scan
            double g = 0.0;
            for (int i = 1; i < 4000; ++i) {
                double r = 4.0 * w * i / 4000.0;
                double s = r / w;
                g = std::max(g, 4.0 * s * s * s * std::exp(-(s * s) * (s * s)) / w);
            }
            field.grad_bound = eps * g;
            field.holder = {1.0, eps * g};
            break;
        }
        case KappaSpec::Kind::SmoothBump: {
            Vec3 c = spec.center;
            double w = spec.width;
            field.evaluator = [k0, eps, c, w](const Vec3& x) {
                double s2 = (x - c).norm2() / (w * w);
                return k0 + eps * bump_eta(s2);
            };
            field.radial = false;
            field.inf_value = k0;
            field.sup_value = k0 + eps;
            field.far_value = k0;
            double g = 0.0;
            for (int i = 1; i < 4000; ++i) {
                double s = static_cast<double>(i) / 4000.0;
                double e = bump_eta(s * s);
                double de = e * (-2.0 * s) / ((1.0 - s * s) * (1.0 - s * s));
                g = std::max(g, std::abs(de) / w);
            }
            field.grad_bound = eps * g;
            field.holder = {1.0, eps * g};
            break;
        }
        case KappaSpec::Kind::RandomFourier: {
            std::mt19937_64 rng(spec.seed);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            std::normal_distribution<double> gauss(0.0, 1.0);
            struct Mode {
                Vec3 k;
                double a, phase;
            };
            auto modes = std::make_shared<std::vector<Mode>>();
            double norm = 0.0, grad = 0.0;
            for (int m = 0; m < spec.modes; ++m) {
                Vec3 k{gauss(rng), gauss(rng), gauss(rng)};
                double kn = k.norm();
                if (kn < 1e-9) kn = 1e-9;
                double target = spec.max_frequency * (0.25 + 0.75 * unif(rng));
                k = k * (target / kn);
                double a = 0.5 + unif(rng);
                modes->push_back({k, a, 2.0 * M_PI * unif(rng)});
                norm += a;
                grad += a * k.norm();
            }
            field.evaluator = [k0, eps, modes, norm](const Vec3& x) {
                double s = 0.0;
                for (const auto& m : *modes) s += m.a * std::cos(m.k.dot(x) + m.phase);
                return k0 + eps * s / norm;
            };
            field.radial = false;
            // Coefficient bound: |eta| <= 1, so values are certified to lie
            // in [k0 - eps, k0 + eps] even though sampled extrema are tighter.
            field.inf_value = k0 - eps;
            field.sup_value = k0 + eps;
            field.far_value = k0;
            field.grad_bound = eps * grad / norm;
            break;
        }
    }
    return field;
}

}  // namespace symlab
