#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symlab/field.hpp"
#include "symlab/grid.hpp"
#include "symlab/radial.hpp"

namespace symlab {

// ---------------------------------------------------------------------------
// Talenti bubbles
// ---------------------------------------------------------------------------

struct BubbleParams {
    Vec3 center{};
    double scale = 1.0;  // lambda > 0
    int dim = 3;
};

// U[z,lambda](x) = (lambda sqrt(n(n-2)) / (1 + lambda^2 |x-z|^2))^{(n-2)/2}
double bubble_value(const BubbleParams& p, double r);

class TalentiBubble : public Field {
public:
    explicit TalentiBubble(BubbleParams p);
    double value(const Vec3& x) const override {
        return bubble_value(params_, (x - params_.center).norm());
    }
    const BubbleParams& params() const { return params_; }

    // Exact far-field model: coefficient (n(n-2))^{(n-2)/4} lambda^{-(n-2)/2},
    // exponent n-2, correction -1/lambda^2 ... (see implementation).
    DecayEnvelope envelope() const;

    RadialProfile profile(double r_max = 100.0, int points = 4000) const;

private:
    BubbleParams params_;
};

// Max over interior nodes of |Delta_h U + U^p| with the 7-point Laplacian.
// Requires the grid to resolve the core: h <= 1 / (4 lambda).
double bubble_residual(const BubbleParams& params, const GridSpec& spec);

// ---------------------------------------------------------------------------
// Sobolev constant
// ---------------------------------------------------------------------------

struct SobolevLadder {
    double half_width = 8.0;
    std::vector<double> spacings{0.5, 0.25, 0.125};  // coarse to fine
};

// S = |grad U|_{L^2} / |U|_{L^{2^*}} for U = U[0,1], Richardson-extrapolated
// over the ladder for n = 3; radial quadrature otherwise. Throws NonConvergent
// when the ladder does not show second-order behavior.
double sobolev_constant(int n, const SobolevLadder& ladder = {});

// Radial-quadrature route, any n >= 3. Used by sobolev_constant and as an
// independent check.
double sobolev_constant_radial(int n);

// ---------------------------------------------------------------------------
// Nonlinearities
// ---------------------------------------------------------------------------

class Nonlinearity {
public:
    // f defined on [0, C0]; extended above C0 by the constant f(C0).
    Nonlinearity(std::function<double(double)> f, int n, double C0 = 4.0,
                 std::string name = "custom");

    double operator()(double u) const;
    // Difference-quotient derivative used by the Newton Jacobian.
    double derivative(double u) const;

    int n() const { return n_; }
    double p() const { return p_; }  // (n+2)/(n-2)
    double C0() const { return C0_; }
    const std::string& name() const { return name_; }

    // Certified constants; populated by check_hypotheses (or the factory for
    // closed forms).
    double f0 = 0.0;
    double L = 0.0;
    bool nondecreasing = false;
    bool f_over_up_nonincreasing = false;

    static Nonlinearity critical(int n);               // f(u) = u^p
    static Nonlinearity power(double q, int n, double C0 = 4.0);

private:
    std::function<double(double)> f_;
    int n_;
    double p_;
    double C0_;
    std::string name_;
};

struct HypothesisReport {
    double f0 = 0.0;                 // smallest sampled constant with |f(u)| <= f0 u^p
    double L = 0.0;                  // smallest sampled quotient bound
    bool nondecreasing = true;
    bool f_over_up_nonincreasing = true;
    bool f0_boundary_attained = false;  // sup hit the sample-interval boundary
    double witness_nondecreasing[2] = {0, 0};
    double witness_monotone_quotient[2] = {0, 0};
    int dense_samples = 0;
    int pair_mesh = 0;
    double delta_floor = 0.0;
};

struct HypothesisOptions {
    int dense_samples = 10000;
    int pair_mesh = 200;
    double delta_floor = 1e-8;
};

// Certifies (or refutes, with witnesses) the growth and monotonicity
// hypotheses on [delta_floor, C0] by dense sampling.
HypothesisReport check_hypotheses(const std::function<double(double)>& f, double C0, int n,
                                  const HypothesisOptions& opts = {});

// Runs check_hypotheses and stores the certified constants on the object.
HypothesisReport certify(Nonlinearity& f, const HypothesisOptions& opts = {});

// ---------------------------------------------------------------------------
// Coefficient fields kappa
// ---------------------------------------------------------------------------

struct KappaField {
    std::function<double(const Vec3&)> evaluator;
    double inf_value = 0.0;
    double sup_value = 0.0;
    double far_value = 0.0;  // limit outside the experiment box
    std::optional<double> grad_bound;
    std::optional<std::pair<double, double>> holder;  // (tau, [kappa]_{C^{0,tau}})
    bool radial = false;
    std::function<double(double)> radial_evaluator;

    double osc() const { return sup_value - inf_value; }
    double operator()(const Vec3& x) const { return evaluator(x); }
};

struct KappaSpec {
    enum class Kind { Constant, RadialStep, SmoothBump, RandomFourier } kind = Kind::Constant;
    double kappa0 = 1.0;
    double amplitude = 0.0;  // epsilon
    Vec3 center{};           // bump center
    double width = 1.0;      // bump width / step radius
    int modes = 8;           // Fourier modes
    double max_frequency = 2.0;
    std::uint64_t seed = 0;

    static KappaSpec constant(double kappa0, double eps = 0.0);
    static KappaSpec radial_step(double kappa0, double eps, double radius);
    static KappaSpec smooth_bump(double kappa0, double eps, Vec3 center, double width);
    static KappaSpec random_fourier(double kappa0, double eps, int modes, std::uint64_t seed);
};

// kappa = kappa0 + eps * eta with |eta|_inf = 1 (<= 1 for random_fourier,
// where inf/sup come from the coefficient bound). Throws NegativeKappa when
// kappa0 - eps < 0.
KappaField make_kappa(const KappaSpec& spec);

}  // namespace symlab
