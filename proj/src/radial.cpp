#include "symlab/radial.hpp"

#include <algorithm>
#include <cmath>

#include "symlab/errors.hpp"

namespace symlab {

void RadialProfile::validate() const {
    if (radii.size() != values.size() || radii.size() < 2)
        throw Error("RadialProfile: mesh/value mismatch");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (radii[i] <= radii[i - 1]) throw Error("RadialProfile: radii not strictly increasing");
    if (!derivs.empty() && derivs.size() != radii.size())
        throw Error("RadialProfile: derivative count mismatch");
}

namespace {

std::size_t bracket(const std::vector<double>& radii, double r) {
    auto it = std::upper_bound(radii.begin(), radii.end(), r);
    std::size_t hi = static_cast<std::size_t>(it - radii.begin());
    if (hi == 0) hi = 1;
    if (hi >= radii.size()) hi = radii.size() - 1;
    return hi;
}

}  // namespace

double RadialProfile::eval(double r) const {
    if (r <= radii.front()) return values.front();
    if (r >= radii.back()) return tail.value(r);
    std::size_t hi = bracket(radii, r);
    std::size_t lo = hi - 1;
    double h = radii[hi] - radii[lo];
    double t = (r - radii[lo]) / h;
    if (derivs.empty()) return values[lo] * (1.0 - t) + values[hi] * t;
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    double h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t);
    double h11 = t * t * (t - 1);
    return h00 * values[lo] + h10 * h * derivs[lo] + h01 * values[hi] + h11 * h * derivs[hi];
}

double RadialProfile::eval_deriv(double r) const {
    if (r <= radii.front()) return derivs.empty() ? 0.0 : derivs.front();
    if (r >= radii.back()) {
        double rr = r;
        return -tail.coefficient * tail.exponent * std::pow(rr, -tail.exponent - 1.0) *
                   (1.0 + tail.correction / (rr * rr)) -
               tail.coefficient * std::pow(rr, -tail.exponent) * 2.0 * tail.correction /
                   (rr * rr * rr);
    }
    std::size_t hi = bracket(radii, r);
    std::size_t lo = hi - 1;
    double h = radii[hi] - radii[lo];
    double t = (r - radii[lo]) / h;
    if (derivs.empty()) return (values[hi] - values[lo]) / h;
    double d00 = 6 * t * (t - 1) / h;
    double d10 = (1 - t) * (1 - 3 * t);
    double d01 = -d00;
    double d11 = t * (3 * t - 2);
    return d00 * values[lo] + d10 * derivs[lo] + d01 * values[hi] + d11 * derivs[hi];
}

void RadialProfile::fit_tail(double decades) {
    validate();
    double r_hi = radii.back();
    double r_lo = r_hi / std::pow(10.0, decades);
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < r_lo || values[i] <= 0.0) continue;
        double lx = std::log(radii[i]), ly = std::log(values[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        n += 1.0;
    }
    double det = n * sxx - sx * sx;
    if (n < 4 || std::abs(det) < 1e-30) throw Error("RadialProfile::fit_tail: too few tail points");
    double slope = (n * sxy - sx * sy) / det;
    tail.exponent = -slope;
    tail.correction = 0.0;
    // Continuity at the last mesh node.
    tail.coefficient = values.back() * std::pow(r_hi, tail.exponent);
    tail.valid_radius = r_hi;
}

GridField radial_to_grid(const RadialProfile& profile, const GridSpec& spec, Vec3 center) {
    RadialField f(profile, center);
    DecayEnvelope env = profile.tail;
    env.center = center;
    return sample_to_grid(f, spec, env);
}

}  // namespace symlab
