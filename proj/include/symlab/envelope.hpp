#pragma once

#include <cmath>
#include <optional>

#include "symlab/geometry.hpp"

namespace symlab {

// Power-law far-field model of a decaying field,
//
//     u(x) ~ coefficient * r^{-exponent} * (1 + correction / r^2),   r = |x - center|,
//
// valid for r >= valid_radius. The quadratic correction is fitted when
// available and sharpens analytic tail integrals; the FLD1 file format keeps
// only (coefficient, exponent).
//
// The certificate block records the two-sided decay sandwich
//     (1/C0) defi^sigma r^{-(n-2-mu)} <= u <= C0 defi^{-sigma} r^{-nu}
// when an experiment declares one.
struct DecayEnvelope {
    double coefficient = 0.0;
    double exponent = 1.0;
    double correction = 0.0;
    double valid_radius = 1.0;
    Vec3 center{};
    double tail_tolerance = 5e-2;  // declared relative mismatch at the box boundary

    struct Certificate {
        double C0 = 1.0;
        double lower_exponent = 0.0;  // n - 2 - mu
        double upper_exponent = 0.0;  // nu
        double sigma = 0.0;
        double R0 = 1.0;
        double deficit_value = 0.0;
    };
    std::optional<Certificate> certificate;

    double value(double r) const {
        return coefficient * std::pow(r, -exponent) * (1.0 + correction / (r * r));
    }
    double value_at(const Vec3& x) const { return value((x - center).norm()); }

    // |d/dr| of the model; decays one power faster (the gradient envelope).
    double slope(double r) const {
        return std::abs(coefficient) * std::pow(r, -exponent - 1.0) *
               std::abs(exponent + (exponent + 2.0) * correction / (r * r));
    }
};

}  // namespace symlab
