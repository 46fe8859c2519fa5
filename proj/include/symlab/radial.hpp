#pragma once

#include <memory>
#include <vector>

#include "symlab/envelope.hpp"
#include "symlab/field.hpp"
#include "symlab/grid.hpp"

namespace symlab {

// 1-D radial function for general dimension n >= 3. Values live on a strictly
// increasing mesh; evaluation is cubic Hermite when derivatives are stored
// (ODE output) and linear otherwise, with the envelope past the last node.
struct RadialProfile {
    int dim = 3;
    std::vector<double> radii;
    std::vector<double> values;
    std::vector<double> derivs;  // optional, same length as radii when present
    DecayEnvelope tail;          // exponent > 0 for decaying profiles

    double eval(double r) const;
    double eval_deriv(double r) const;

    // Fits tail.coefficient / tail.exponent by least squares of log u against
    // log r over the trailing `decades` of the mesh, then pins the coefficient
    // so evaluation is continuous at the last node.
    void fit_tail(double decades = 1.0);

    void validate() const;
};

// Exact radial evaluation as a 3-D field about a center.
class RadialField : public Field {
public:
    RadialField(RadialProfile profile, Vec3 center = {})
        : profile_(std::move(profile)), center_(center) {}
    double value(const Vec3& x) const override { return profile_.eval((x - center_).norm()); }
    const RadialProfile& profile() const { return profile_; }
    const Vec3& center() const { return center_; }

private:
    RadialProfile profile_;
    Vec3 center_;
};

// Samples the profile onto a lattice, attaching its envelope about `center`.
GridField radial_to_grid(const RadialProfile& profile, const GridSpec& spec, Vec3 center = {});

}  // namespace symlab
