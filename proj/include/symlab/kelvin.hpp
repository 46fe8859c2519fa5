#pragma once

#include <memory>

#include "symlab/field.hpp"
#include "symlab/models.hpp"
#include "symlab/radial.hpp"

namespace symlab {

// Kelvin transform v(x) = |x|^{2-n} u(x / |x|^2). Values inside the excluded
// ball around the origin are not trusted (inversion magnifies interpolation
// error there without bound) and raise SingularOrigin.
class KelvinField : public Field {
public:
    KelvinField(std::shared_ptr<const Field> source, int n, double excluded_radius);

    double value(const Vec3& x) const override;

    double excluded_radius() const { return excluded_radius_; }
    int n() const { return n_; }
    const std::shared_ptr<const Field>& source() const { return source_; }

private:
    std::shared_ptr<const Field> source_;
    int n_;
    double excluded_radius_;
};

// Grid sources get the default excluded radius 2 h / R_box^2 (two cells of
// the finest source grid mapped through the inversion). An explicit override
// wins when given.
KelvinField kelvin_transform(std::shared_ptr<const GridField> u, double excluded_radius = 0.0);
KelvinField kelvin_transform(std::shared_ptr<const Field> u, int n, double excluded_radius);

// Radial route, general n: maps the profile mesh through r -> 1/r.
RadialProfile kelvin_transform_radial(const RadialProfile& u);

// kappa*(x) = kappa(x / |x|^2); norms and oscillations carry over unchanged.
KappaField transform_kappa(const KappaField& kappa);

// g(x, v) = |x|^{-(n+2)} f(|x|^{n-2} v); for the critical power this is v^p
// independently of x. Throws SingularOrigin at x = 0.
double induced_g(const Nonlinearity& f, const Vec3& x, double v);

}  // namespace symlab
