#include "symlab/kelvin.hpp"

#include <algorithm>
#include <cmath>

#include "symlab/errors.hpp"

namespace symlab {

KelvinField::KelvinField(std::shared_ptr<const Field> source, int n, double excluded_radius)
    : source_(std::move(source)), n_(n), excluded_radius_(excluded_radius) {
    if (!source_) throw Error("KelvinField: null source");
    if (excluded_radius_ <= 0.0) throw Error("KelvinField: excluded radius must be positive");
}

double KelvinField::value(const Vec3& x) const {
    double r2 = x.norm2();
    double r = std::sqrt(r2);
    if (r <= excluded_radius_)
        throw SingularOrigin("KelvinField: query inside excluded ball (r = " + std::to_string(r) +
                             ")");
    Vec3 y = x / r2;
    return std::pow(r, 2.0 - n_) * source_->value(y);
}

KelvinField kelvin_transform(std::shared_ptr<const GridField> u, double excluded_radius) {
    double rho = excluded_radius;
    const GridSpec& s = u->spec();
    double h = s.spacing;
    double rbox = s.tail_split_radius(u->tail() ? u->tail()->center : Vec3{});
    if (rho <= 0.0) {
        if (u->tail()) {
            rho = 2.0 * h / (rbox * rbox);
        } else {
            // Without a tail the source is blind beyond the box, so v is
            // blind inside the inverted box.
            rho = 1.0 / rbox + 2.0 * h / (rbox * rbox);
        }
    }
    rho = std::max(rho, 2.0 * h / (rbox * rbox));
    return KelvinField(std::move(u), 3, rho);
}

KelvinField kelvin_transform(std::shared_ptr<const Field> u, int n, double excluded_radius) {
    return KelvinField(std::move(u), n, excluded_radius);
}

RadialProfile kelvin_transform_radial(const RadialProfile& u) {
    u.validate();
    const int n = u.dim;
    RadialProfile v;
    v.dim = n;
    std::size_t m = u.radii.size();
    v.radii.reserve(m);
    v.values.reserve(m);
    // r -> 1/r reverses the mesh; v(r) = r^{2-n} u(1/r).
    for (std::size_t i = 0; i < m; ++i) {
        double r = 1.0 / u.radii[m - 1 - i];
        v.radii.push_back(r);
        v.values.push_back(std::pow(r, 2.0 - n) * u.values[m - 1 - i]);
    }
    // Far field of v comes from u near zero: u(s) -> u(0) gives
    // v(r) ~ u(0) r^{2-n}.
    v.tail.exponent = n - 2.0;
    v.tail.coefficient = v.values.back() * std::pow(v.radii.back(), n - 2.0);
    v.tail.valid_radius = v.radii.back();
    v.validate();
    return v;
}

KappaField transform_kappa(const KappaField& kappa) {
    KappaField out = kappa;
    auto src = kappa.evaluator;
    double at_infinity = kappa.far_value;
    out.evaluator = [src, at_infinity](const Vec3& x) {
        double r2 = x.norm2();
        if (r2 < 1e-300) return at_infinity;  // kappa*(0) = lim kappa at infinity
        return src(x / r2);
    };
    if (kappa.radial && kappa.radial_evaluator) {
        auto rad = kappa.radial_evaluator;
        out.radial_evaluator = [rad, at_infinity](double r) {
            if (r < 1e-300) return at_infinity;
            return rad(1.0 / r);
        };
    }
    // Equality of norms and oscillations under inversion.
    out.inf_value = kappa.inf_value;
    out.sup_value = kappa.sup_value;
    out.far_value = kappa.evaluator(Vec3{});
    out.grad_bound.reset();  // inversion does not preserve the gradient bound
    out.holder.reset();
    return out;
}

double induced_g(const Nonlinearity& f, const Vec3& x, double v) {
    double r = x.norm();
    if (r <= 0.0) throw SingularOrigin("induced_g: x = 0");
    const int n = f.n();
    return std::pow(r, -(n + 2.0)) * f(std::pow(r, n - 2.0) * v);
}

}  // namespace symlab
