#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "symlab/grid.hpp"

namespace symlab {

// Integration region for norms and energies.
struct Region {
    enum class Kind { All, Box, HalfSpace, Annulus } kind = Kind::All;
    std::optional<symlab::HalfSpace> plane;
    Vec3 center{};
    double r_inner = 0.0, r_outer = 0.0;

    static Region all() { return {}; }
    static Region box() { return {Kind::Box, std::nullopt, {}, 0, 0}; }
    static Region half_space(const symlab::HalfSpace& hs) {
        return {Kind::HalfSpace, hs, {}, 0, 0};
    }
    static Region annulus(const Vec3& c, double r1, double r2) {
        return {Kind::Annulus, std::nullopt, c, r1, r2};
    }
};

// L^p norm over the region: midpoint sums on the node lattice plus the
// analytic envelope tail. Throws DivergentTail when exponent * p <= n.
double lp_norm(const GridField& field, double p, const Region& region = Region::all());

// Same machinery for the integral of a pointwise transform g(u) (the weak-form
// integrals need kappa(x) g(u(x)) with a matching tail model).
double integral(const GridField& field, const std::function<double(const Vec3&, double)>& integrand,
                const std::function<double(double)>& tail_integrand,
                const Region& region = Region::all());

// Central-difference gradient at a node (one-sided on faces).
Vec3 gradient_at(const GridField& field, int i, int j, int k);

// Gradient as three sampled component fields. Convenience for small grids.
std::array<GridField, 3> gradient(const GridField& field);

// Dirichlet energy: squared L^2 norm of |grad u| over the region, with the
// gradient envelope (one power faster decay) completing the tail.
double dirichlet_energy(const GridField& field, const Region& region = Region::all());

// (max, min) of the field over a Fibonacci point set on the sphere.
std::pair<double, double> sphere_oscillation(const Field& field, const Vec3& center, double radius,
                                             int samples = 512);

// Radius of the ball about `center` holding the given fraction of the
// integral of u^{p}. Used to size moving-plane scan ranges.
double mass_radius(const GridField& field, double p, double fraction = 0.99,
                   const Vec3& center = {});

}  // namespace symlab
