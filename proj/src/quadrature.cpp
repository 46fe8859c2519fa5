#include "symlab/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "symlab/util.hpp"

namespace symlab {

namespace {

// Weight of a node in the region's grid part, in units of the cell volume.
// The All/HalfSpace kinds keep only nodes inside the tail-split ball, so the
// grid part and the analytic tail partition space without overlap. Cells cut
// by a half-space boundary contribute their straddling fraction; otherwise a
// node plane sitting exactly on the hyperplane would be lost.
struct RegionSampler {
    const GridSpec& spec;
    const Region& region;
    Vec3 tail_center;
    double split_radius;  // 0 when the field has no tail
    bool has_tail;

    double weight(const Vec3& x) const {
        switch (region.kind) {
            case Region::Kind::Box:
                return 1.0;
            case Region::Kind::All:
                return (!has_tail || (x - tail_center).norm() <= split_radius) ? 1.0 : 0.0;
            case Region::Kind::HalfSpace: {
                if (has_tail && (x - tail_center).norm() > split_radius) return 0.0;
                double frac = 0.5 + region.plane->coordinate(x) / spec.spacing;
                return std::clamp(frac, 0.0, 1.0);
            }
            case Region::Kind::Annulus: {
                double r = (x - region.center).norm();
                if (r < region.r_inner || r > region.r_outer) return 0.0;
                return (!has_tail || (x - tail_center).norm() <= split_radius) ? 1.0 : 0.0;
            }
        }
        return 0.0;
    }
};

RegionSampler make_sampler(const GridField& field, const Region& region) {
    RegionSampler s{field.spec(), region, {}, 0.0, field.tail().has_value()};
    if (s.has_tail) {
        s.tail_center = field.tail()->center;
        s.split_radius = field.spec().tail_split_radius(s.tail_center);
    }
    return s;
}

double grid_part(const GridField& field, const RegionSampler& sampler,
                 const std::function<double(const Vec3&, double)>& integrand) {
    const GridSpec& s = field.spec();
    const int ny = s.shape[1], nz = s.shape[2];
    const double cell = s.spacing * s.spacing * s.spacing;
    return cell * parallel_sum(s.size(), [&](std::size_t begin, std::size_t end) {
        KahanSum acc;
        for (std::size_t idx = begin; idx < end; ++idx) {
            int i = static_cast<int>(idx / (static_cast<std::size_t>(ny) * nz));
            int rem = static_cast<int>(idx % (static_cast<std::size_t>(ny) * nz));
            int j = rem / nz, k = rem % nz;
            Vec3 x = s.node(i, j, k);
            double w = sampler.weight(x);
            if (w == 0.0) continue;
            acc.add(w * integrand(x, field.values()[idx]));
        }
        return acc.value();
    });
}

// Analytic tail of the region beyond the split ball. tail_integrand gives the
// pointwise integrand value from the envelope model value u(r); angular
// fractions handle half spaces.
double tail_part(const GridField& field, const Region& region, const RegionSampler& sampler,
                 const std::function<double(double)>& tail_integrand) {
    if (!sampler.has_tail) return 0.0;
    const DecayEnvelope& env = *field.tail();
    const double R = sampler.split_radius;
    const int n = 3;
    const double omega = sphere_area(n);
    switch (region.kind) {
        case Region::Kind::Box:
            return 0.0;
        case Region::Kind::All:
            return omega * radial_tail_integral(
                               [&](double r) {
                                   return tail_integrand(env.value(r)) * std::pow(r, n - 1);
                               },
                               R);
        case Region::Kind::HalfSpace: {
            // Fraction of the sphere of radius r in the half space; the plane
            // offset is taken relative to the tail center. The cap fraction
            // has a kink at r = |lam|, so integrate the two sides separately
            // (an adaptive rule probing only r >= R can miss a far cap).
            double lam = region.plane->lambda - region.plane->omega.dot(sampler.tail_center);
            auto integrand = [&](double r) {
                double frac = cap_fraction(std::clamp(lam / r, -1.0, 1.0), n);
                return frac * tail_integrand(env.value(r)) * std::pow(r, n - 1);
            };
            double kink = std::abs(lam);
            if (kink <= R) return omega * radial_tail_integral(integrand, R);
            double inner = 0.0;
            if (lam < 0.0)  // whole spheres until the cap starts shrinking
                inner = adaptive_simpson(
                    [&](double r) { return tail_integrand(env.value(r)) * std::pow(r, n - 1); },
                    R, kink);
            return omega * (inner + radial_tail_integral(integrand, kink));
        }
        case Region::Kind::Annulus: {
            // Only the concentric case carries a meaningful analytic tail.
            if ((region.center - sampler.tail_center).norm() > 1e-9) return 0.0;
            double lo = std::max(region.r_inner, R);
            double hi = region.r_outer;
            if (hi <= lo) return 0.0;
            return omega * adaptive_simpson(
                               [&](double r) {
                                   return tail_integrand(env.value(r)) * std::pow(r, n - 1);
                               },
                               lo, hi);
        }
    }
    return 0.0;
}

void check_convergence(const GridField& field, double p) {
    if (!field.tail()) return;
    if (field.tail()->exponent * p <= 3.0 + 1e-12)
        throw DivergentTail("lp_norm: tail exponent " + std::to_string(field.tail()->exponent) +
                            " times p " + std::to_string(p) + " does not exceed n = 3");
}

}  // namespace

double lp_norm(const GridField& field, double p, const Region& region) {
    check_convergence(field, p);
    RegionSampler sampler = make_sampler(field, region);
    auto node = [p](const Vec3&, double u) { return std::pow(std::abs(u), p); };
    auto tail = [p](double u) { return std::pow(std::abs(u), p); };
    double total = grid_part(field, sampler, node) + tail_part(field, region, sampler, tail);
    return std::pow(std::max(total, 0.0), 1.0 / p);
}

double integral(const GridField& field, const std::function<double(const Vec3&, double)>& integrand,
                const std::function<double(double)>& tail_integrand, const Region& region) {
    RegionSampler sampler = make_sampler(field, region);
    return grid_part(field, sampler, integrand) +
           tail_part(field, region, sampler, tail_integrand);
}

Vec3 gradient_at(const GridField& field, int i, int j, int k) {
    const GridSpec& s = field.spec();
    const double h = s.spacing;
    auto diff = [&](int axis) {
        int n = s.shape[axis];
        int c[3] = {i, j, k};
        auto at = [&](int v) {
            int q[3] = {i, j, k};
            q[axis] = v;
            return field.sample(q[0], q[1], q[2]);
        };
        int a = c[axis];
        if (a == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
        if (a == n - 1) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
        return (at(a + 1) - at(a - 1)) / (2.0 * h);
    };
    return {diff(0), diff(1), diff(2)};
}

std::array<GridField, 3> gradient(const GridField& field) {
    const GridSpec& s = field.spec();
    std::array<std::vector<double>, 3> comp;
    for (auto& c : comp) c.resize(s.size());
    const int ny = s.shape[1], nz = s.shape[2];
    parallel_for(s.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            int i = static_cast<int>(idx / (static_cast<std::size_t>(ny) * nz));
            int rem = static_cast<int>(idx % (static_cast<std::size_t>(ny) * nz));
            int j = rem / nz, k = rem % nz;
            Vec3 g = gradient_at(field, i, j, k);
            comp[0][idx] = g.x;
            comp[1][idx] = g.y;
            comp[2][idx] = g.z;
        }
    });
    return {GridField(s, std::move(comp[0])), GridField(s, std::move(comp[1])),
            GridField(s, std::move(comp[2]))};
}

double dirichlet_energy(const GridField& field, const Region& region) {
    if (field.tail() && field.tail()->exponent + 1.0 <= 1.5 + 1e-12)
        throw DivergentTail("dirichlet_energy: gradient tail does not converge");
    RegionSampler sampler = make_sampler(field, region);
    const GridSpec& s = field.spec();
    const int ny = s.shape[1], nz = s.shape[2];
    const double cell = s.spacing * s.spacing * s.spacing;
    double box = cell * parallel_sum(s.size(), [&](std::size_t begin, std::size_t end) {
        KahanSum acc;
        for (std::size_t idx = begin; idx < end; ++idx) {
            int i = static_cast<int>(idx / (static_cast<std::size_t>(ny) * nz));
            int rem = static_cast<int>(idx % (static_cast<std::size_t>(ny) * nz));
            int j = rem / nz, k = rem % nz;
            Vec3 x = s.node(i, j, k);
            double w = sampler.weight(x);
            if (w == 0.0) continue;
            acc.add(w * gradient_at(field, i, j, k).norm2());
        }
        return acc.value();
    });
    double tail = 0.0;
    if (sampler.has_tail && region.kind != Region::Kind::Box) {
        const DecayEnvelope& env = *field.tail();
        double R = sampler.split_radius;
        auto integrand = [&](double r) { return env.slope(r) * env.slope(r) * r * r; };
        double omega = sphere_area(3);
        if (region.kind == Region::Kind::All) {
            tail = omega * radial_tail_integral(integrand, R);
        } else if (region.kind == Region::Kind::HalfSpace) {
            double lam = region.plane->lambda - region.plane->omega.dot(sampler.tail_center);
            auto capped = [&](double r) {
                return cap_fraction(std::clamp(lam / r, -1.0, 1.0), 3) * integrand(r);
            };
            double kink = std::abs(lam);
            if (kink <= R) {
                tail = omega * radial_tail_integral(capped, R);
            } else {
                double inner = lam < 0.0 ? adaptive_simpson(integrand, R, kink) : 0.0;
                tail = omega * (inner + radial_tail_integral(capped, kink));
            }
        }
    }
    return box + tail;
}

std::pair<double, double> sphere_oscillation(const Field& field, const Vec3& center, double radius,
                                             int samples) {
    if (samples < 32) throw Error("sphere_oscillation: need at least 32 samples");
    auto pts = fibonacci_sphere(samples);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Vec3& p : pts) {
        double v = field.value(center + p * radius);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {hi, lo};
}

double mass_radius(const GridField& field, double p, double fraction, const Vec3& center) {
    const GridSpec& s = field.spec();
    const int nx = s.shape[0], ny = s.shape[1], nz = s.shape[2];
    double rmax = 0.0;
    std::vector<std::pair<double, double>> shells;  // (radius, mass)
    shells.reserve(s.size());
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            for (int k = 0; k < nz; ++k) {
                Vec3 x = s.node(i, j, k) - center;
                double r = x.norm();
                double m = std::pow(std::abs(field.sample(i, j, k)), p);
                shells.emplace_back(r, m);
                rmax = std::max(rmax, r);
            }
    std::sort(shells.begin(), shells.end());
    double total = 0.0;
    for (auto& sm : shells) total += sm.second;
    if (total <= 0.0) return 0.0;
    double acc = 0.0;
    for (auto& sm : shells) {
        acc += sm.second;
        if (acc >= fraction * total) return sm.first;
    }
    return rmax;
}

}  // namespace symlab
