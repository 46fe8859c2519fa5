#include "symlab/moving_planes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "symlab/errors.hpp"
#include "symlab/quadrature.hpp"
#include "symlab/util.hpp"

namespace symlab {

ExcessPair reflect_excess(const Field& u, const GridSpec& lattice, const HalfSpace& plane,
                          const std::optional<Ball>& exclude) {
    const int ny = lattice.shape[1], nz = lattice.shape[2];
    const double cell = std::pow(lattice.spacing, 3);
    const double two_star = 6.0;  // 2n/(n-2) for n = 3
    std::size_t n = lattice.size();
    std::size_t grain = 1 << 14;
    std::size_t chunks = (n + grain - 1) / grain;
    std::vector<double> chunk_sup(chunks, 0.0), chunk_sum(chunks, 0.0);
    parallel_for(
        n,
        [&](std::size_t begin, std::size_t end) {
            double sup = 0.0;
            KahanSum sum;
            for (std::size_t idx = begin; idx < end; ++idx) {
                int i = static_cast<int>(idx / (static_cast<std::size_t>(ny) * nz));
                int rem = static_cast<int>(idx % (static_cast<std::size_t>(ny) * nz));
                Vec3 x = lattice.node(i, rem / nz, rem % nz);
                if (!plane.contains(x)) continue;
                Vec3 xr = plane.reflect(x);
                if (exclude && ((x - exclude->center).norm() <= exclude->radius ||
                                (xr - exclude->center).norm() <= exclude->radius))
                    continue;
                double d = u.value(x) - u.value(xr);
                if (d <= 0.0) continue;
                sup = std::max(sup, d);
                sum.add(std::pow(d, two_star));
            }
            chunk_sup[begin / grain] = sup;
            chunk_sum[begin / grain] = sum.value();
        },
        grain);
    ExcessPair out;
    KahanSum total;
    for (std::size_t c = 0; c < chunks; ++c) {
        out.sup = std::max(out.sup, chunk_sup[c]);
        total.add(chunk_sum[c]);
    }
    out.l2star = std::pow(std::max(total.value(), 0.0) * cell, 1.0 / two_star);
    return out;
}

PlaneScanResult critical_plane(const Field& u, const GridSpec& lattice, const Vec3& omega,
                               double tolerance, const ScanConfig& config) {
    if (tolerance <= 0.0) throw Error("critical_plane: tolerance must be positive");
    double step = config.coarse_step > 0.0 ? config.coarse_step : lattice.spacing;
    double refine = config.refine_to > 0.0 ? config.refine_to : 0.5 * lattice.spacing;
    double lo = config.lambda_min, hi = config.lambda_max;
    if (!(hi > lo)) throw Error("critical_plane: empty scan window");

    PlaneScanResult res;
    res.omega = omega / omega.norm();
    res.tolerance = tolerance;

    auto excess = [&](double lam) {
        return reflect_excess(u, lattice, HalfSpace(res.omega, lam), config.exclude);
    };

    // Coarse scan, recorded ascending.
    int count = static_cast<int>(std::floor((hi - lo) / step)) + 1;
    res.lambda_grid.resize(count);
    res.excess_sup.resize(count);
    res.excess_l2star.resize(count);
    for (int i = 0; i < count; ++i) {
        double lam = lo + i * step;
        ExcessPair e = excess(lam);
        res.lambda_grid[i] = lam;
        res.excess_sup[i] = e.sup;
        res.excess_l2star[i] = e.l2star;
    }

    // Discrete Lambda membership: every scanned mu >= lambda passes.
    std::vector<bool> pass(count);
    for (int i = 0; i < count; ++i) pass[i] = res.excess_sup[i] <= tolerance;
    if (!pass[count - 1])
        throw NeverSymmetric("critical_plane: excess above tolerance at the top of the window");
    int transitions = 0;
    for (int i = 0; i + 1 < count; ++i)
        if (pass[i] != pass[i + 1]) ++transitions;
    res.monotone = transitions <= 1;

    // Smallest grid index whose upper tail passes entirely; non-monotone
    // scans are truncated at the highest failure and flagged above.
    int first_pass = count - 1;
    while (first_pass > 0 && pass[first_pass - 1]) --first_pass;

    if (first_pass == 0) {
        res.lambda_star = lo;  // the whole window is in Lambda
        return res;
    }

    // Bisect the boundary, then interpolate the excess/tolerance crossing.
    double lam_fail = res.lambda_grid[first_pass - 1];
    double lam_pass = res.lambda_grid[first_pass];
    double e_fail = res.excess_sup[first_pass - 1];
    double e_pass = res.excess_sup[first_pass];
    for (int it = 0; it < 60 && (lam_pass - lam_fail) > refine; ++it) {
        double mid = 0.5 * (lam_fail + lam_pass);
        ExcessPair e = excess(mid);
        if (e.sup <= tolerance) {
            lam_pass = mid;
            e_pass = e.sup;
        } else {
            lam_fail = mid;
            e_fail = e.sup;
        }
    }
    if (e_fail > e_pass) {
        double t = (e_fail - tolerance) / (e_fail - e_pass);
        res.lambda_star = lam_fail + t * (lam_pass - lam_fail);
    } else {
        res.lambda_star = 0.5 * (lam_fail + lam_pass);
    }
    return res;
}

CenterResult approximate_center(const Field& u, const GridSpec& lattice, double tolerance,
                                const ScanConfig& config) {
    CenterResult out;
    const double h = lattice.spacing;
    for (int axis = 0; axis < 3; ++axis) {
        Vec3 plus{};
        plus[axis] = 1.0;
        Vec3 minus{};
        minus[axis] = -1.0;
        PlaneScanResult sp = critical_plane(u, lattice, plus, tolerance, config);
        PlaneScanResult sm = critical_plane(u, lattice, minus, tolerance, config);
        out.center[axis] = sp.lambda_star;
        double mismatch = std::abs(sm.lambda_star + sp.lambda_star);
        out.max_mismatch = std::max(out.max_mismatch, mismatch);
        if (mismatch > 4.0 * h) out.consistency_ok = false;
        out.scans.push_back(std::move(sp));
        out.scans.push_back(std::move(sm));
    }
    return out;
}

SymmetryReport asymmetry_metrics(const GridField& u, const Vec3& center,
                                 const MetricsConfig& config) {
    if (config.rotation_samples < 16)
        throw Error("asymmetry_metrics: need at least 16 rotation samples");
    SymmetryReport rep;
    rep.center = center;
    rep.rotation_samples = config.rotation_samples;
    const GridSpec& s = u.spec();
    const double h = s.spacing;

    std::vector<double> radii = config.radii;
    if (radii.empty()) {
        double rmax = s.tail_split_radius(center);
        if (!u.tail()) rmax -= h;  // keep the sphere inside the box
        double rmin = 2.0 * h;
        int m = std::max(2, config.radii_count);
        for (int i = 0; i < m; ++i)
            radii.push_back(rmin + (rmax - rmin) * i / (m - 1));
    }
    rep.radii = radii;
    rep.oscillation.reserve(radii.size());
    for (double r : radii) {
        auto [hi, lo] = sphere_oscillation(u, center, r, config.sphere_samples);
        rep.oscillation.push_back(hi - lo);
        rep.linf_asymmetry = std::max(rep.linf_asymmetry, hi - lo);
    }

    // D^{1,2} distance to sampled rotations about the center. The axis-angle
    // lattice stands in for the paper's sup over all rotations.
    int axes_count = std::max(4, config.rotation_samples / 4);
    std::vector<Vec3> axes = fibonacci_sphere(axes_count);
    std::vector<double> angles{M_PI / 2, M_PI, M_PI / 4, 3 * M_PI / 4};
    int used = 0;
    for (const Vec3& ax : axes) {
        for (double ang : angles) {
            if (used >= config.rotation_samples) break;
            ++used;
            GridField rotated = rotate(u, center, Mat3::axis_angle(ax, ang));
            std::vector<double> diff(u.values().size());
            for (std::size_t i = 0; i < diff.size(); ++i)
                diff[i] = u.values()[i] - rotated.values()[i];
            GridField d(s, std::move(diff));
            // Radial tails agree under rotation about the center, so the
            // difference carries no tail term.
            rep.d12_asymmetry =
                std::max(rep.d12_asymmetry, std::sqrt(dirichlet_energy(d, Region::box())));
        }
    }

    // Radial derivative sup via gradient projection, away from the center.
    const int nx = s.shape[0], ny = s.shape[1], nz = s.shape[2];
    std::size_t grain = 1 << 14;
    std::size_t chunks = (s.size() + grain - 1) / grain;
    std::vector<double> chunk_max(chunks, -1e300);
    parallel_for(
        s.size(),
        [&](std::size_t begin, std::size_t end) {
            double m = -1e300;
            for (std::size_t idx = begin; idx < end; ++idx) {
                int i = static_cast<int>(idx / (static_cast<std::size_t>(ny) * nz));
                int rem = static_cast<int>(idx % (static_cast<std::size_t>(ny) * nz));
                int j = rem / nz, k = rem % nz;
                Vec3 x = s.node(i, j, k) - center;
                double r = x.norm();
                if (r < 2.0 * h) continue;
                Vec3 g = gradient_at(u, i, j, k);
                m = std::max(m, g.dot(x) / r);
            }
            chunk_max[begin / grain] = m;
        },
        grain);
    for (double m : chunk_max) rep.radial_derivative_max = std::max(rep.radial_derivative_max, m);

    if (config.lambda0 > 0.0) {
        rep.center_box_ok = std::abs(center.x) <= config.lambda0 &&
                            std::abs(center.y) <= config.lambda0 &&
                            std::abs(center.z) <= config.lambda0;
    }
    return rep;
}

double default_scan_range(const GridField& u) { return mass_radius(u, 6.0, 0.99); }

std::string PlaneScanResult::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"omega\": [" << omega.x << ", " << omega.y << ", " << omega.z << "], ";
    os << "\"lambda_star\": " << lambda_star << ", \"tolerance\": " << tolerance
       << ", \"monotone\": " << (monotone ? "true" : "false") << ", \"curve\": [";
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        if (i) os << ", ";
        os << "[" << lambda_grid[i] << ", " << excess_sup[i] << ", " << excess_l2star[i] << "]";
    }
    os << "]}";
    return os.str();
}

std::string PlaneScanResult::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "lambda,sup_excess,l2star_excess\n";
    for (std::size_t i = 0; i < lambda_grid.size(); ++i)
        os << lambda_grid[i] << "," << excess_sup[i] << "," << excess_l2star[i] << "\n";
    return os.str();
}

std::string SymmetryReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"center\": [" << center.x << ", " << center.y << ", " << center.z << "], ";
    os << "\"linf_asymmetry\": " << linf_asymmetry << ", \"d12_asymmetry\": " << d12_asymmetry
       << ", \"radial_derivative_max\": " << radial_derivative_max
       << ", \"center_box_ok\": " << (center_box_ok ? "true" : "false")
       << ", \"rotation_samples\": " << rotation_samples << ", \"oscillation_profile\": [";
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (i) os << ", ";
        os << "[" << radii[i] << ", " << oscillation[i] << "]";
    }
    os << "]}";
    return os.str();
}

}  // namespace symlab
