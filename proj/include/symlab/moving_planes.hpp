#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symlab/field.hpp"
#include "symlab/grid.hpp"

namespace symlab {

struct Ball {
    Vec3 center{};
    double radius = 0.0;
};

struct ExcessPair {
    double sup = 0.0;
    double l2star = 0.0;
};

// (u - u o reflection)_+ sampled on the half space Sigma_{omega,lambda} minus
// the optional excluded ball; sup over samples plus the L^{2^*} quadrature.
ExcessPair reflect_excess(const Field& u, const GridSpec& lattice, const HalfSpace& plane,
                          const std::optional<Ball>& exclude = std::nullopt);

struct ScanConfig {
    double lambda_min = 0.0;   // scan window; callers size it from the field scale
    double lambda_max = 0.0;
    double coarse_step = 0.0;  // defaults to the lattice spacing
    double refine_to = 0.0;    // bisection bracket target, defaults to h/2
    std::optional<Ball> exclude;
};

struct PlaneScanResult {
    Vec3 omega{};
    std::vector<double> lambda_grid;     // ascending
    std::vector<double> excess_sup;      // per lambda
    std::vector<double> excess_l2star;   // per lambda
    double lambda_star = 0.0;
    double tolerance = 0.0;
    bool monotone = true;  // pass/fail over the scan has a single transition

    std::string to_json() const;
    std::string to_csv() const;  // columns: lambda, sup_excess, l2star_excess
};

// Coarse descending scan, then bisection of the pass/fail boundary down to a
// bracket of width refine_to, then linear interpolation of the excess -
// tolerance crossing inside the final bracket. lambda_star is the smallest
// offset past which the reflected excess stays below tolerance. Throws
// NeverSymmetric when even lambda_max fails.
PlaneScanResult critical_plane(const Field& u, const GridSpec& lattice, const Vec3& omega,
                               double tolerance, const ScanConfig& config);

struct CenterResult {
    Vec3 center{};                     // (lambda*(e_1), lambda*(e_2), lambda*(e_3))
    bool consistency_ok = true;        // lambda*(-e_k) = -lambda*(e_k) within 4h
    double max_mismatch = 0.0;
    std::vector<PlaneScanResult> scans;  // +e1, -e1, +e2, -e2, +e3, -e3
};

// Intersection of the axis-aligned critical hyperplanes, with the +/- omega
// consistency check.
CenterResult approximate_center(const Field& u, const GridSpec& lattice, double tolerance,
                                const ScanConfig& config);

struct SymmetryReport {
    Vec3 center{};
    std::vector<double> radii;
    std::vector<double> oscillation;     // max - min per radius
    double linf_asymmetry = 0.0;         // sup over radii
    double d12_asymmetry = 0.0;          // max over sampled rotations of |grad(u - u_Theta)|_2
    double radial_derivative_max = 0.0;  // sup of the radial derivative about the center
    bool center_box_ok = true;           // center inside [-lambda0, lambda0]^3
    int rotation_samples = 0;

    std::string to_json() const;
};

struct MetricsConfig {
    int rotation_samples = 16;   // axis-angle lattice size (>= 16)
    int sphere_samples = 512;
    std::vector<double> radii;   // empty: automatic [2h, R_domain]
    int radii_count = 24;
    double lambda0 = 0.0;        // center box half width for the check (0: skip)
};

SymmetryReport asymmetry_metrics(const GridField& u, const Vec3& center,
                                 const MetricsConfig& config = {});

// Default scan half-range: radius containing 99% of the mass integral u^{2^*}.
double default_scan_range(const GridField& u);

}  // namespace symlab
