#include "symlab/geometry.hpp"

#include <cmath>

#include "symlab/util.hpp"

namespace symlab {

std::vector<Vec3> fibonacci_sphere(int count) {
    std::vector<Vec3> pts;
    pts.reserve(count);
    double dz = 2.0 / count;
    double z = -1.0 + 0.5 * dz;
    double dtheta = M_PI * (std::sqrt(5.0) + 1.0);
    double theta = 0.0;
    for (int i = 0; i < count; ++i) {
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        pts.push_back({r * std::cos(theta), r * std::sin(theta), z});
        z += dz;
        theta += dtheta;
    }
    return pts;
}

Vec3 random_unit_vector(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (;;) {
        Vec3 v{gauss(rng), gauss(rng), gauss(rng)};
        double n = v.norm();
        if (n > 1e-12) return v / n;
    }
}

double sphere_area(int n) {
    // 2 pi^{n/2} / Gamma(n/2)
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

double cap_fraction(double t, int n) {
    if (t <= -1.0) return 1.0;
    if (t >= 1.0) return 0.0;
    if (n == 3) return 0.5 * (1.0 - t);
    double e = 0.5 * (n - 3);
    auto w = [e](double s) { return std::pow(1.0 - s * s, e); };
    double num = adaptive_simpson(w, t, 1.0, 1e-12);
    double den = adaptive_simpson(w, -1.0, 1.0, 1e-12);
    return num / den;
}

}  // namespace symlab
