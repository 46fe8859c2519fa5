#include "symlab/grid.hpp"

#include <algorithm>
#include <cmath>

#include "symlab/util.hpp"

namespace symlab {

GridField::GridField(GridSpec spec, std::vector<double> values, std::optional<DecayEnvelope> tail)
    : spec_(spec), values_(std::move(values)), tail_(tail) {
    if (spec_.shape[0] < 2 || spec_.shape[1] < 2 || spec_.shape[2] < 2)
        throw Error("GridField: need at least two nodes per axis");
    if (spec_.spacing <= 0.0) throw Error("GridField: spacing must be positive");
    if (values_.size() != spec_.size())
        throw Error("GridField: value count does not match shape");
    for (double v : values_)
        if (!std::isfinite(v)) throw Error("GridField: non-finite sample");
}

double GridField::value(const Vec3& x) const {
    const double h = spec_.spacing;
    double fx = (x.x - spec_.origin.x) / h;
    double fy = (x.y - spec_.origin.y) / h;
    double fz = (x.z - spec_.origin.z) / h;
    const int nx = spec_.shape[0], ny = spec_.shape[1], nz = spec_.shape[2];
    if (fx < 0.0 || fy < 0.0 || fz < 0.0 || fx > nx - 1 || fy > ny - 1 || fz > nz - 1) {
        if (tail_) return tail_->value_at(x);
        throw OutsideDomain("GridField::value: point outside box and no tail declared");
    }
    int i = std::min(static_cast<int>(fx), nx - 2);
    int j = std::min(static_cast<int>(fy), ny - 2);
    int k = std::min(static_cast<int>(fz), nz - 2);
    double tx = fx - i, ty = fy - j, tz = fz - k;
    const double* v = values_.data();
    auto at = [&](int a, int b, int c) { return v[spec_.index(a, b, c)]; };
    double c00 = at(i, j, k) * (1 - tx) + at(i + 1, j, k) * tx;
    double c10 = at(i, j + 1, k) * (1 - tx) + at(i + 1, j + 1, k) * tx;
    double c01 = at(i, j, k + 1) * (1 - tx) + at(i + 1, j, k + 1) * tx;
    double c11 = at(i, j + 1, k + 1) * (1 - tx) + at(i + 1, j + 1, k + 1) * tx;
    double c0 = c00 * (1 - ty) + c10 * ty;
    double c1 = c01 * (1 - ty) + c11 * ty;
    return c0 * (1 - tz) + c1 * tz;
}

namespace {

GridField map_nodes(const GridField& field, const std::function<Vec3(const Vec3&)>& pre,
                    std::optional<DecayEnvelope> tail) {
    const GridSpec& s = field.spec();
    std::vector<double> out(s.size());
    const int ny = s.shape[1], nz = s.shape[2];
    parallel_for(s.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            int i = static_cast<int>(idx / (static_cast<std::size_t>(ny) * nz));
            int rem = static_cast<int>(idx % (static_cast<std::size_t>(ny) * nz));
            int j = rem / nz, k = rem % nz;
            out[idx] = field.value(pre(s.node(i, j, k)));
        }
    });
    return GridField(s, std::move(out), tail);
}

}  // namespace

GridField reflect(const GridField& field, const HalfSpace& plane) {
    std::optional<DecayEnvelope> tail = field.tail();
    if (tail) tail->center = plane.reflect(tail->center);
    return map_nodes(field, [&](const Vec3& x) { return plane.reflect(x); }, tail);
}

GridField rotate(const GridField& field, const Vec3& center, const Mat3& rotation) {
    if (std::abs(rotation.det() - 1.0) > 1e-10)
        throw Error("rotate: matrix is not a rotation (det != 1)");
    std::optional<DecayEnvelope> tail = field.tail();
    if (tail) tail->center = center + rotation.apply(tail->center - center);
    return map_nodes(
        field, [&](const Vec3& x) { return center + rotation.apply(x - center); }, tail);
}

GridField sample_to_grid(const Field& f, const GridSpec& spec, std::optional<DecayEnvelope> tail) {
    std::vector<double> out(spec.size());
    const int ny = spec.shape[1], nz = spec.shape[2];
    parallel_for(spec.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            int i = static_cast<int>(idx / (static_cast<std::size_t>(ny) * nz));
            int rem = static_cast<int>(idx % (static_cast<std::size_t>(ny) * nz));
            int j = rem / nz, k = rem % nz;
            out[idx] = f.value(spec.node(i, j, k));
        }
    });
    return GridField(spec, std::move(out), tail);
}

DecayEnvelope fit_envelope(const GridField& field, double exponent, const Vec3& center,
                           int shells) {
    const GridSpec& s = field.spec();
    const int nx = s.shape[0], ny = s.shape[1], nz = s.shape[2];
    shells = std::min({shells, nx / 2, ny / 2, nz / 2});
    // Linear LS of u r^a = c + (c b) / r^2 over the outer shells.
    double s11 = 0, s12 = 0, s22 = 0, t1 = 0, t2 = 0;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            for (int k = 0; k < nz; ++k) {
                int d = std::min({i, j, k, nx - 1 - i, ny - 1 - j, nz - 1 - k});
                if (d >= shells) continue;
                Vec3 x = s.node(i, j, k) - center;
                double r = x.norm();
                if (r < 1e-12) continue;
                double y = field.sample(i, j, k) * std::pow(r, exponent);
                double w = 1.0 / (r * r);
                s11 += 1.0;
                s12 += w;
                s22 += w * w;
                t1 += y;
                t2 += w * y;
            }
    DecayEnvelope env;
    env.exponent = exponent;
    env.center = center;
    double det = s11 * s22 - s12 * s12;
    if (std::abs(det) < 1e-30) {
        env.coefficient = s11 > 0 ? t1 / s11 : 0.0;
    } else {
        double c = (t1 * s22 - t2 * s12) / det;
        double cb = (s11 * t2 - s12 * t1) / det;
        env.coefficient = c;
        env.correction = std::abs(c) > 1e-300 ? cb / c : 0.0;
    }
    env.valid_radius = s.tail_split_radius(center);
    return env;
}

double fit_tail_exponent(const GridField& field, const Vec3& center, int shells) {
    const GridSpec& s = field.spec();
    const int nx = s.shape[0], ny = s.shape[1], nz = s.shape[2];
    shells = std::min({shells, nx / 2, ny / 2, nz / 2});
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            for (int k = 0; k < nz; ++k) {
                int d = std::min({i, j, k, nx - 1 - i, ny - 1 - j, nz - 1 - k});
                if (d >= shells) continue;
                Vec3 x = s.node(i, j, k) - center;
                double r = x.norm();
                double u = field.sample(i, j, k);
                if (r < 1e-12 || u <= 0.0) continue;
                double lx = std::log(r), ly = std::log(u);
                sx += lx;
                sy += ly;
                sxx += lx * lx;
                sxy += lx * ly;
                n += 1.0;
            }
    double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-30 || n < 2) throw Error("fit_tail_exponent: degenerate shell data");
    return -(n * sxy - sx * sy) / det;
}

}  // namespace symlab
