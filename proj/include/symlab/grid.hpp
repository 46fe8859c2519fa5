#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "symlab/envelope.hpp"
#include "symlab/errors.hpp"
#include "symlab/field.hpp"
#include "symlab/geometry.hpp"

namespace symlab {

// Uniform node lattice: node (i,j,k) sits at origin + spacing * (i,j,k).
struct GridSpec {
    std::array<int, 3> shape{2, 2, 2};
    Vec3 origin{};
    double spacing = 1.0;

    std::size_t size() const {
        return static_cast<std::size_t>(shape[0]) * shape[1] * shape[2];
    }
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * shape[1] + j) * shape[2] + k;
    }
    Vec3 node(int i, int j, int k) const {
        return {origin.x + spacing * i, origin.y + spacing * j, origin.z + spacing * k};
    }
    Vec3 max_corner() const {
        return {origin.x + spacing * (shape[0] - 1), origin.y + spacing * (shape[1] - 1),
                origin.z + spacing * (shape[2] - 1)};
    }
    bool inside(const Vec3& x) const {
        Vec3 hi = max_corner();
        return x.x >= origin.x && x.x <= hi.x && x.y >= origin.y && x.y <= hi.y &&
               x.z >= origin.z && x.z <= hi.z;
    }

    // Centered cube of given half-width containing `cells` cells per axis.
    static GridSpec centered_cube(double half_width, int cells) {
        GridSpec s;
        s.shape = {cells + 1, cells + 1, cells + 1};
        s.spacing = 2.0 * half_width / cells;
        s.origin = {-half_width, -half_width, -half_width};
        return s;
    }

    // Radius of the largest ball about `c` covered by the node-cell union
    // (box inflated by half a cell). Grid samples inside this ball own the
    // quadrature; an analytic tail owns the rest.
    double tail_split_radius(const Vec3& c) const {
        Vec3 lo = origin, hi = max_corner();
        double h2 = 0.5 * spacing;
        double r = hi.x + h2 - c.x;
        r = std::min(r, c.x - (lo.x - h2));
        r = std::min(r, hi.y + h2 - c.y);
        r = std::min(r, c.y - (lo.y - h2));
        r = std::min(r, hi.z + h2 - c.z);
        r = std::min(r, c.z - (lo.z - h2));
        return std::max(r, 0.0);
    }
};

// Sampled scalar field with trilinear interpolation inside the box and an
// optional power-law tail outside. Immutable after construction; safe to
// share across threads.
class GridField : public Field {
public:
    GridField(GridSpec spec, std::vector<double> values,
              std::optional<DecayEnvelope> tail = std::nullopt);

    // Trilinear inside the box, tail evaluation outside when declared.
    // Throws OutsideDomain otherwise.
    double value(const Vec3& x) const override;

    double sample(int i, int j, int k) const { return values_[spec_.index(i, j, k)]; }
    const std::vector<double>& values() const { return values_; }
    const GridSpec& spec() const { return spec_; }
    double spacing() const { return spec_.spacing; }
    const std::optional<DecayEnvelope>& tail() const { return tail_; }
    int dim() const { return 3; }

    GridField with_tail(DecayEnvelope env) const { return GridField(spec_, values_, env); }
    GridField with_values(std::vector<double> v) const { return GridField(spec_, std::move(v), tail_); }

private:
    GridSpec spec_;
    std::vector<double> values_;
    std::optional<DecayEnvelope> tail_;
};

// o(x) = field(x^{omega,lambda}) at every node, by interpolated lookup.
GridField reflect(const GridField& field, const HalfSpace& plane);

// o(x) = field(center + R (x - center)). Requires |det R - 1| <= 1e-10.
GridField rotate(const GridField& field, const Vec3& center, const Mat3& rotation);

// Evaluates an arbitrary field on a lattice.
GridField sample_to_grid(const Field& f, const GridSpec& spec,
                         std::optional<DecayEnvelope> tail = std::nullopt);

// Least-squares power-law tail fit on the outermost node shells:
// u * r^a ~ c (1 + b / r^2) with a fixed. Used for decay-matched boundary
// conditions and tail-completed norms.
DecayEnvelope fit_envelope(const GridField& field, double exponent, const Vec3& center = {},
                           int shells = 2);

// Log-log slope fit of the decay rate over the outermost shells; returns the
// fitted exponent (no correction term).
double fit_tail_exponent(const GridField& field, const Vec3& center = {}, int shells = 4);

}  // namespace symlab
