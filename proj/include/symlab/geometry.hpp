#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "symlab/errors.hpp"

namespace symlab {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x; y += o.y; z += o.z;
        return *this;
    }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Row-major 3x3 matrix; enough for the rotations this project needs.
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    Vec3 apply(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    double det() const {
        return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
               m[2] * (m[3] * m[7] - m[4] * m[6]);
    }

    Mat3 transpose() const {
        return Mat3{{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
    }

    static Mat3 identity() { return Mat3{}; }

    // Rodrigues formula; axis need not be normalized.
    static Mat3 axis_angle(Vec3 axis, double angle) {
        double n = axis.norm();
        if (n == 0.0) return identity();
        axis = axis / n;
        double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
        return Mat3{{t * axis.x * axis.x + c, t * axis.x * axis.y - s * axis.z,
                     t * axis.x * axis.z + s * axis.y, t * axis.x * axis.y + s * axis.z,
                     t * axis.y * axis.y + c, t * axis.y * axis.z - s * axis.x,
                     t * axis.x * axis.z - s * axis.y, t * axis.y * axis.z + s * axis.x,
                     t * axis.z * axis.z + c}};
    }
};

// Half-space { x : omega . x > lambda } together with its boundary hyperplane.
struct HalfSpace {
    Vec3 omega;      // unit normal
    double lambda;   // offset

    HalfSpace(Vec3 w, double l) : omega(w), lambda(l) {
        double n = omega.norm();
        if (std::abs(n - 1.0) > 1e-12) {
            if (n == 0.0) throw Error("HalfSpace: zero direction");
            omega = omega / n;
        }
    }

    double coordinate(const Vec3& x) const { return omega.dot(x) - lambda; }
    bool contains(const Vec3& x) const { return coordinate(x) > 0.0; }

    // x + 2 (lambda - omega . x) omega
    Vec3 reflect(const Vec3& x) const { return x + omega * (2.0 * (lambda - omega.dot(x))); }
};

// Quasi-uniform deterministic point set on the unit sphere (golden spiral).
std::vector<Vec3> fibonacci_sphere(int count);

// Uniform direction from a seeded engine.
Vec3 random_unit_vector(std::mt19937_64& rng);

// Surface measure of the unit sphere S^{n-1}.
double sphere_area(int n);

// Fraction of the sphere |x| = r lying in the half-space { omega.x > lambda },
// as a function of t = lambda / r (clamped to [-1, 1]). General n.
double cap_fraction(double t, int n);

}  // namespace symlab
