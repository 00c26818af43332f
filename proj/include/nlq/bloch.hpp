#pragma once

// Pure-state geometry on the Bloch sphere.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "nlq/errors.hpp"

namespace nlq {

inline constexpr double kInputNormTolerance = 1e-9;
inline constexpr double kInternalNormTolerance = 1e-12;

// Largest n for which s and 2^n fit the 64-bit analytic path.
inline constexpr int kMaxAnalyticBits = 62;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double a) { x *= a; y *= a; z *= a; return *this; }

    friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline constexpr Vec3 kUnitX{1.0, 0.0, 0.0};
inline constexpr Vec3 kUnitY{0.0, 1.0, 0.0};
inline constexpr Vec3 kUnitZ{0.0, 0.0, 1.0};

// Unit 3-vector r = <sigma> of a pure qubit state.
class BlochVector {
public:
    BlochVector() = default;  // |0>, the north pole

    BlochVector(double x, double y, double z) : BlochVector(Vec3{x, y, z}) {}

    // Accepts vectors within kInputNormTolerance of the unit sphere and stores them as given.
    explicit BlochVector(const Vec3& v) : v_(v) {
        if (!(std::abs(norm(v) - 1.0) <= kInputNormTolerance)) {
            throw DomainError("Bloch vector is not unit length (|r| = " + std::to_string(norm(v)) + ")");
        }
    }

    // Radial projection onto the sphere.
    static BlochVector project(const Vec3& v) {
        const double len = norm(v);
        if (!(len > 0.0) || !std::isfinite(len)) {
            throw DomainError("cannot project a zero or non-finite vector onto the Bloch sphere");
        }
        BlochVector r;
        r.v_ = v * (1.0 / len);
        return r;
    }

    double x() const { return v_.x; }
    double y() const { return v_.y; }
    double z() const { return v_.z; }
    const Vec3& vec() const { return v_; }
    operator const Vec3&() const { return v_; }

    friend bool operator==(const BlochVector&, const BlochVector&) = default;

private:
    Vec3 v_{0.0, 0.0, 1.0};
};

// Polar angle theta in [0, pi], azimuth phi in [0, 2 pi). phi is 0 at the poles.
struct SphericalPoint {
    double theta = 0.0;
    double phi = 0.0;
};

inline BlochVector to_bloch(const SphericalPoint& p) {
    const double st = std::sin(p.theta);
    return BlochVector::project({st * std::cos(p.phi), st * std::sin(p.phi), std::cos(p.theta)});
}

inline SphericalPoint to_spherical(const BlochVector& r) {
    const double rho = std::hypot(r.x(), r.y());
    SphericalPoint p;
    p.theta = std::atan2(rho, r.z());
    if (rho == 0.0) {
        p.phi = 0.0;
        return p;
    }
    p.phi = std::atan2(r.y(), r.x());
    if (p.phi < 0.0) p.phi += 2.0 * std::numbers::pi;
    if (p.phi >= 2.0 * std::numbers::pi) p.phi = 0.0;
    return p;
}

inline Vec3 e_theta(const SphericalPoint& p) {
    return {std::cos(p.theta) * std::cos(p.phi), std::cos(p.theta) * std::sin(p.phi), -std::sin(p.theta)};
}

inline Vec3 e_phi(const SphericalPoint& p) { return {-std::sin(p.phi), std::cos(p.phi), 0.0}; }

namespace detail {

inline void check_count_args(std::uint64_t s, int n) {
    if (n < 1 || n > kMaxAnalyticBits) {
        throw DomainError("bit count n = " + std::to_string(n) + " outside [1, " +
                          std::to_string(kMaxAnalyticBits) + "]");
    }
    if (s > (std::uint64_t{1} << n)) {
        throw DomainError("solution count s = " + std::to_string(s) + " exceeds 2^" + std::to_string(n));
    }
}

} // namespace detail

// theta_s = 2 atan(s / (2^n - s)), evaluated as atan2 of the exact integer pair.
inline double theta_of_s(std::uint64_t s, int n) {
    detail::check_count_args(s, n);
    const std::uint64_t total = std::uint64_t{1} << n;
    return 2.0 * std::atan2(static_cast<double>(s), static_cast<double>(total - s));
}

// |psi_s> = ((2^n - s)|0> + s|1>) / norm, the postselected ancilla.
struct EncodedState {
    std::uint64_t s = 0;
    int n = 1;
    double theta_s = 0.0;
    double amplitude0 = 1.0;  // cos(theta_s / 2)
    double amplitude1 = 0.0;  // sin(theta_s / 2)
    BlochVector bloch;
};

inline EncodedState encode_state(std::uint64_t s, int n) {
    EncodedState e;
    e.s = s;
    e.n = n;
    e.theta_s = theta_of_s(s, n);
    const double a = static_cast<double>((std::uint64_t{1} << n) - s);
    const double b = static_cast<double>(s);
    const double len = std::hypot(a, b);
    e.amplitude0 = a / len;
    e.amplitude1 = b / len;
    e.bloch = BlochVector::project({std::sin(e.theta_s), 0.0, std::cos(e.theta_s)});
    return e;
}

// R_y(gamma) = exp(-i gamma sigma_y / 2) acting on the Bloch vector; (0,0,1) -> (sin g, 0, cos g).
inline BlochVector rotate_y(const BlochVector& r, double gamma) {
    const double c = std::cos(gamma);
    const double s = std::sin(gamma);
    return BlochVector::project({c * r.x() + s * r.z(), r.y(), -s * r.x() + c * r.z()});
}

// Euclidean chord |a - b|, equal to the trace norm ||rho_a - rho_b||_1 for pure qubit states.
inline double bloch_distance(const BlochVector& a, const BlochVector& b) { return norm(a.vec() - b.vec()); }

} // namespace nlq
