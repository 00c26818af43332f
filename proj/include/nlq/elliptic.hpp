#pragma once

// Complete elliptic integral of the first kind,
//   K(k) = \int_0^{pi/2} dw / sqrt(1 - k^2 sin^2 w),
// via the arithmetic-geometric mean: K(k) = pi / (2 AGM(1, k')), k' = sqrt(1 - k^2).

#include <cmath>
#include <numbers>
#include <string>

#include "nlq/errors.hpp"

namespace nlq {

inline constexpr double kAgmTolerance = 1e-15;

namespace detail {

inline double agm(double a, double b) {
    for (int i = 0; i < 64 && std::abs(a - b) > kAgmTolerance * a; ++i) {
        const double next_a = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = next_a;
    }
    return 0.5 * (a + b);
}

} // namespace detail

// K expressed through the complementary modulus k' in (0, 1]. Accurate as k -> 1 where
// forming 1 - k^2 from k would cancel.
inline double elliptic_K_complement(double kp) {
    if (!(kp > 0.0 && kp <= 1.0)) {
        throw DomainError("complementary modulus must lie in (0, 1], got " + std::to_string(kp));
    }
    return std::numbers::pi / (2.0 * detail::agm(1.0, kp));
}

inline double elliptic_K(double k) {
    if (!(k >= 0.0 && k < 1.0)) {
        throw DomainError("elliptic_K requires 0 <= k < 1, got " + std::to_string(k));
    }
    return elliptic_K_complement(std::sqrt((1.0 - k) * (1.0 + k)));
}

// K(i lambda) = K(lambda / sqrt(1 + lambda^2)) / sqrt(1 + lambda^2), lambda >= 0.
inline double elliptic_K_imaginary(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw DomainError("elliptic_K_imaginary requires finite lambda >= 0");
    }
    // Complement of q = lambda / sqrt(1 + lambda^2) is 1 / sqrt(1 + lambda^2).
    const double qp = 1.0 / std::hypot(1.0, lambda);
    return qp * elliptic_K_complement(qp);
}

} // namespace nlq
