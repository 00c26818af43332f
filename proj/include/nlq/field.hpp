#pragma once

// Inverse design on the Bloch sphere: velocity fields v, u-fields with v = u x r, the induced
// mean-field Hamiltonians, and the intrinsic surface operators div_S and curl_S.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "nlq/bloch.hpp"
#include "nlq/errors.hpp"
#include "nlq/models.hpp"

namespace nlq {

inline constexpr std::size_t kValidationGridSize = 1000;
inline constexpr double kPoleGuard = 0.05;
inline constexpr double kSurfaceStep = 1e-5;
inline constexpr double kTangencyTolerance = 1e-10;

using VectorFieldFn = std::function<Vec3(const BlochVector&)>;
using ScalarFieldFn = std::function<double(const BlochVector&)>;

// Evaluators must be pure: grid checks may call them concurrently.
struct TangentField {
    VectorFieldFn eval;
    std::string label;

    Vec3 operator()(const BlochVector& r) const { return eval(r); }
};

struct UField {
    VectorFieldFn eval;
    std::string label;
    std::string gauge;  // description of any radial component, empty when purely tangential

    Vec3 operator()(const BlochVector& r) const { return eval(r); }
};

// Fibonacci lattice on the unit sphere.
inline std::vector<BlochVector> fibonacci_grid(std::size_t count = kValidationGridSize) {
    std::vector<BlochVector> grid;
    grid.reserve(count);
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
        const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(count);
        const double rho = std::sqrt((1.0 - z) * (1.0 + z));
        const double phi = golden_angle * static_cast<double>(i);
        grid.push_back(BlochVector::project({rho * std::cos(phi), rho * std::sin(phi), z}));
    }
    return grid;
}

// The Fibonacci lattice minus the pole guard bands, in spherical coordinates.
inline std::vector<SphericalPoint> spherical_grid(std::size_t count = kValidationGridSize) {
    std::vector<SphericalPoint> out;
    for (const auto& r : fibonacci_grid(count)) {
        const auto p = to_spherical(r);
        if (p.theta >= kPoleGuard && p.theta <= std::numbers::pi - kPoleGuard) out.push_back(p);
    }
    return out;
}

inline double max_tangency_residual(const VectorFieldFn& f, const std::vector<BlochVector>& grid) {
    double worst = 0.0;
    for (const auto& r : grid) worst = std::max(worst, std::abs(dot(f(r), r.vec())));
    return worst;
}

// u = r x v. Rejects fields that are not tangential on the validation grid.
inline UField u_from_v(const TangentField& v) {
    const auto grid = fibonacci_grid();
    double scale = 1.0;
    for (const auto& r : grid) scale = std::max(scale, norm(v(r)));
    const double residual = max_tangency_residual(v.eval, grid);
    if (residual > kTangencyTolerance * scale) {
        throw DomainError("velocity field '" + v.label + "' is not tangential (max |v.r| = " +
                          std::to_string(residual) + ")");
    }
    return {[f = v.eval](const BlochVector& r) { return cross(r.vec(), f(r)); }, "u from " + v.label, ""};
}

// v = u x r; radial parts of u drop out.
inline TangentField v_from_u(const UField& u) {
    return {[f = u.eval](const BlochVector& r) { return cross(f(r), r.vec()); }, "v from " + u.label};
}

// u + lambda(r) r. Leaves v unchanged.
inline UField with_radial_gauge(const UField& u, ScalarFieldFn lambda, std::string description) {
    UField out;
    out.eval = [f = u.eval, lam = std::move(lambda)](const BlochVector& r) { return f(r) + lam(r) * r.vec(); };
    out.label = u.label;
    out.gauge = u.gauge.empty() ? description : u.gauge + " + " + description;
    return out;
}

inline TangentField tangent_field(const NonlinearModel& m) {
    return {[m](const BlochVector& r) { return velocity(m, r.vec()); }, std::string(model_name(m))};
}

// The model's own u-field; for torsion it carries a radial part.
inline UField u_field(const NonlinearModel& m) {
    const bool radial = std::holds_alternative<TorsionModel>(m);
    return {[m](const BlochVector& r) { return u_field(m, r.vec()); }, std::string(model_name(m)),
            radial ? "radial component 2(Bx + gz^2)" : ""};
}

// ---------------------------------------------------------------------------------------------
// Hamiltonians

using Spinor = std::array<std::complex<double>, 2>;
using Matrix2 = std::array<std::array<std::complex<double>, 2>, 2>;

// H(r) = (hx sx + hy sy + hz sz) / 2 with (hx, hy, hz) = u(r).
struct HamiltonianCoefficients {
    UField u;

    Vec3 at(const BlochVector& r) const { return u(r); }

    Matrix2 matrix(const BlochVector& r) const {
        const Vec3 h = at(r);
        using C = std::complex<double>;
        return {{{C(0.5 * h.z, 0.0), C(0.5 * h.x, -0.5 * h.y)},
                 {C(0.5 * h.x, 0.5 * h.y), C(-0.5 * h.z, 0.0)}}};
    }

    // <H> = u . r / 2; the conserved energy only when u is uniform.
    double expectation(const BlochVector& r) const { return 0.5 * dot(at(r), r.vec()); }
};

inline HamiltonianCoefficients hamiltonian_from_u(const UField& u) { return {u}; }

inline BlochVector bloch_of(const Spinor& psi) {
    const auto cross_term = std::conj(psi[0]) * psi[1];
    return BlochVector::project(
        {2.0 * cross_term.real(), 2.0 * cross_term.imag(), std::norm(psi[0]) - std::norm(psi[1])});
}

inline Spinor spinor_of(const BlochVector& r) {
    const auto p = to_spherical(r);
    return {std::complex<double>(std::cos(0.5 * p.theta), 0.0),
            std::polar(std::sin(0.5 * p.theta), p.phi)};
}

inline Spinor apply(const Matrix2& m, const Spinor& psi) {
    return {m[0][0] * psi[0] + m[0][1] * psi[1], m[1][0] * psi[0] + m[1][1] * psi[1]};
}

// exp(-i H dt) psi for H = h . sigma / 2 frozen at h.
inline Spinor evolve_frozen(const Vec3& h, const Spinor& psi, double dt) {
    const double w = norm(h);
    if (w == 0.0) return psi;
    const double c = std::cos(0.5 * w * dt);
    const double s = std::sin(0.5 * w * dt) / w;
    using C = std::complex<double>;
    const C i(0.0, 1.0);
    const Matrix2 u{{{C(c, 0.0) - i * s * h.z, -i * s * C(h.x, -h.y)},
                     {-i * s * C(h.x, h.y), C(c, 0.0) + i * s * h.z}}};
    return apply(u, psi);
}

// ---------------------------------------------------------------------------------------------
// Intrinsic surface operators (central differences, step kSurfaceStep)

namespace detail {

inline void check_guard(const SphericalPoint& p) {
    if (!(p.theta >= kPoleGuard && p.theta <= std::numbers::pi - kPoleGuard)) {
        throw DomainError("surface operator evaluated within the pole guard band (theta = " +
                          std::to_string(p.theta) + ")");
    }
}

inline double theta_component(const VectorFieldFn& f, double theta, double phi) {
    const SphericalPoint p{theta, phi};
    return dot(f(to_bloch(p)), e_theta(p));
}

inline double phi_component(const VectorFieldFn& f, double theta, double phi) {
    const SphericalPoint p{theta, phi};
    return dot(f(to_bloch(p)), e_phi(p));
}

} // namespace detail

// div_S v = (1/sin t) [d_t (v_t sin t) + d_p v_p]
inline double div_s(const TangentField& v, const SphericalPoint& p) {
    detail::check_guard(p);
    const double h = kSurfaceStep;
    const double t = p.theta;
    const double d_theta = (detail::theta_component(v.eval, t + h, p.phi) * std::sin(t + h) -
                            detail::theta_component(v.eval, t - h, p.phi) * std::sin(t - h)) /
                           (2.0 * h);
    const double d_phi =
        (detail::phi_component(v.eval, t, p.phi + h) - detail::phi_component(v.eval, t, p.phi - h)) / (2.0 * h);
    return (d_theta + d_phi) / std::sin(t);
}

// curl_S u = e_r . (curl u) = (1/sin t) [d_t (u_p sin t) - d_p u_t]
inline double curl_s(const UField& u, const SphericalPoint& p) {
    detail::check_guard(p);
    const double h = kSurfaceStep;
    const double t = p.theta;
    const double d_theta = (detail::phi_component(u.eval, t + h, p.phi) * std::sin(t + h) -
                            detail::phi_component(u.eval, t - h, p.phi) * std::sin(t - h)) /
                           (2.0 * h);
    const double d_phi =
        (detail::theta_component(u.eval, t, p.phi + h) - detail::theta_component(u.eval, t, p.phi - h)) /
        (2.0 * h);
    return (d_theta - d_phi) / std::sin(t);
}

// max over the grid of |div_S v - curl_S u|.
inline double check_div_curl_identity(const NonlinearModel& m, const std::vector<SphericalPoint>& grid) {
    const auto v = tangent_field(m);
    const auto u = u_field(m);
    double worst = 0.0;
    for (const auto& p : grid) worst = std::max(worst, std::abs(div_s(v, p) - curl_s(u, p)));
    return worst;
}

inline double check_div_curl_identity(const NonlinearModel& m) {
    return check_div_curl_identity(m, spherical_grid());
}

struct GridDiagnostic {
    double theta = 0.0;
    double phi = 0.0;
    double div_v = 0.0;
    double curl_u = 0.0;
    double tangency_residual = 0.0;
};

inline std::vector<GridDiagnostic> grid_diagnostics(const NonlinearModel& m) {
    const auto v = tangent_field(m);
    const auto u = u_field(m);
    std::vector<GridDiagnostic> rows;
    for (const auto& p : spherical_grid()) {
        const auto r = to_bloch(p);
        rows.push_back({p.theta, p.phi, div_s(v, p), curl_s(u, p), std::abs(dot(v(r), r.vec()))});
    }
    return rows;
}

// Conserved energy. Only the torsion model has one among the built-ins.
inline double energy(const NonlinearModel& m, const BlochVector& r) {
    if (const auto* torsion = std::get_if<TorsionModel>(&m)) return torsion->energy(r.vec());
    throw UnsupportedModelError("model '" + std::string(model_name(m)) + "' has no conserved energy");
}

// max over the grid of |v_from_u(u) - v_from_u(u + lambda r)|; zero up to rounding.
inline double gauge_invariance_check(const UField& u, const ScalarFieldFn& lambda) {
    const auto v_plain = v_from_u(u);
    const auto v_gauged = v_from_u(with_radial_gauge(u, lambda, "lambda(r) r"));
    double worst = 0.0;
    for (const auto& r : fibonacci_grid()) worst = std::max(worst, norm(v_plain(r) - v_gauged(r)));
    return worst;
}

} // namespace nlq
