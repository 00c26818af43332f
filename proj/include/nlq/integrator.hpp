#pragma once

// Fixed-step RK4 propagation of dr/dt = v(r) with projection back onto the sphere after each
// step, plus the equivalent wavefunction route dpsi/dt = -i H(psi) psi.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "nlq/bloch.hpp"
#include "nlq/errors.hpp"
#include "nlq/field.hpp"
#include "nlq/models.hpp"

namespace nlq {

inline constexpr double kDefaultStepControl = 1e-10;
inline constexpr double kFixedPointCutoff = 1e-14;  // |v| < cutoff * g stops the run

struct Trajectory {
    std::vector<double> times;
    std::vector<BlochVector> points;
    std::string model;
    std::size_t steps = 0;            // steps of the accepted run
    bool stopped_early = false;       // hit the near-fixed-point cutoff
    double stop_time = 0.0;           // time of the last point
    double max_norm_correction = 0.0; // largest | |r| - 1 | removed by a projection

    const BlochVector& final_point() const { return points.back(); }
};

struct PropagateOptions {
    double step_control = kDefaultStepControl;
    bool record = true;     // keep every step; otherwise only the endpoints
    int max_doublings = 12; // cap on step-count doublings during step control
    std::size_t min_steps = 0;
};

namespace detail {

template <class Velocity>
Trajectory rk4_run(const Velocity& v, double g, const BlochVector& r0, double duration, std::size_t steps,
                   bool record) {
    Trajectory tr;
    tr.steps = steps;
    tr.times.push_back(0.0);
    tr.points.push_back(r0);
    Vec3 r = r0.vec();
    const double dt = steps ? duration / static_cast<double>(steps) : 0.0;
    double t = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
        const Vec3 k1 = v(r);
        if (norm(k1) < kFixedPointCutoff * g) {
            tr.stopped_early = true;
            break;
        }
        const Vec3 k2 = v(r + (0.5 * dt) * k1);
        const Vec3 k3 = v(r + (0.5 * dt) * k2);
        const Vec3 k4 = v(r + dt * k3);
        const Vec3 next = r + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double len = norm(next);
        tr.max_norm_correction = std::max(tr.max_norm_correction, std::abs(len - 1.0));
        r = next * (1.0 / len);
        t = (i + 1 == steps) ? duration : dt * static_cast<double>(i + 1);
        if (record || i + 1 == steps) {
            tr.times.push_back(t);
            tr.points.push_back(BlochVector::project(r));
        }
    }
    if (tr.stopped_early && tr.times.back() != t) {
        tr.times.push_back(t);
        tr.points.push_back(BlochVector::project(r));
    }
    if (tr.times.size() > 1 && tr.times.back() == tr.times[tr.times.size() - 2]) {
        tr.times.pop_back();
        tr.points.pop_back();
    }
    tr.stop_time = tr.times.back();
    return tr;
}

inline std::size_t default_steps(double g, double duration) {
    if (duration <= 0.0) return 0;
    const double dt = std::min(1e-3 / g, duration / 1000.0);
    return static_cast<std::size_t>(std::ceil(duration / dt - 1e-9));
}

} // namespace detail

// Integrates any autonomous tangent velocity with rate scale g. The step count starts from
// dt = min(1e-3/g, duration/1000) and doubles until the endpoint moves by less than
// step_control.
template <class Velocity>
Trajectory propagate_field(const Velocity& v, double g, const BlochVector& r0, double duration,
                           const PropagateOptions& opts = {}, std::string label = "field") {
    detail::checked_rate(g);
    if (!(duration >= 0.0) || !std::isfinite(duration)) throw DomainError("duration must be finite and >= 0");
    if (std::abs(norm(r0.vec()) - 1.0) > kInputNormTolerance) throw DomainError("initial point is not unit");
    std::size_t steps = std::max(detail::default_steps(g, duration), opts.min_steps);
    if (steps == 0) {
        auto tr = detail::rk4_run(v, g, r0, 0.0, 0, opts.record);
        tr.model = std::move(label);
        return tr;
    }
    Vec3 previous_end = detail::rk4_run(v, g, r0, duration, steps, false).final_point().vec();
    Trajectory fine;
    for (int d = 0; d <= opts.max_doublings; ++d) {
        steps *= 2;
        fine = detail::rk4_run(v, g, r0, duration, steps, opts.record);
        if (norm(fine.final_point().vec() - previous_end) < opts.step_control) break;
        previous_end = fine.final_point().vec();
    }
    fine.model = std::move(label);
    return fine;
}

inline Trajectory propagate(const NonlinearModel& m, const BlochVector& r0, double duration,
                            double step_control = kDefaultStepControl) {
    PropagateOptions opts;
    opts.step_control = step_control;
    return propagate_field([&m](const Vec3& r) { return velocity(m, r); }, rate(m), r0, duration, opts,
                           std::string(model_name(m)));
}

inline Trajectory propagate(const NonlinearModel& m, const BlochVector& r0, double duration,
                            const PropagateOptions& opts) {
    return propagate_field([&m](const Vec3& r) { return velocity(m, r); }, rate(m), r0, duration, opts,
                           std::string(model_name(m)));
}

// Single fixed-step run without step control; used for order-of-accuracy checks.
inline BlochVector propagate_fixed(const NonlinearModel& m, const BlochVector& r0, double duration,
                                   std::size_t steps) {
    return detail::rk4_run([&m](const Vec3& r) { return velocity(m, r); }, rate(m), r0, duration, steps, false)
        .final_point();
}

// RK4 on the spinor under H(psi) = u(<sigma>) . sigma / 2, renormalised every step.
inline Trajectory propagate_wavefunction(const NonlinearModel& m, const BlochVector& r0, double duration,
                                         std::size_t steps) {
    if (!(duration >= 0.0)) throw DomainError("duration must be >= 0");
    auto rhs = [&m](const Spinor& psi) {
        const double n2 = std::norm(psi[0]) + std::norm(psi[1]);
        const auto c = std::conj(psi[0]) * psi[1];
        const Vec3 r{2.0 * c.real() / n2, 2.0 * c.imag() / n2, (std::norm(psi[0]) - std::norm(psi[1])) / n2};
        const Vec3 h = u_field(m, r);
        using C = std::complex<double>;
        const C mi(0.0, -0.5);
        // -i (h . sigma / 2) psi
        return Spinor{mi * (C(h.z, 0.0) * psi[0] + C(h.x, -h.y) * psi[1]),
                      mi * (C(h.x, h.y) * psi[0] - C(h.z, 0.0) * psi[1])};
    };
    auto axpy = [](const Spinor& a, double s, const Spinor& b) { return Spinor{a[0] + s * b[0], a[1] + s * b[1]}; };

    Trajectory tr;
    tr.model = std::string(model_name(m)) + " (wavefunction)";
    tr.steps = steps;
    tr.times.push_back(0.0);
    tr.points.push_back(r0);
    Spinor psi = spinor_of(r0);
    const double dt = steps ? duration / static_cast<double>(steps) : 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
        const Spinor k1 = rhs(psi);
        const Spinor k2 = rhs(axpy(psi, 0.5 * dt, k1));
        const Spinor k3 = rhs(axpy(psi, 0.5 * dt, k2));
        const Spinor k4 = rhs(axpy(psi, dt, k3));
        for (int j = 0; j < 2; ++j) psi[j] += (dt / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        const double len = std::sqrt(std::norm(psi[0]) + std::norm(psi[1]));
        tr.max_norm_correction = std::max(tr.max_norm_correction, std::abs(len - 1.0));
        psi[0] /= len;
        psi[1] /= len;
        tr.times.push_back(i + 1 == steps ? duration : dt * static_cast<double>(i + 1));
        tr.points.push_back(bloch_of(psi));
    }
    tr.stop_time = tr.times.back();
    return tr;
}

// First-order estimate of when the path passes closest to target, from the last point and
// the local velocity. Valid when the endpoint is already near target.
inline double arrival_time(const NonlinearModel& m, const Trajectory& tr, const Vec3& target) {
    const Vec3 r = tr.final_point().vec();
    const Vec3 v = velocity(m, r);
    const double speed2 = dot(v, v);
    if (speed2 == 0.0) return tr.stop_time;
    return tr.stop_time - dot(r - target, v) / speed2;
}

struct MonotonicityDemo {
    int n = 0;
    double theta1 = 0.0;
    double gate_time = 0.0;
    double initial_distance = 0.0;
    double final_distance = 0.0;
    BlochVector final_a;
    BlochVector final_b;
};

// Rotates |psi_0>, |psi_1> to r_a, r_b and runs both through the torsion gate. The chord
// between them grows towards 2, which no linear positive trace-preserving map can do.
inline MonotonicityDemo monotonicity_violation_demo(int n, double g,
                                                    double step_control = kDefaultStepControl) {
    if (n < 2) throw DomainError("monotonicity demo requires n >= 2");
    MonotonicityDemo demo;
    demo.n = n;
    demo.theta1 = theta_of_s(1, n);
    const double gamma = 0.5 * std::numbers::pi - 0.5 * demo.theta1;
    const BlochVector ra = rotate_y(encode_state(0, n).bloch, gamma);
    const BlochVector rb = rotate_y(encode_state(1, n).bloch, gamma);
    const TorsionModel model(g, torsion_choose_B(demo.theta1, g));
    demo.gate_time = torsion_gate_time(demo.theta1, g).exact;
    demo.initial_distance = bloch_distance(ra, rb);
    PropagateOptions opts;
    opts.step_control = step_control;
    opts.record = false;
    demo.final_a = propagate(model, ra, demo.gate_time, opts).final_point();
    demo.final_b = propagate(model, rb, demo.gate_time, opts).final_point();
    demo.final_distance = bloch_distance(demo.final_a, demo.final_b);
    return demo;
}

} // namespace nlq
