#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nlq/integrator.hpp"

using namespace nlq;

namespace {

constexpr double kPi = std::numbers::pi;

BlochVector at_height(double z) { return BlochVector::project({std::sqrt((1 - z) * (1 + z)), 0.0, z}); }

} // namespace

TEST(Propagate, MorseSmaleMatchesClosedForm) {
    const double g = 1.0;
    const BlochVector r0(std::sin(0.4), 0.0, std::cos(0.4));
    const auto tr = propagate(MorseSmaleModel(g), r0, 2.0 / g);
    EXPECT_NEAR(tr.final_point().z(), morse_smale_height(std::cos(0.4), 2.0 / g, g), 1e-8);
}

TEST(Propagate, ClosedFormsAcrossHeights) {
    for (double g : {0.5, 2.0}) {
        for (double z0 : {0.99, 0.5, 0.1, 0.0, -0.1, -0.5, -0.99}) {
            for (double gt : {0.1, 1.0, 5.0}) {
                const auto ms = propagate(MorseSmaleModel(g), at_height(z0), gt / g);
                EXPECT_NEAR(ms.final_point().z(), morse_smale_height(z0, gt / g, g), 1e-8);
                const auto pf = propagate(PitchforkModel(g), at_height(z0), gt / g);
                EXPECT_NEAR(pf.final_point().z(), pitchfork_height(z0, gt / g, g), 1e-8);
            }
        }
    }
}

TEST(Propagate, EquatorIsInvariantForPitchfork) {
    const auto tr = propagate(PitchforkModel(1.0), BlochVector(0.6, 0.8, 0.0), 5.0);
    EXPECT_NEAR(tr.final_point().z(), 0.0, 1e-10);
}

TEST(Propagate, TrajectoryInvariants) {
    const auto tr = propagate(TorsionModel(1.0, 0.3), BlochVector(0.0, 0.6, 0.8), 3.0);
    ASSERT_EQ(tr.times.size(), tr.points.size());
    EXPECT_EQ(tr.times.front(), 0.0);
    EXPECT_EQ(tr.times.back(), 3.0);
    for (std::size_t i = 1; i < tr.times.size(); ++i) EXPECT_GT(tr.times[i], tr.times[i - 1]);
    for (const auto& r : tr.points) EXPECT_NEAR(norm(r.vec()), 1.0, 1e-12);
    EXPECT_LT(tr.max_norm_correction, 1e-12);
    EXPECT_EQ(tr.model, "torsion");
}

TEST(Propagate, RejectsBadInput) {
    EXPECT_THROW(propagate(MorseSmaleModel(1.0), BlochVector(), -1.0), DomainError);
    const auto tr = propagate(MorseSmaleModel(1.0), BlochVector(), 0.0);
    EXPECT_EQ(tr.points.size(), 1u);
}

TEST(Propagate, StopsNearFixedPoints) {
    const auto tr = propagate(MorseSmaleModel(1.0), BlochVector(), 10.0);
    EXPECT_TRUE(tr.stopped_early);
    EXPECT_EQ(tr.final_point(), BlochVector());
}

TEST(Propagate, FourthOrderConvergence) {
    const double g = 1.0;
    const double z0 = 0.5;
    const double t = 1.0;
    for (const NonlinearModel& m : {NonlinearModel(MorseSmaleModel(g)), NonlinearModel(PitchforkModel(g))}) {
        const double exact = std::holds_alternative<MorseSmaleModel>(m) ? morse_smale_height(z0, t, g)
                                                                        : pitchfork_height(z0, t, g);
        const double e1 = std::abs(propagate_fixed(m, at_height(z0), t, 20).z() - exact);
        const double e2 = std::abs(propagate_fixed(m, at_height(z0), t, 40).z() - exact);
        EXPECT_GE(e1 / e2, 14.0) << model_name(m);
        EXPECT_LE(e1 / e2, 18.0) << model_name(m);
    }
}

TEST(Propagate, WavefunctionRouteAgrees) {
    const double g = 1.0;
    const BlochVector r0(std::sin(1.1) * std::cos(0.3), std::sin(1.1) * std::sin(0.3), std::cos(1.1));
    for (const NonlinearModel& m : {NonlinearModel(TorsionModel(g, 0.4)), NonlinearModel(MorseSmaleModel(g)),
                                    NonlinearModel(PitchforkModel(g))}) {
        const auto bloch = propagate(m, r0, 2.0);
        const auto wave = propagate_wavefunction(m, r0, 2.0, 4000);
        EXPECT_LT(bloch_distance(bloch.final_point(), wave.final_point()), 1e-7) << model_name(m);
    }
}

TEST(TorsionGate, ReachesPolesAtGateTime) {
    const double g = 1.0;
    for (int n : {2, 4, 8}) {
        const double theta1 = theta_of_s(1, n);
        const TorsionModel m(g, torsion_choose_B(theta1, g));
        const double t_g = torsion_gate_time(theta1, g).exact;
        const double gamma = kPi / 2 - theta1 / 2;
        const auto a = propagate(m, rotate_y(encode_state(0, n).bloch, gamma), t_g);
        const auto b = propagate(m, rotate_y(encode_state(1, n).bloch, gamma), t_g);
        EXPECT_GT(a.final_point().z(), 0.999999);
        EXPECT_LT(b.final_point().z(), -0.999999);
    }
}

TEST(TorsionGate, BranchesMirrorEachOther) {
    const double g = 1.0;
    const int n = 4;
    const double theta1 = theta_of_s(1, n);
    const NonlinearModel m = TorsionModel(g, torsion_choose_B(theta1, g));
    const double gamma = kPi / 2 - theta1 / 2;
    const auto a = propagate(m, rotate_y(encode_state(0, n).bloch, gamma), torsion_gate_time(theta1, g).exact);
    const auto b = propagate(m, rotate_y(encode_state(1, n).bloch, gamma), torsion_gate_time(theta1, g).exact);
    for (std::size_t i = 1; i + 1 < a.points.size(); ++i) {
        const auto& r = a.points[i];
        EXPECT_GT(r.y(), 0.0);
        EXPECT_GT(velocity(m, r.vec()).z, 0.0);
    }
    for (std::size_t i = 1; i + 1 < b.points.size(); ++i) EXPECT_LT(velocity(m, b.points[i].vec()).z, 0.0);
    EXPECT_NEAR(arrival_time(m, a, kUnitZ), arrival_time(m, b, -1.0 * kUnitZ), 1e-8);
}

TEST(TorsionGate, MonotonicityViolation) {
    const auto d4 = monotonicity_violation_demo(4, 1.0);
    EXPECT_NEAR(d4.initial_distance, 2 * std::sin(theta_of_s(1, 4) / 2), 1e-14);
    EXPECT_NEAR(d4.initial_distance, 0.133, 1e-3);
    EXPECT_GE(d4.final_distance, 1.99);
    const auto d10 = monotonicity_violation_demo(10, 1.0);
    // theta_1 = 2^{1-n} (1 + 2^{-n}) to first order, and the chord matches theta_1 to O(theta_1^3).
    EXPECT_NEAR(d10.initial_distance, std::ldexp(1.0, -9) * (1 + std::ldexp(1.0, -10)), 1e-8);
    EXPECT_GE(d10.final_distance, 1.99);
    EXPECT_THROW(monotonicity_violation_demo(1, 1.0), DomainError);
}

TEST(TorsionGate, RateRescalesTimeOnly) {
    const auto slow = monotonicity_violation_demo(6, 1.0);
    const auto fast = monotonicity_violation_demo(6, 2.0);
    EXPECT_NEAR(fast.gate_time, slow.gate_time / 2, 1e-14);
    EXPECT_LT(bloch_distance(fast.final_a, slow.final_a), 1e-8);
    EXPECT_LT(bloch_distance(fast.final_b, slow.final_b), 1e-8);
}
